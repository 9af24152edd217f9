#include "stochord/quadrature.hpp"

#include "stochord/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace stochord::quad {

namespace {

// Kronrod 15-point nodes on [-1,1]; odd indices are the Gauss 7-point nodes.
constexpr std::array<double, 15> kNodes = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr std::array<double, 15> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

constexpr std::array<double, 15> kGauss = {
    0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082, 0.0};

struct Panel {
    double a, b, value, error;
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;  // deterministic tie-break
    }
};

// Maps a parameter s on [0, smax] back to u for the endpoint substitutions.
enum class Map { identity, from_zero, to_one };

struct Substitution {
    Map map;
    double s0, s1;

    double u(double s, double& jac) const {
        switch (map) {
            case Map::identity: jac = 1.0; return s;
            case Map::from_zero: jac = 2.0 * s; return s * s;
            case Map::to_one: jac = 2.0 * s; return 1.0 - s * s;
        }
        jac = 1.0;
        return s;
    }
};

std::vector<Substitution> split_unit(double l, double r) {
    std::vector<Substitution> out;
    if (!(r > l)) return out;
    if (l <= 0.0 && r >= 1.0) {
        out.push_back({Map::from_zero, 0.0, std::sqrt(0.5)});
        out.push_back({Map::to_one, 0.0, std::sqrt(0.5)});
    } else if (l <= 0.0) {
        out.push_back({Map::from_zero, 0.0, std::sqrt(r)});
    } else if (r >= 1.0) {
        out.push_back({Map::to_one, 0.0, std::sqrt(1.0 - l)});
    } else {
        out.push_back({Map::identity, l, r});
    }
    return out;
}

Result accumulate(const std::vector<Result>& parts) {
    Result total;
    for (const auto& p : parts) {
        total.value += p.value;
        total.error += p.error;
        total.panels += p.panels;
        total.converged = total.converged && p.converged;
    }
    return total;
}

}  // namespace

Result adaptive(const PanelRule& rule, double a, double b, const Options& opt) {
    Result res;
    if (!(b > a)) return res;
    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    auto make = [&](double lo, double hi) {
        const auto [k, g] = rule(lo, hi);
        return Panel{lo, hi, k, std::fabs(k - g)};
    };
    heap.push(make(a, b));
    double total = heap.top().value;
    double err = heap.top().error;
    int panels = 1;
    while (panels < opt.max_panels) {
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
        if (err <= target) break;
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // panel can no longer be split
        heap.pop();
        const Panel left = make(worst.a, mid);
        const Panel right = make(mid, worst.b);
        heap.push(left);
        heap.push(right);
        ++panels;
        // Recompute sums from scratch every so often to stop drift from cancellation.
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        if (panels % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : all) {
        res.value += p.value;
        res.error += p.error;
    }
    res.panels = panels;
    res.converged = res.error <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(res.value));
    return res;
}

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opt) {
    auto rule = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        double k = 0.0, g = 0.0;
        for (std::size_t i = 0; i < 15; ++i) {
            const double v = f(c + h * kNodes[i]);
            k += kKronrod[i] * v;
            g += kGauss[i] * v;
        }
        return std::pair{k * h, g * h};
    };
    return adaptive(rule, a, b, opt);
}

Result integrate_unit(const std::function<double(double)>& f, double l, double r, const Options& opt) {
    std::vector<Result> parts;
    for (const auto& sub : split_unit(l, r)) {
        auto g = [&](double s) {
            double jac = 1.0;
            const double u = sub.u(s, jac);
            if (jac == 0.0) return 0.0;
            return f(u) * jac;
        };
        parts.push_back(integrate(g, sub.s0, sub.s1, opt));
    }
    return accumulate(parts);
}

Result integrate_unit_sq_diff(const SqDiffEval& f, double l, double r, const Options& opt) {
    std::vector<Result> parts;
    for (const auto& sub : split_unit(l, r)) {
        auto rule = [&](double lo, double hi) {
            const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
            std::array<double, 15> qa{}, qb{}, wk{}, wg{};
            for (std::size_t i = 0; i < 15; ++i) {
                double jac = 1.0;
                const double u = sub.u(c + h * kNodes[i], jac);
                double w = 0.0;
                f(u, qa[i], qb[i], w);
                const double base = (jac == 0.0 || w == 0.0) ? 0.0 : w * jac * h;
                if (base == 0.0) qa[i] = qb[i] = 0.0;  // keep 0 * inf out of the sums
                wk[i] = base * kKronrod[i];
                wg[i] = base * kGauss[i];
            }
            return std::pair{kernels::weighted_sq_diff(qa.data(), qb.data(), wk.data(), 15),
                             kernels::weighted_sq_diff(qa.data(), qb.data(), wg.data(), 15)};
        };
        parts.push_back(adaptive(rule, sub.s0, sub.s1, opt));
    }
    return accumulate(parts);
}

}  // namespace stochord::quad
