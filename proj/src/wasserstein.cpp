#include "stochord/wasserstein.hpp"

#include "stochord/errors.hpp"
#include "stochord/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace stochord {

const char* to_string(Convention c) {
    switch (c) {
        case Convention::none: return "none";
        case Convention::zero_distance: return "zero_distance";
        case Convention::infinite_numerator: return "infinite_numerator";
    }
    return "?";
}

const char* to_string(UsualOrder v) {
    switch (v) {
        case UsualOrder::X_below_Y: return "X_below_Y";
        case UsualOrder::Y_below_X: return "Y_below_X";
        case UsualOrder::equal: return "equal";
        case UsualOrder::crossing: return "crossing";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_unit(double u) { return std::clamp(u, kQuantileClamp, 1.0 - kQuantileClamp); }

void require_second_moment(const Distribution& d) {
    if (!d.has_finite_second_moment())
        throw unsupported_error("infinite second moment: " + d.describe() + " has no finite variance");
}

DepartureReport finish(double num, double comp, IntervalSet a0) {
    DepartureReport r;
    r.numerator = num;
    r.denominator = num + comp;
    r.w2 = std::sqrt(r.denominator);
    r.a0 = std::move(a0);
    if (r.denominator == 0.0) {
        r.convention = Convention::zero_distance;
        r.epsilon = 0.0;
    } else {
        r.epsilon = std::clamp(num / r.denominator, 0.0, 1.0);
    }
    return r;
}

// Exact computation for two step quantile functions.
DepartureReport empirical_departure(const EmpiricalSample& xs, const EmpiricalSample& ys) {
    const auto n = xs.size(), m = ys.size();
    std::vector<double> cuts;
    cuts.reserve(n + m);
    for (std::size_t i = 1; i <= n; ++i) cuts.push_back(static_cast<double>(i) / n);
    for (std::size_t j = 1; j <= m; ++j) cuts.push_back(static_cast<double>(j) / m);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double num = 0.0, comp = 0.0, prev = 0.0;
    std::vector<IntervalSet::Interval> pos;
    for (double c : cuts) {
        const double mid = 0.5 * (prev + c);
        const auto ix = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::ceil(mid * n)) - 1);
        const auto iy = std::min<std::size_t>(m - 1, static_cast<std::size_t>(std::ceil(mid * m)) - 1);
        const double qa = xs.values()[ix], qb = ys.values()[iy];
        const double h = qa - qb;
        const double tol = kCrossingTol * std::max(1.0, std::fabs(qa) + std::fabs(qb));
        const double mass = h * h * (c - prev);
        if (h > tol) {
            num += mass;
            if (!pos.empty() && pos.back().second == prev) pos.back().second = c;
            else pos.emplace_back(prev, c);
        } else if (h < -tol) {
            comp += mass;
        }
        prev = c;
    }
    return finish(num, comp, IntervalSet(std::move(pos)));
}

std::vector<std::pair<double, double>> cut(const IntervalSet& s, const std::vector<double>& points) {
    std::vector<std::pair<double, double>> out;
    for (auto [l, r] : s.intervals()) {
        for (double p : points) {
            if (p > l && p < r) {
                out.emplace_back(l, p);
                l = p;
            }
        }
        out.emplace_back(l, r);
    }
    return out;
}

// Tail growth test near an endpoint: integrals over successive decades of u (or 1-u).
bool tail_diverges(const std::function<double(double)>& f, bool at_zero) {
    quad::Options o;
    o.rel_tol = 1e-6;
    double prev = 0.0;
    int growth = 0;
    for (int k = 1; k <= 6; ++k) {
        const double hi = std::pow(10.0, -k), lo = std::pow(10.0, -(k + 1));
        auto g = [&](double t) { return f(at_zero ? t : 1.0 - t); };
        const double v = quad::integrate(g, lo, hi, o).value;
        if (k > 1 && prev > 0.0 && v > 2.0 * prev) {
            if (++growth >= 3) return true;
        } else if (k > 1) {
            growth = 0;
        }
        prev = v;
    }
    return false;
}

}  // namespace

DepartureReport weighted_departure(const Distribution& x, const Distribution& y, const CrossingSets& cs,
                                   const UnitWeight* weight, const DepartureOptions& opt) {
    const bool finite = x.has_finite_second_moment() && y.has_finite_second_moment();
    if (opt.require_finite_second_moment) {
        require_second_moment(x);
        require_second_moment(y);
    }
    const Law& lx = x.law();
    const Law& ly = y.law();
    auto eval = [&](double u, double& qa, double& qb, double& w) {
        const double uc = clamp_unit(u);
        qa = lx.quantile(uc);
        qb = ly.quantile(uc);
        w = weight ? std::exp(weight->log_weight(uc)) : 1.0;
    };

    if (!finite) {
        auto integrand = [&](double u) {
            double qa, qb, w;
            eval(u, qa, qb, w);
            return w * (qa - qb) * (qa - qb);
        };
        for (const auto& [l, r] : cs.a0.intervals()) {
            if ((l <= 0.0 && tail_diverges(integrand, true)) || (r >= 1.0 && tail_diverges(integrand, false))) {
                DepartureReport rep;
                rep.epsilon = 1.0;
                rep.numerator = rep.denominator = rep.w2 = kInf;
                rep.a0 = cs.a0;
                rep.convention = Convention::infinite_numerator;
                return rep;
            }
        }
    }

    std::vector<double> splits{0.5};
    if (weight) splits.insert(splits.end(), weight->split_points.begin(), weight->split_points.end());
    std::sort(splits.begin(), splits.end());

    quad::Options qo;
    qo.rel_tol = opt.rel_tol;
    auto total = [&](const IntervalSet& s) {
        double acc = 0.0;
        for (const auto& [l, r] : cut(s, splits)) acc += quad::integrate_unit_sq_diff(eval, l, r, qo).value;
        return acc;
    };
    return finish(total(cs.a0), total(cs.a1), cs.a0);
}

DepartureReport departure(const Distribution& x, const Distribution& y, const DepartureOptions& opt) {
    const auto* xs = x.sample();
    const auto* ys = y.sample();
    if (xs && ys) return empirical_departure(*xs, *ys);
    if (xs || ys) throw unsupported_error("departure between an empirical and a continuous law is not supported");
    if (opt.require_finite_second_moment) {
        require_second_moment(x);
        require_second_moment(y);
    }
    return weighted_departure(x, y, crossing_sets(x, y, opt.grid_size), nullptr, opt);
}

double w2_distance(const Distribution& x, const Distribution& y, const DepartureOptions& opt) {
    return departure(x, y, opt).w2;
}

double departure_l1(const Distribution& x, const Distribution& y) {
    const auto cs = crossing_sets(x, y);
    const double p = 1e-9;
    const double lo = std::min(x.quantile(p), y.quantile(p));
    const double hi = std::max(x.quantile(1.0 - p), y.quantile(1.0 - p));

    std::vector<double> knots{lo, hi};
    for (const auto* s : {&cs.a0, &cs.a1}) {
        for (const auto& [l, r] : s->intervals()) {
            for (double u : {l, r}) {
                if (u > 0.0 && u < 1.0) {
                    const double xc = x.quantile(u);
                    if (xc > lo && xc < hi) knots.push_back(xc);
                }
            }
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    quad::Options qo;
    qo.rel_tol = 1e-10;
    qo.abs_tol = 1e-15;
    auto g = [&](double t) { return y.cdf(t) - x.cdf(t); };
    double pos = 0.0, total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double v = quad::integrate(g, knots[i], knots[i + 1], qo).value;
        if (v > 0.0) pos += v;
        total += std::fabs(v);
    }
    return total > 0.0 ? std::clamp(pos / total, 0.0, 1.0) : 0.0;
}

UsualOrder usual_order_verdict(const Distribution& x, const Distribution& y) {
    const auto cs = crossing_sets(x, y);
    if (cs.a2.empty()) return UsualOrder::equal;
    if (cs.a0.empty()) return UsualOrder::X_below_Y;
    if (cs.a1.empty()) return UsualOrder::Y_below_X;
    return UsualOrder::crossing;
}

}  // namespace stochord
