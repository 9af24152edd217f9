#include "stochord/crossings.hpp"

#include "stochord/errors.hpp"
#include "stochord/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace stochord {

IntervalSet::IntervalSet(std::vector<Interval> intervals) : iv_(std::move(intervals)) {
    double prev = 0.0;
    for (const auto& [l, r] : iv_) {
        if (!(l >= 0.0 && l < r && r <= 1.0 && l >= prev)) throw argument_error("IntervalSet: intervals must be ordered, disjoint, nonempty, inside (0,1)");
        prev = r;
    }
}

double IntervalSet::measure() const {
    double m = 0.0;
    for (const auto& [l, r] : iv_) m += r - l;
    return m;
}

bool IntervalSet::contains(double u) const {
    return std::any_of(iv_.begin(), iv_.end(), [u](const Interval& i) { return u > i.first && u < i.second; });
}

double IntervalSet::distance_to(double g) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [l, r] : iv_) {
        if (g >= l && g <= r) return 0.0;
        best = std::min(best, g < l ? l - g : g - r);
    }
    return best;
}

std::optional<double> IntervalSet::sup_below(double g) const {
    std::optional<double> out;
    for (const auto& [l, r] : iv_) {
        if (l < g) out = std::min(r, g);
    }
    return out;
}

std::optional<double> IntervalSet::inf_above(double g) const {
    for (const auto& [l, r] : iv_) {
        if (r > g) return std::max(l, g);
    }
    return std::nullopt;
}

IntervalSet IntervalSet::unite(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> all = a.iv_;
    all.insert(all.end(), b.iv_.begin(), b.iv_.end());
    std::sort(all.begin(), all.end());
    std::vector<Interval> merged;
    for (const auto& iv : all) {
        // Open intervals sharing only an endpoint stay separate: the shared point is not covered.
        if (!merged.empty() && iv.first < merged.back().second) {
            merged.back().second = std::max(merged.back().second, iv.second);
        } else {
            merged.push_back(iv);
        }
    }
    return IntervalSet(std::move(merged));
}

namespace {

struct SignProbe {
    const Law& x;
    const Law& y;

    int operator()(double u) const {
        const double qa = x.quantile(u), qb = y.quantile(u);
        std::int8_t s = 0;
        kernels::scalar::classify_sign(&qa, &qb, 1, kCrossingTol, &s);
        return s;
    }
};

// Largest point still carrying sign s_lo between lo (sign s_lo) and hi (different sign).
std::pair<double, double> refine(const SignProbe& sign, double lo, double hi, int s_lo) {
    while (hi - lo > kCrossingTol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (sign(mid) == s_lo) lo = mid; else hi = mid;
    }
    return {lo, hi};
}

constexpr double kContactWidth = 1e-9;

struct Run {
    int sign;
    double start, end;
};

void require_continuous(const Distribution& d) {
    if (!d.is_continuous())
        throw unsupported_error("crossing detection needs continuous strictly increasing laws; got " + d.describe());
}

}  // namespace

CrossingSets crossing_sets(const Distribution& x, const Distribution& y, int grid_size) {
    if (grid_size < kMinGridSize) throw argument_error("crossing_sets: grid_size must be >= 64");
    require_continuous(x);
    require_continuous(y);
    const SignProbe sign{x.law(), y.law()};

    const auto n = static_cast<std::size_t>(grid_size - 1);
    std::vector<double> u(n), qa(n), qb(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = static_cast<double>(i + 1) / grid_size;
        qa[i] = x.law().quantile(u[i]);
        qb[i] = y.law().quantile(u[i]);
    }
    std::vector<std::int8_t> s(n);
    kernels::classify_sign(qa.data(), qb.data(), n, kCrossingTol, s.data());

    // Constant-sign runs; boundaries between neighbouring grid points are bisected.
    std::vector<Run> runs;
    runs.push_back({s[0], 0.0, 1.0});
    for (std::size_t i = 1; i < n; ++i) {
        if (s[i] == s[i - 1]) continue;
        const auto [lo, hi] = refine(sign, u[i - 1], u[i], s[i - 1]);
        runs.back().end = lo;
        runs.push_back({s[i], hi, 1.0});
    }

    // Zero runs narrower than kContactWidth are contact points, not plateaus.
    std::vector<Run> merged;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Run& r = runs[i];
        const bool point = r.sign == 0 && r.end - r.start <= kContactWidth && i > 0 && i + 1 < runs.size();
        if (point) {
            const Run& next = runs[i + 1];
            if (merged.back().sign == next.sign) {
                merged.back().end = next.end;  // touch point: drop it
            } else {
                const double mid = 0.5 * (r.start + r.end);
                merged.back().end = mid;
                merged.push_back({next.sign, mid, next.end});
            }
            ++i;
            continue;
        }
        if (!merged.empty() && merged.back().sign == r.sign) {
            merged.back().end = r.end;
        } else {
            merged.push_back(r);
        }
    }
    // A transversal crossing bisected directly between +/- grid points leaves a gap of
    // at most 1e-12; close it at the midpoint so both sets share the endpoint.
    for (std::size_t i = 1; i < merged.size(); ++i) {
        if (merged[i - 1].sign != 0 && merged[i].sign != 0) {
            const double mid = 0.5 * (merged[i - 1].end + merged[i].start);
            merged[i - 1].end = mid;
            merged[i].start = mid;
        }
    }

    std::vector<IntervalSet::Interval> pos, neg;
    for (const auto& r : merged) {
        if (!(r.end > r.start)) continue;
        if (r.sign > 0) pos.emplace_back(r.start, r.end);
        if (r.sign < 0) neg.emplace_back(r.start, r.end);
    }
    CrossingSets out{IntervalSet(std::move(pos)), IntervalSet(std::move(neg)), {}};
    out.a2 = IntervalSet::unite(out.a0, out.a1);
    return out;
}

BoundaryQuantities boundary_quantities(const IntervalSet& a0, const IntervalSet& a2, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw domain_error("boundary_quantities: gamma must lie in [0,1]");
    BoundaryQuantities bq;
    bq.gamma = gamma;
    const auto c = a0.sup_below(gamma), d = a0.inf_above(gamma);
    const auto a = a2.sup_below(gamma), b = a2.inf_above(gamma);
    bq.left_empty = !c;
    bq.right_empty = !d;
    bq.a2_left_empty = !a;
    bq.a2_right_empty = !b;
    bq.fx_c = c.value_or(0.0);
    bq.fx_d = d.value_or(1.0);
    bq.fx_a = a.value_or(0.0);
    bq.fx_b = b.value_or(1.0);
    return bq;
}

bool hypothesis_check(const BoundaryQuantities& bq, std::optional<double> delta) {
    bool ok = (bq.left_empty || bq.fx_c < bq.fx_a) && (bq.right_empty || bq.fx_b < bq.fx_d);
    if (ok && delta) {
        // Windowed form applies only where A2 meets the side in question.
        if (!bq.a2_left_empty) ok = ok && std::max(bq.fx_c, bq.gamma - *delta) < bq.fx_a;
        if (!bq.a2_right_empty) ok = ok && bq.fx_b < std::min(bq.fx_d, bq.gamma + *delta);
    }
    return ok;
}

}  // namespace stochord
