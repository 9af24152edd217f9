#include "stochord/piecewise.hpp"

#include "stochord/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stochord {

double Segment::cdf(double x) const {
    switch (type) {
        case Type::exp_left: return coef * std::exp(slope * (x - anchor));
        case Type::affine: return coef + slope * (x - anchor);
        case Type::exp_right: return 1.0 - coef * std::exp(-slope * (x - anchor));
    }
    return 0.0;
}

double Segment::quantile(double u) const {
    switch (type) {
        case Type::exp_left: return anchor + std::log(u / coef) / slope;
        case Type::affine: return anchor + (u - coef) / slope;
        case Type::exp_right: return anchor - std::log((1.0 - u) / coef) / slope;
    }
    return 0.0;
}

double Segment::density(double x) const {
    switch (type) {
        case Type::exp_left: return coef * slope * std::exp(slope * (x - anchor));
        case Type::affine: return slope;
        case Type::exp_right: return coef * slope * std::exp(-slope * (x - anchor));
    }
    return 0.0;
}

namespace {
constexpr double kContinuityTol = 1e-9;
}

PiecewiseCdf::PiecewiseCdf(std::vector<double> breakpoints, std::vector<Segment> segments)
    : breaks_(std::move(breakpoints)), segs_(std::move(segments)) {
    if (segs_.size() != breaks_.size() + 1) throw argument_error("piecewise: need exactly one more segment than breakpoints");
    if (segs_.front().type != Segment::Type::exp_left || segs_.back().type != Segment::Type::exp_right)
        throw argument_error("piecewise: first segment must be exp_left and last exp_right");
    for (const auto& s : segs_) {
        if (!(s.slope > 0) || !std::isfinite(s.slope) || !std::isfinite(s.coef) || !std::isfinite(s.anchor))
            throw argument_error("piecewise: every segment needs a finite positive slope");
        if (s.type != Segment::Type::affine && !(s.coef > 0)) throw argument_error("piecewise: tail coefficient must be > 0");
    }
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        if (!std::isfinite(breaks_[i]) || (i > 0 && !(breaks_[i] > breaks_[i - 1])))
            throw argument_error("piecewise: breakpoints must be finite and strictly ascending");
        const double left = segs_[i].cdf(breaks_[i]);
        const double right = segs_[i + 1].cdf(breaks_[i]);
        if (std::fabs(left - right) > kContinuityTol)
            throw argument_error("piecewise: discontinuity at breakpoint " + std::to_string(breaks_[i]));
        if (!(left > 0.0 && left < 1.0)) throw argument_error("piecewise: breakpoint level outside (0,1)");
        if (!levels_.empty() && !(left > levels_.back())) throw argument_error("piecewise: levels must increase");
        levels_.push_back(left);
    }
    if (breaks_.empty()) {
        // Two tails meeting must still join continuously; caller supplies one breakpoint minimum.
        throw argument_error("piecewise: at least one breakpoint required");
    }
}

double PiecewiseCdf::cdf(double x) const {
    if (x == -INFINITY) return 0.0;
    if (x == INFINITY) return 1.0;
    const auto i = static_cast<std::size_t>(std::lower_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
    return std::clamp(segs_[i].cdf(x), 0.0, 1.0);
}

double PiecewiseCdf::quantile(double u) const {
    const auto i = static_cast<std::size_t>(std::lower_bound(levels_.begin(), levels_.end(), u) - levels_.begin());
    double x = segs_[i].quantile(u);
    // Guard rounding at the knots so the result stays inside its segment.
    if (i > 0) x = std::max(x, breaks_[i - 1]);
    if (i < breaks_.size()) x = std::min(x, breaks_[i]);
    return x;
}

double PiecewiseCdf::density(double x) const {
    const auto i = static_cast<std::size_t>(std::lower_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
    return segs_[i].density(x);
}

}  // namespace stochord
