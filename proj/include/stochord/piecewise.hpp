#pragma once

#include <vector>

namespace stochord {

/// One closed-form CDF branch.
///   exp_left : F(x) = coef * exp(slope * (x - anchor))
///   affine   : F(x) = coef + slope * (x - anchor)
///   exp_right: F(x) = 1 - coef * exp(-slope * (x - anchor))
struct Segment {
    enum class Type { exp_left, affine, exp_right };
    Type type;
    double coef;
    double slope;
    double anchor;

    double cdf(double x) const;
    double quantile(double u) const;
    double density(double x) const;
};

/// Continuous, strictly increasing CDF made of closed-form branches.
/// Segment i covers (breakpoints[i-1], breakpoints[i]]; first is exp_left, last exp_right.
class PiecewiseCdf {
public:
    PiecewiseCdf(std::vector<double> breakpoints, std::vector<Segment> segments);

    double cdf(double x) const;
    double quantile(double u) const;
    double density(double x) const;

    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    const std::vector<Segment>& segments() const noexcept { return segs_; }
    /// CDF values at the breakpoints, taken from the left segment.
    const std::vector<double>& knot_levels() const noexcept { return levels_; }

private:
    std::vector<double> breaks_;
    std::vector<Segment> segs_;
    std::vector<double> levels_;
};

}  // namespace stochord
