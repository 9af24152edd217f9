#pragma once

#include <functional>
#include <utility>

namespace stochord::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_panels = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

/// Estimator for one panel: returns (Kronrod estimate, Gauss estimate).
using PanelRule = std::function<std::pair<double, double>(double a, double b)>;

/// Globally adaptive bisection driven by |Kronrod - Gauss|; panels summed in ascending order.
Result adaptive(const PanelRule& rule, double a, double b, const Options& opt);

/// Adaptive G7-K15 for a plain integrand.
Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opt);

/// Integral over [l, r] of the unit interval. Pieces touching 0 use u = s^2, pieces touching 1 use
/// 1 - u = s^2, so integrable endpoint blow-up of order u^(-1/2) or milder becomes bounded.
Result integrate_unit(const std::function<double(double)>& f, double l, double r, const Options& opt);

/// Fills quantile pair (qa, qb) and weight w at u. Used for integrals of w * (qa - qb)^2.
using SqDiffEval = std::function<void(double u, double& qa, double& qb, double& w)>;

/// As integrate_unit for the integrand w(u) * (qa(u) - qb(u))^2; panel sums go through the
/// weighted_sq_diff kernel.
Result integrate_unit_sq_diff(const SqDiffEval& f, double l, double r, const Options& opt);

}  // namespace stochord::quad
