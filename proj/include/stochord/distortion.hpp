#pragma once

#include "stochord/distribution.hpp"

#include <map>
#include <string>
#include <vector>

namespace stochord {

/// Rank index floor((n-1) * gamma_n), guarded against products landing just below an integer.
int rank_index(int n, double gamma_n);

/// Sequence gamma_n -> gamma with |gamma_n - gamma| <= K / n.
class IndexSequence {
public:
    enum class Rule { constant, kth_smallest, kth_largest, custom };

    static IndexSequence constant(double gamma);
    static IndexSequence kth_smallest(int k);
    static IndexSequence kth_largest(int k);
    /// Explicit table n -> gamma_n; K is measured from the table.
    static IndexSequence custom(double gamma, std::map<int, double> table);

    double gamma() const noexcept { return gamma_; }
    Rule rule() const noexcept { return rule_; }
    int k() const noexcept { return k_; }
    double rate_constant() const noexcept { return K_; }
    /// Smallest n the rule is defined for.
    int min_n() const;
    double gamma_at(int n) const;
    std::string describe() const;

private:
    IndexSequence(double gamma, Rule rule, int k, double K) : gamma_(gamma), rule_(rule), k_(k), K_(K) {}
    double gamma_;
    Rule rule_;
    int k_;
    double K_;
    std::map<int, double> table_;
};

/// Distortion function phi: [0,1] -> [0,1].
class Distortion {
public:
    enum class Family { order_stat, mixture, record };

    /// Law of the (1 + floor((n-1) gamma_n))-th smallest of n iid draws.
    static Distortion order_stat(int n, double gamma_n);
    /// Convex combination of order-statistic distortions sharing n.
    static Distortion mixture(int n, std::vector<double> alphas, std::vector<double> gammas_n);
    /// n-th upper k-record.
    static Distortion record(int n, int k);

    Family family() const noexcept { return family_; }
    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    const std::vector<double>& alphas() const noexcept { return alphas_; }
    const std::vector<double>& gammas() const noexcept { return gammas_; }
    const std::vector<int>& ranks() const noexcept { return ranks_; }

    double value(double u) const;
    /// phi'(u) for 0 < u < 1; throws domain_error at the endpoints.
    double derivative(double u) const;
    double log_derivative(double u) const;
    /// phi^{-1}(v) for v in [0,1].
    double inverse(double v) const;
    /// Interior argmax points of phi' (panel split points).
    std::vector<double> modes() const;
    std::string describe() const;

private:
    Distortion() = default;
    Family family_ = Family::order_stat;
    int n_ = 1;
    int k_ = 1;
    std::vector<double> alphas_;
    std::vector<double> gammas_;
    std::vector<int> ranks_;
    std::vector<double> log_consts_;
};

double phi_value(const Distortion& d, double u);
double phi_derivative(const Distortion& d, double u);
double phi_log_derivative(const Distortion& d, double u);
double phi_inverse(const Distortion& d, double v);

/// floor((n-1) gamma_n) / (n-1), the argmax of phi'_{n,gamma_n}.
double phi_derivative_mode(int n, double gamma_n);

/// (t/s)^gamma * ((1-t)/(1-s))^(1-gamma)
double xi_gamma(double gamma, double t, double s);

struct RatioBound {
    double bound;
    double C_ts;
};

/// Upper bound on phi'_{n,gamma_n}(t) / phi'_{n,gamma_n}(s) valid for every n.
RatioBound derivative_ratio_bound(int n, const IndexSequence& seq, double t, double s);

/// Distribution with cdf phi(F(x)) and quantile F^{-1}(phi^{-1}(v)).
Distribution distort(const Distribution& base, const Distortion& d);

struct MixtureCrossing {
    int i = 0, j = 1;
    double u_ij = 0.5;
    double delta_ij = 0.0;
};

/// Limit point where the log-derivatives of two order-statistic components cross.
MixtureCrossing mixture_crossing(double gamma_i, double gamma_j);

struct ConvexityWindow {
    double alpha_n;
    double beta_n;
};

/// Roots of the quadratic factor of phi'''_{n,gamma_n}; phi' is concave exactly between them.
ConvexityWindow convexity_window(int n, double gamma_n);

}  // namespace stochord
