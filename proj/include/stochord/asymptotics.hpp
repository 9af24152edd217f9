#pragma once

#include "stochord/crossings.hpp"
#include "stochord/distortion.hpp"
#include "stochord/distribution.hpp"
#include "stochord/wasserstein.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stochord {

/// Distortion family with n left free.
struct FamilyTemplate {
    enum class Kind { order_stat, mixture, record };
    Kind kind = Kind::order_stat;
    std::vector<double> alphas;  ///< mixture weights
    std::vector<double> gammas;  ///< concentration points (order_stat: one entry)
    int k = 1;                   ///< record order

    static FamilyTemplate order_stat(double gamma);
    static FamilyTemplate mixture(std::vector<double> alphas, std::vector<double> gammas);
    static FamilyTemplate record(int k);

    /// Member at n; order statistics take gamma_n from seq.
    Distortion at(int n, const IndexSequence& seq) const;
    /// Member at n with gamma_n fixed at the concentration points.
    Distortion at(int n) const;
    std::string describe() const;
};

struct SweepResult {
    std::vector<int> indices;
    std::vector<double> gammas_n;  ///< NaN for families without a single rank
    std::vector<double> epsilons;
    std::vector<double> w2s;
    std::optional<double> fitted_log_slope;
};

/// Departure of the distorted pair, computed in the baseline u-domain with weight phi'(u).
DepartureReport distorted_departure(const Distribution& x, const Distribution& y, const Distortion& d,
                                    const DepartureOptions& opt = {});
DepartureReport distorted_departure(const Distribution& x, const Distribution& y, const Distortion& d,
                                    const CrossingSets& cs, const DepartureOptions& opt = {});

SweepResult sweep(const Distribution& x, const Distribution& y, const FamilyTemplate& family,
                  const IndexSequence& seq, const std::vector<int>& ns);

/// Sweep over pairs that change with n, such as the counterexample family.
SweepResult sweep_pairs(const std::vector<int>& ns,
                        const std::function<std::pair<Distribution, Distribution>(int)>& pair_at);

/// Least-squares slope of log(epsilon) against n over the tail half, ignoring zeros.
std::optional<double> tail_log_slope(const std::vector<int>& ns, const std::vector<double>& eps);

enum class DastVerdict { holds, fails, inconclusive };
const char* to_string(DastVerdict v);

DastVerdict dast_verdict(const SweepResult& s, double threshold = 1e-6, int window = 5);

struct DecayBound {
    BoundaryQuantities bq;
    double eps = 0.0;
    double z = 0.0;
    std::optional<double> C;  ///< proof constant, not reconstructed
};

DecayBound decay_bound(const Distribution& x, const Distribution& y, double gamma, double eps);
DecayBound decay_bound(const CrossingSets& cs, double gamma, double eps);

/// Tail-half log-slope of the sweep is at most log(z) + 0.05.
bool bound_validation(const SweepResult& s, const DecayBound& b);

/// P(X_{r:n} <= Y_{r:n}) for independent order statistics of the same rank.
double precedence_probability(const Distribution& x, const Distribution& y, int n, double gamma_n);
double precedence_probability(const Distribution& x, const Distribution& y, const Distortion& d);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Direct simulation of the same probability via Beta-distributed uniform order statistics.
MonteCarloEstimate precedence_monte_carlo(const Distribution& x, const Distribution& y, int n, double gamma_n,
                                          std::size_t samples, std::uint64_t seed);

enum class AspVerdict { leq_asp, eq_asp, neither, inconclusive };
const char* to_string(AspVerdict v);

struct AspReport {
    AspVerdict verdict = AspVerdict::inconclusive;
    double dist_a0 = 0.0;
    double dist_a2 = 0.0;
    std::vector<int> ns;
    std::vector<double> precedence;
};

/// Sufficient conditions first; the precedence tail over ns decides otherwise (empty ns: inconclusive).
AspReport asp_verdict(const Distribution& x, const Distribution& y, const IndexSequence& seq,
                      const std::vector<int>& ns);

struct BinomialProbe {
    std::vector<double> phi_values;
    std::vector<double> scaled_pmf;  ///< n * P(Bin(n-1,u) = floor((n-1) gamma))
};

BinomialProbe binomial_limit_probe(double gamma, double u, const std::vector<int>& ns);

struct C3Witness {
    double gamma;
    double a, b;
    std::vector<double> log_ratios;  ///< log(phi'(a) / phi'(b)) per n
};

struct ConditionProbeReport {
    std::string family;
    std::vector<double> gammas;
    std::vector<double> deltas;
    bool c3_pass = false;
    std::vector<C3Witness> c3_witnesses;
    bool c4_pass = false;
    int c4_violations = 0;
    std::optional<bool> c4_window_inside;  ///< order statistics: concavity window within ±probe_eps
    bool derivative_vanishes_off_gamma = false;
    std::vector<double> off_gamma_max;  ///< max phi' outside the windows, per n
};

ConditionProbeReport condition_probe(const FamilyTemplate& family, const std::vector<int>& ns, double probe_eps);

/// Piecewise pair whose departure stays above 3/(32c) for every n >= 4.
std::pair<Distribution, Distribution> counterexample_pair(int n, double a, double b);

/// 3 / (32 c) with c = 1/3 + (b-a)^2 + (b-a)/6.
double counterexample_lower_bound(double a, double b);

struct HarnessReport {
    int trials = 0;
    int failures = 0;
    double max_complement_error = 0.0;
    double max_location_scale_error = 0.0;
    double max_negation_error = 0.0;
    double max_triangle_excess = 0.0;
    double max_transitivity_ratio = 0.0;  ///< eps(X,Z) / (3 (C1 eps(X,Y) + C2 eps(Y,Z))), must stay <= 1
    double max_shift_epsilon = 0.0;
    std::vector<std::string> messages;
    bool passed() const { return failures == 0; }
};

/// Randomized checks of the measure axioms on analytic laws.
HarnessReport property_harness(int trials, std::uint64_t seed);

}  // namespace stochord
