#include "stochord/distortion.hpp"

#include "stochord/errors.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace stochord {

namespace {

// Absorbs rounding in (n-1)*gamma_n products such as (n-1)*((k-1)/(n-1)).
constexpr double kFloorGuard = 1e-9;

void check_unit(double g, const char* what) {
    if (!(g >= 0.0 && g <= 1.0)) throw argument_error(std::string(what) + " must lie in [0,1]");
}

double log_order_stat_const(int n, int r) {
    using boost::math::lgamma;
    return std::log(static_cast<double>(n)) + lgamma(static_cast<double>(n)) - lgamma(r + 1.0) -
           lgamma(static_cast<double>(n - r));
}

double order_stat_value(int n, int r, double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = r + 1.0, b = static_cast<double>(n - r);
    if (a == b && t == 0.5) return 0.5;
    return boost::math::ibeta(a, b, t);
}

double order_stat_log_derivative(int n, int r, double log_const, double u) {
    double v = log_const;
    if (r > 0) v += r * std::log(u);
    if (n - 1 - r > 0) v += (n - 1 - r) * std::log1p(-u);
    return v;
}

double entropy_term(double x) {
    // x ln x + (1-x) ln(1-x), with the 0 ln 0 = 0 limits.
    double h = 0.0;
    if (x > 0.0) h += x * std::log(x);
    if (x < 1.0) h += (1.0 - x) * std::log1p(-x);
    return h;
}

}  // namespace

int rank_index(int n, double gamma_n) {
    if (n < 1) throw argument_error("n must be >= 1");
    check_unit(gamma_n, "gamma_n");
    const double r = std::floor((n - 1) * gamma_n + kFloorGuard);
    return std::clamp(static_cast<int>(r), 0, n - 1);
}

// ---------------------------------------------------------------- IndexSequence

IndexSequence IndexSequence::constant(double gamma) {
    check_unit(gamma, "gamma");
    return IndexSequence(gamma, Rule::constant, 0, 0.0);
}

namespace {
double kth_rate(int k) {
    const int n0 = std::max(k, 2);
    return static_cast<double>(n0) * (k - 1) / (n0 - 1);
}
}  // namespace

IndexSequence IndexSequence::kth_smallest(int k) {
    if (k < 1) throw argument_error("kth_smallest needs k >= 1");
    return IndexSequence(0.0, Rule::kth_smallest, k, kth_rate(k));
}

IndexSequence IndexSequence::kth_largest(int k) {
    if (k < 1) throw argument_error("kth_largest needs k >= 1");
    return IndexSequence(1.0, Rule::kth_largest, k, kth_rate(k));
}

IndexSequence IndexSequence::custom(double gamma, std::map<int, double> table) {
    check_unit(gamma, "gamma");
    if (table.empty()) throw argument_error("custom index sequence needs at least one entry");
    double K = 0.0;
    for (const auto& [n, g] : table) {
        if (n < 1) throw argument_error("custom index sequence: n must be >= 1");
        check_unit(g, "gamma_n");
        K = std::max(K, n * std::fabs(g - gamma));
    }
    IndexSequence s(gamma, Rule::custom, 0, K);
    s.table_ = std::move(table);
    return s;
}

int IndexSequence::min_n() const {
    switch (rule_) {
        case Rule::constant: return 1;
        case Rule::kth_smallest:
        case Rule::kth_largest: return k_;
        case Rule::custom: return table_.begin()->first;
    }
    return 1;
}

double IndexSequence::gamma_at(int n) const {
    if (n < min_n()) throw argument_error("index sequence " + describe() + " undefined at n=" + std::to_string(n));
    switch (rule_) {
        case Rule::constant: return gamma_;
        case Rule::kth_smallest: return n == 1 ? 0.0 : static_cast<double>(k_ - 1) / (n - 1);
        case Rule::kth_largest: return n == 1 ? 1.0 : static_cast<double>(n - k_) / (n - 1);
        case Rule::custom: {
            const auto it = table_.find(n);
            if (it == table_.end()) throw argument_error("custom index sequence has no entry for n=" + std::to_string(n));
            return it->second;
        }
    }
    return gamma_;
}

std::string IndexSequence::describe() const {
    switch (rule_) {
        case Rule::constant: return "constant(" + format_number(gamma_) + ")";
        case Rule::kth_smallest: return "kth_smallest(" + std::to_string(k_) + ")";
        case Rule::kth_largest: return "kth_largest(" + std::to_string(k_) + ")";
        case Rule::custom: return "custom(" + format_number(gamma_) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- Distortion

Distortion Distortion::order_stat(int n, double gamma_n) {
    if (n < 1) throw argument_error("os needs n >= 1");
    Distortion d;
    d.family_ = Family::order_stat;
    d.n_ = n;
    d.alphas_ = {1.0};
    d.gammas_ = {gamma_n};
    d.ranks_ = {rank_index(n, gamma_n)};
    d.log_consts_ = {log_order_stat_const(n, d.ranks_[0])};
    return d;
}

Distortion Distortion::mixture(int n, std::vector<double> alphas, std::vector<double> gammas_n) {
    if (n < 1) throw argument_error("mix needs n >= 1");
    if (alphas.empty() || alphas.size() != gammas_n.size()) throw argument_error("mix needs matching, nonempty weight and gamma lists");
    double total = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0)) throw argument_error("mix weights must be positive");
        check_unit(gammas_n[i], "mix gamma");
        if (i > 0 && !(gammas_n[i] > gammas_n[i - 1])) throw argument_error("mix gammas must be strictly increasing");
        total += alphas[i];
    }
    if (std::fabs(total - 1.0) > 1e-9) throw argument_error("mix weights must sum to 1");
    Distortion d;
    d.family_ = Family::mixture;
    d.n_ = n;
    d.alphas_ = std::move(alphas);
    d.gammas_ = std::move(gammas_n);
    for (double g : d.gammas_) {
        d.ranks_.push_back(rank_index(n, g));
        d.log_consts_.push_back(log_order_stat_const(n, d.ranks_.back()));
    }
    return d;
}

Distortion Distortion::record(int n, int k) {
    if (n < 1 || k < 1) throw argument_error("record needs n >= 1 and k >= 1");
    Distortion d;
    d.family_ = Family::record;
    d.n_ = n;
    d.k_ = k;
    d.gammas_ = {1.0};
    return d;
}

double Distortion::value(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    if (family_ == Family::record) {
        const double y = -k_ * std::log1p(-u);
        return boost::math::gamma_p(static_cast<double>(n_), y);
    }
    double v = 0.0;
    for (std::size_t i = 0; i < ranks_.size(); ++i) v += alphas_[i] * order_stat_value(n_, ranks_[i], u);
    return std::clamp(v, 0.0, 1.0);
}

double Distortion::log_derivative(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw domain_error("phi' is evaluated on (0,1) only; use limits at the endpoints");
    if (family_ == Family::record) {
        if (n_ == 1) return std::log(static_cast<double>(k_)) + (k_ - 1) * std::log1p(-u);
        const double y = -k_ * std::log1p(-u);
        return std::log(static_cast<double>(k_)) - std::log1p(-u) + (n_ - 1) * std::log(y) - y -
               boost::math::lgamma(static_cast<double>(n_));
    }
    if (ranks_.size() == 1) return order_stat_log_derivative(n_, ranks_[0], log_consts_[0], u);
    std::vector<double> terms(ranks_.size());
    for (std::size_t i = 0; i < ranks_.size(); ++i) {
        terms[i] = std::log(alphas_[i]) +
                   order_stat_log_derivative(n_, ranks_[i], log_consts_[i], u);
    }
    const double m = *std::max_element(terms.begin(), terms.end());
    if (std::isinf(m)) return m;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

double Distortion::derivative(double u) const { return std::exp(log_derivative(u)); }

double Distortion::inverse(double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (value(mid) < v) lo = mid; else hi = mid;
    }
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
        const double dv = derivative(u);
        if (!(dv > 0.0) || !std::isfinite(dv)) break;  // underflowed slope: keep the bisection answer
        const double next = u - (value(u) - v) / dv;
        if (!(next > lo && next < hi)) break;
        u = next;
    }
    return u;
}

std::vector<double> Distortion::modes() const {
    std::vector<double> out;
    if (family_ == Family::record) {
        if (n_ > 1 && k_ > 1) out.push_back(-std::expm1(-static_cast<double>(n_ - 1) / (k_ - 1)));
    } else if (n_ >= 2) {
        for (int r : ranks_) out.push_back(static_cast<double>(r) / (n_ - 1));
    }
    std::erase_if(out, [](double m) { return !(m > 0.0 && m < 1.0); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string Distortion::describe() const {
    const std::string n = "n=" + std::to_string(n_);
    switch (family_) {
        case Family::order_stat: return "os(" + n + ",gamma=" + format_number(gammas_[0]) + ")";
        case Family::record: return "record(" + n + ",k=" + std::to_string(k_) + ")";
        case Family::mixture: {
            std::string s = "mix(" + n + ";";
            for (std::size_t i = 0; i < alphas_.size(); ++i) {
                if (i) s += ",";
                s += format_number(alphas_[i]) + "@" + format_number(gammas_[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

double phi_value(const Distortion& d, double u) { return d.value(u); }
double phi_derivative(const Distortion& d, double u) { return d.derivative(u); }
double phi_log_derivative(const Distortion& d, double u) { return d.log_derivative(u); }
double phi_inverse(const Distortion& d, double v) { return d.inverse(v); }

double phi_derivative_mode(int n, double gamma_n) {
    if (n < 2) throw domain_error("phi_derivative_mode needs n >= 2");
    return static_cast<double>(rank_index(n, gamma_n)) / (n - 1);
}

double xi_gamma(double gamma, double t, double s) {
    if (!(t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0)) throw domain_error("xi_gamma needs t, s in (0,1)");
    check_unit(gamma, "gamma");
    return std::pow(t / s, gamma) * std::pow((1.0 - t) / (1.0 - s), 1.0 - gamma);
}

RatioBound derivative_ratio_bound(int n, const IndexSequence& seq, double t, double s) {
    if (n < 1) throw argument_error("n must be >= 1");
    if (!(t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0)) throw domain_error("derivative_ratio_bound needs t, s in (0,1)");
    const double sgn = (t > s) - (t < s);
    const double K = seq.rate_constant();
    const double C = std::pow((s * (1.0 - t)) / (t * (1.0 - s)), 0.5 - (K + 0.5) * sgn);
    return {C * std::pow(xi_gamma(seq.gamma(), t, s), n - 1), C};
}

namespace {

class DistortedLaw final : public Law {
public:
    DistortedLaw(Distribution base, Distortion d) : base_(std::move(base)), d_(std::move(d)) {}
    Kind kind() const override { return Kind::distorted; }
    double cdf(double x) const override { return d_.value(base_.cdf(x)); }
    double quantile(double v) const override {
        const double u = std::clamp(d_.inverse(v), kQuantileClamp, 1.0 - kQuantileClamp);
        return base_.law().quantile(u);
    }
    double density(double x) const override {
        const double u = base_.cdf(x);
        if (!(u > 0.0 && u < 1.0)) return 0.0;
        return d_.derivative(u) * base_.density(x);
    }
    bool finite_second_moment() const override { return base_.has_finite_second_moment(); }
    std::string describe() const override { return "distort(" + base_.describe() + "," + d_.describe() + ")"; }

private:
    Distribution base_;
    Distortion d_;
};

}  // namespace

Distribution distort(const Distribution& base, const Distortion& d) {
    if (!base.is_continuous()) throw unsupported_error("distort needs a continuous base law; got " + base.describe());
    return Distribution(std::make_shared<DistortedLaw>(base, d));
}

MixtureCrossing mixture_crossing(double gamma_i, double gamma_j) {
    if (!(gamma_i > 0.0 && gamma_i < 1.0 && gamma_j > 0.0 && gamma_j < 1.0))
        throw domain_error("mixture_crossing needs gammas strictly inside (0,1)");
    if (!(gamma_i < gamma_j)) throw domain_error("mixture_crossing needs gamma_i < gamma_j");
    MixtureCrossing mc;
    if (std::fabs(gamma_i + gamma_j - 1.0) <= 4 * std::numeric_limits<double>::epsilon()) {
        mc.u_ij = 0.5;  // H(x) = H(1-x)
    } else {
        // ln((1-u)/u) equals the mean of ln((1-x)/x) over [gamma_i, gamma_j], whose antiderivative is -H.
        const double R = -(entropy_term(gamma_j) - entropy_term(gamma_i)) / (gamma_j - gamma_i);
        mc.u_ij = 1.0 / (1.0 + std::exp(R));
    }
    mc.delta_ij = std::min(mc.u_ij - gamma_i, gamma_j - mc.u_ij);
    if (!(mc.delta_ij > 0.0)) throw domain_error("mixture_crossing: crossing point not strictly between the gammas");
    return mc;
}

ConvexityWindow convexity_window(int n, double gamma_n) {
    if (n < 4) throw domain_error("convexity_window needs n >= 4");
    const double r = rank_index(n, gamma_n);
    const double nn = n;
    // u^2 - B u + C = 0 with B = (r/(n-2)) (1 + (n-3)/(n-1)), C = r(r-1)/((n-1)(n-2)).
    const double B = (r / (nn - 2.0)) * (1.0 + (nn - 3.0) / (nn - 1.0));
    const double C = r * (r - 1.0) / ((nn - 1.0) * (nn - 2.0));
    const double half = 0.5 * B;
    const double disc = std::max(0.0, half * half - C);
    const double beta = half + std::sqrt(disc);
    const double alpha = beta > 0.0 ? C / beta : 0.0;
    return {alpha, beta};
}

}  // namespace stochord
