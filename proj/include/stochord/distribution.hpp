#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace stochord {

/// Quantile arguments are clamped into [kQuantileClamp, 1 - kQuantileClamp].
inline constexpr double kQuantileClamp = 1e-15;

/// Finite sample stored in ascending order.
class EmpiricalSample {
public:
    explicit EmpiricalSample(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Right-continuous empirical CDF: #{x_i <= x} / n.
double empirical_cdf(const EmpiricalSample& s, double x);

/// Fraction of ranks i with x_(i) <= y_(i). Sizes must match.
double galton_rank(const EmpiricalSample& x, const EmpiricalSample& y);

enum class Kind { normal, student_t, uniform, exponential, location_scale, piecewise, empirical, distorted };

const char* to_string(Kind k);

/// Interface implemented by every concrete law. quantile() receives u already
/// clamped to the open unit interval.
class Law {
public:
    virtual ~Law() = default;
    virtual Kind kind() const = 0;
    virtual double cdf(double x) const = 0;
    virtual double quantile(double u) const = 0;
    virtual double density(double x) const = 0;
    virtual bool finite_second_moment() const = 0;
    /// Continuous and strictly increasing on its support interior.
    virtual bool continuous() const { return true; }
    virtual std::string describe() const = 0;
};

class PiecewiseCdf;

/// Immutable handle to a law; cheap to copy, safe to share across threads.
class Distribution {
public:
    explicit Distribution(std::shared_ptr<const Law> law);

    static Distribution normal(double mean, double sd);
    static Distribution student_t(double dof);
    static Distribution uniform(double lo, double hi);
    static Distribution exponential(double rate);
    /// Law of loc + scale * B; scale may be negative, not zero.
    static Distribution location_scale(double loc, double scale, Distribution base);
    static Distribution piecewise(PiecewiseCdf cdf, std::string label = {});
    static Distribution empirical(EmpiricalSample sample, std::string label = {});

    double cdf(double x) const;
    /// Left-continuous inverse; throws domain_error unless 0 < u < 1.
    double quantile(double u) const;
    double density(double x) const;

    Kind kind() const { return law_->kind(); }
    bool has_finite_second_moment() const { return law_->finite_second_moment(); }
    bool is_continuous() const { return law_->continuous(); }
    /// Canonical spec string, parseable by the CLI.
    std::string describe() const { return law_->describe(); }

    const Law& law() const { return *law_; }
    /// Non-null only for empirical laws.
    const EmpiricalSample* sample() const;

private:
    std::shared_ptr<const Law> law_;
};

inline double cdf(const Distribution& d, double x) { return d.cdf(x); }
inline double quantile(const Distribution& d, double u) { return d.quantile(u); }

/// Inverse-transform variate.
double draw(const Distribution& d, std::mt19937_64& rng);

/// Kolmogorov-Smirnov distance between a sample and a continuous law.
double ks_distance(const EmpiricalSample& s, const Distribution& d);

/// Shortest round-trip decimal rendering, used by describe().
std::string format_number(double v);

}  // namespace stochord
