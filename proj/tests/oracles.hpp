#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// Composite Simpson rule in long double.
inline long double simpson(const std::function<long double(long double)>& f, long double a, long double b, int m) {
    if (m % 2) ++m;
    const long double h = (b - a) / m;
    long double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0L : 2.0L);
    return s * h / 3.0L;
}

inline long double t4_density(long double x) { return 0.375L * std::pow(1.0L + x * x / 4.0L, -2.5L); }

/// CDF of t(4) in closed form: F(-|t|) = (1-w)^2 (2+w) / 4 with w = |t| / sqrt(t^2+4).
/// 1-w is rewritten to avoid cancellation in the far tail.
inline long double t4_cdf(long double x) {
    const long double r = std::sqrt(x * x + 4.0L);
    const long double w = std::fabs(x) / r;
    const long double one_minus_w = 4.0L / (r * (r + std::fabs(x)));
    const long double lower = 0.25L * one_minus_w * one_minus_w * (2.0L + w);
    return x < 0 ? lower : 1.0L - lower;
}

/// Same CDF by Simpson quadrature of the density, used to cross-check the closed form.
inline long double t4_cdf_quadrature(long double x) {
    const long double half = simpson(t4_density, 0.0L, std::fabs(x), 20000);
    return x >= 0 ? 0.5L + half : 0.5L - half;
}

inline double bisect(const std::function<long double(long double)>& F, long double target, long double lo,
                     long double hi) {
    for (int i = 0; i < 200 && hi - lo > 1e-15L * (1 + std::fabs(lo)); ++i) {
        const long double mid = 0.5L * (lo + hi);
        (F(mid) < target ? lo : hi) = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

inline double t4_quantile(double u) { return bisect(t4_cdf, u, -1e3L, 1e3L); }

inline long double normal_cdf(long double x) { return 0.5L * std::erfc(-x / std::numbers::sqrt2_v<long double>); }

/// t(4) quantile at 1/2 + p from the central mass F(x) - 1/2 = (3w - w^3) / 4, solved for w in
/// relative precision so arguments next to the median stay exact.
inline double t4_quantile_central(long double p) {
    const long double target = std::fabs(p);
    if (target == 0) return 0.0;
    long double lo = 0, hi = 1;
    for (int i = 0; i < 20000 && hi - lo > 1e-19L * hi; ++i) {
        const long double w = 0.5L * (lo + hi);
        ((3 * w - w * w * w) / 4 < target ? lo : hi) = w;
    }
    const long double w = 0.5L * (lo + hi);
    const long double x = 2 * w / std::sqrt(1 - w * w);
    return static_cast<double>(p < 0 ? -x : x);
}

inline double normal_quantile(double u) { return bisect(normal_cdf, u, -40.0L, 40.0L); }

inline long double binom_coef(int n, int j) {
    long double c = 1.0L;
    for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
    return c;
}

/// P(Bin(n, t) >= threshold) by explicit summation.
inline double binomial_tail(int n, int threshold, double t) {
    long double s = 0.0L;
    for (int j = threshold; j <= n; ++j)
        s += binom_coef(n, j) * std::pow(static_cast<long double>(t), j) * std::pow(1.0L - t, n - j);
    return static_cast<double>(s);
}

/// Same tail with every term formed in log space, for n where the coefficients overflow.
inline double binomial_tail_large(int n, int threshold, double t) {
    long double s = 0.0L;
    const long double lt = std::log(static_cast<long double>(t)), l1t = std::log1p(-static_cast<long double>(t));
    for (int j = threshold; j <= n; ++j)
        s += std::exp(std::lgamma(n + 1.0L) - std::lgamma(j + 1.0L) - std::lgamma(n - j + 1.0L) + j * lt + (n - j) * l1t);
    return static_cast<double>(s);
}

/// Midpoint-rule departure of two quantile functions on m cells.
struct BruteDeparture {
    double epsilon;
    double w2sq;
};

/// Midpoint rule after u = s^2 on [0,1/2] and 1-u = s^2 on [1/2,1], so tails with
/// h^2 ~ u^(-1/2) integrate to O(m^-2) instead of O(m^-1/2).
inline BruteDeparture brute_departure(const std::function<double(double)>& qx, const std::function<double(double)>& qy,
                                      int m, const std::function<double(double)>& weight = nullptr) {
    long double num = 0.0L, den = 0.0L;
    const long double smax = std::sqrt(0.5L);
    const int half = m / 2;
    for (int side = 0; side < 2; ++side) {
        for (int i = 0; i < half; ++i) {
            const long double s = (i + 0.5L) / half * smax;
            const double u = side == 0 ? static_cast<double>(s * s) : static_cast<double>(1.0L - s * s);
            const long double h = static_cast<long double>(qx(u)) - qy(u);
            const long double w = weight ? weight(u) : 1.0;
            const long double term = h * h * w * 2.0L * s * smax / half;
            den += term;
            if (h > 0) num += term;
        }
    }
    return {den > 0 ? static_cast<double>(num / den) : 0.0, static_cast<double>(den)};
}

}  // namespace oracle
