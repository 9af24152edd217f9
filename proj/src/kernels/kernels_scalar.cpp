#include "stochord/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace stochord::kernels::scalar {

double weighted_sq_diff(const double* a, const double* b, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += w[i] * (d * d);
    }
    return acc;
}

std::size_t count_leq(const double* x, const double* y, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] <= y[i]) ? 1 : 0;
    return c;
}

void classify_sign(const double* a, const double* b, std::size_t n, double rtol, std::int8_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        const double tol = rtol * std::max(1.0, std::fabs(a[i]) + std::fabs(b[i]));
        out[i] = d > tol ? 1 : (d < -tol ? -1 : 0);
    }
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace stochord::kernels::scalar
