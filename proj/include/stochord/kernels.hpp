#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86-64,
// an AVX2 variant selected once at runtime. STOCHORD_ISA=scalar forces the reference.

namespace stochord::kernels {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Overrides the runtime choice; throws unsupported_error if the ISA is absent.
void force_isa(Isa isa);

/// sum_i w[i] * (a[i] - b[i])^2
double weighted_sq_diff(const double* a, const double* b, const double* w, std::size_t n);

/// #{i : x[i] <= y[i]}
std::size_t count_leq(const double* x, const double* y, std::size_t n);

/// out[i] = sign(a[i] - b[i]), with |a-b| <= rtol * max(1, |a|+|b|) mapped to 0.
void classify_sign(const double* a, const double* b, std::size_t n, double rtol, std::int8_t* out);

/// max_i |a[i] - b[i]|, 0 for n == 0.
double max_abs_diff(const double* a, const double* b, std::size_t n);

namespace scalar {
double weighted_sq_diff(const double* a, const double* b, const double* w, std::size_t n);
std::size_t count_leq(const double* x, const double* y, std::size_t n);
void classify_sign(const double* a, const double* b, std::size_t n, double rtol, std::int8_t* out);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
double weighted_sq_diff(const double* a, const double* b, const double* w, std::size_t n);
std::size_t count_leq(const double* x, const double* y, std::size_t n);
void classify_sign(const double* a, const double* b, std::size_t n, double rtol, std::int8_t* out);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace avx2

}  // namespace stochord::kernels
