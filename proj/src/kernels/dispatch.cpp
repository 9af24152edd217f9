#include "stochord/errors.hpp"
#include "stochord/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace stochord::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(STOCHORD_HAVE_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("STOCHORD_ISA"); env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) throw unsupported_error(std::string("ISA not available: ") + to_string(isa));
    current().store(isa, std::memory_order_relaxed);
}

#if defined(STOCHORD_HAVE_AVX2)
#define STOCHORD_DISPATCH(fn, ...) \
    (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define STOCHORD_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double weighted_sq_diff(const double* a, const double* b, const double* w, std::size_t n) {
    return STOCHORD_DISPATCH(weighted_sq_diff, a, b, w, n);
}

std::size_t count_leq(const double* x, const double* y, std::size_t n) {
    return STOCHORD_DISPATCH(count_leq, x, y, n);
}

void classify_sign(const double* a, const double* b, std::size_t n, double rtol, std::int8_t* out) {
    STOCHORD_DISPATCH(classify_sign, a, b, n, rtol, out);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    return STOCHORD_DISPATCH(max_abs_diff, a, b, n);
}

#undef STOCHORD_DISPATCH

}  // namespace stochord::kernels
