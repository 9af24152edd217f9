#include <doctest.h>

#include "stochord/errors.hpp"
#include "stochord/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace stochord::kernels;

namespace {

struct Data {
    std::vector<double> a, b, w;
};

Data make(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0, 2);
    Data d{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        d.a[i] = g(rng);
        // A quarter of the entries tie or nearly tie, to exercise the zero band.
        d.b[i] = i % 4 == 0 ? d.a[i] * (1 + 1e-14) : g(rng);
        d.w[i] = u(rng);
    }
    return d;
}

const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 31, 100, 1023, 4096};

}  // namespace

TEST_CASE("scalar reference kernels") {
    const double a[] = {1, 2, 3}, b[] = {0, 2, 5}, w[] = {1, 2, 0.5};
    CHECK(scalar::weighted_sq_diff(a, b, w, 3) == doctest::Approx(1 + 0 + 2));
    CHECK(scalar::count_leq(a, b, 3) == 2);
    CHECK(scalar::max_abs_diff(a, b, 3) == 2.0);
    std::int8_t s[3];
    scalar::classify_sign(a, b, 3, 1e-12, s);
    CHECK(s[0] == 1);
    CHECK(s[1] == 0);
    CHECK(s[2] == -1);
    CHECK(scalar::max_abs_diff(a, b, 0) == 0.0);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
    if (!isa_available(Isa::avx2)) {
        MESSAGE("AVX2 not available on this machine; equivalence not exercised");
        return;
    }
    for (std::size_t n : kSizes) {
        CAPTURE(n);
        const auto d = make(n, 1000 + n);
        const double ref = scalar::weighted_sq_diff(d.a.data(), d.b.data(), d.w.data(), n);
        const double vec = avx2::weighted_sq_diff(d.a.data(), d.b.data(), d.w.data(), n);
        CHECK(std::fabs(ref - vec) <= 1e-13 * std::max(1.0, std::fabs(ref)));
        CHECK(scalar::count_leq(d.a.data(), d.b.data(), n) == avx2::count_leq(d.a.data(), d.b.data(), n));
        CHECK(scalar::max_abs_diff(d.a.data(), d.b.data(), n) == avx2::max_abs_diff(d.a.data(), d.b.data(), n));
        std::vector<std::int8_t> s1(n), s2(n);
        scalar::classify_sign(d.a.data(), d.b.data(), n, 1e-12, s1.data());
        avx2::classify_sign(d.a.data(), d.b.data(), n, 1e-12, s2.data());
        CHECK(s1 == s2);
    }
}

TEST_CASE("AVX2 handles signed zeros, infinities and NaN like the reference") {
    if (!isa_available(Isa::avx2)) return;
    const double inf = INFINITY;
    std::vector<double> a{0.0, -0.0, inf, -inf, 1.0, inf, 2.0, -3.0, 5.0};
    std::vector<double> b{-0.0, 0.0, inf, 1.0, -inf, 3.0, 2.0, -3.0, 4.0};
    const std::size_t n = a.size();
    CHECK(scalar::count_leq(a.data(), b.data(), n) == avx2::count_leq(a.data(), b.data(), n));
    std::vector<std::int8_t> s1(n), s2(n);
    scalar::classify_sign(a.data(), b.data(), n, 1e-12, s1.data());
    avx2::classify_sign(a.data(), b.data(), n, 1e-12, s2.data());
    CHECK(s1 == s2);
}

TEST_CASE("dispatch honours force_isa") {
    const Isa before = active_isa();
    force_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    const auto d = make(33, 5);
    CHECK(weighted_sq_diff(d.a.data(), d.b.data(), d.w.data(), 33) ==
          scalar::weighted_sq_diff(d.a.data(), d.b.data(), d.w.data(), 33));
    if (isa_available(Isa::avx2)) {
        force_isa(Isa::avx2);
        CHECK(active_isa() == Isa::avx2);
        CHECK(weighted_sq_diff(d.a.data(), d.b.data(), d.w.data(), 33) ==
              avx2::weighted_sq_diff(d.a.data(), d.b.data(), d.w.data(), 33));
    } else {
        CHECK_THROWS_AS(force_isa(Isa::avx2), stochord::unsupported_error);
    }
    force_isa(before);
    CHECK(std::string(to_string(Isa::avx2)) == "avx2");
}
