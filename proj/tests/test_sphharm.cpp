#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hball/hgroup.hpp"
#include "hball/sphharm.hpp"

using namespace hball;
using cplx = std::complex<double>;

TEST_CASE("cq coefficient oracles") {
    // k = l = 1: c_1 = -kl/(n-1).
    auto c = cq_coefficients(1, 1, 2);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == -1.0);

    c = cq_coefficients(1, 1, 3);
    CHECK(c[1] == doctest::Approx(-0.5));

    // r = min(k,l) = 0: just c_0.
    c = cq_coefficients(0, 4, 5);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == 1.0);

    c = cq_coefficients(2, 3, 2);
    REQUIRE(c.size() == 3);
    // c_1 = -(2)(3)/(1*1) = -6; c_2 = -(1)(2) c_1 / (2*2) = 3.
    CHECK(c[1] == doctest::Approx(-6.0));
    CHECK(c[2] == doctest::Approx(3.0));
}

TEST_CASE("cq recurrence residual vanishes") {
    for (int n : {2, 3, 4}) {
        for (int k = 0; k <= 4; ++k)
            for (int l = 0; l <= 4; ++l) {
                auto c = cq_coefficients(k, l, n);
                int r = std::min(k, l);
                REQUIRE(static_cast<int>(c.size()) == r + 1);
                for (int q = 0; q < r; ++q) {
                    double res = (k - q) * (l - q) * c[q] + (q + 1) * (n + q - 1) * c[q + 1];
                    CHECK(std::abs(res) < 1e-14);
                }
            }
    }
}

TEST_CASE("cq degenerate case at n=1") {
    // n = 1, q = 0 makes the recurrence factor vanish while the left term
    // is nonzero whenever k, l >= 1.
    CHECK_THROWS_AS(cq_coefficients(1, 1, 1), std::domain_error);
    CHECK_THROWS_AS(cq_coefficients(2, 3, 1), std::domain_error);
    // k or l zero is fine: the sum stops at c_0.
    auto c = cq_coefficients(0, 2, 1);
    CHECK(c.size() == 1);
    CHECK_THROWS_AS(cq_coefficients(-1, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(cq_coefficients(0, 0, 0), std::invalid_argument);
}

TEST_CASE("spherical harmonic values") {
    // n = 2, k = l = 1: Y = z_1 conj(z_1) + c_1 |z_2|^2 = |z_1|^2 - |z_2|^2.
    auto spec = HarmonicSpec::make(1, 1, 2);
    cplx v = spherical_harmonic(spec, {cplx(1, 0), cplx(0, 1)});
    CHECK(std::abs(v) < 1e-15);
    v = spherical_harmonic(spec, {cplx(2, 0), cplx(1, 0)});
    CHECK(v.real() == doctest::Approx(3.0));
    CHECK(v.imag() == doctest::Approx(0.0));

    // k = 1, l = 0: Y = z_1.
    auto s10 = HarmonicSpec::make(1, 0, 3);
    cplx z1(0.3, -0.7);
    v = spherical_harmonic(s10, {z1, cplx(1, 2), cplx(0, 4)});
    CHECK(v.real() == doctest::Approx(z1.real()));
    CHECK(v.imag() == doctest::Approx(z1.imag()));
}

TEST_CASE("spherical harmonics are harmonic in C^n") {
    // The complex Laplacian 4 sum_j d^2/dz_j dconj(z_j) of Y_{k,l} is zero.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double h = 1e-3;
    for (int n : {2, 3}) {
        for (auto [k, l] : {std::pair{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
            auto spec = HarmonicSpec::make(k, l, n);
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<cplx> z(n);
                for (auto& zz : z) zz = cplx(u(rng), u(rng));
                cplx lap = 0.0;
                cplx center = spherical_harmonic(spec, z);
                for (int j = 0; j < n; ++j) {
                    for (cplx dir : {cplx(h, 0), cplx(0, h)}) {
                        auto zp = z, zm = z;
                        zp[j] += dir;
                        zm[j] -= dir;
                        lap += spherical_harmonic(spec, zp) + spherical_harmonic(spec, zm) -
                               2.0 * center;
                    }
                }
                lap /= h * h;
                // O(h^2) truncation of the centered stencil dominates
                CHECK(std::abs(lap) < 1e-4);
            }
        }
    }
}

TEST_CASE("spherical harmonic homogeneity in the circle action") {
    // Y_{k,l}(e^{i a} z) = e^{i a (k-l)} Y_{k,l}(z).
    auto spec = HarmonicSpec::make(2, 1, 2);
    std::vector<cplx> z = {cplx(0.4, 0.2), cplx(-0.3, 0.9)};
    double a = 0.73;
    cplx ph = std::polar(1.0, a);
    std::vector<cplx> zr = {ph * z[0], ph * z[1]};
    cplx lhs = spherical_harmonic(spec, zr);
    cplx rhs = std::polar(1.0, a * (2 - 1)) * spherical_harmonic(spec, z);
    CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("jacobi polynomial base cases") {
    CHECK(jacobi_like(0, 1.5, 2.5, cplx(0.3, 0.4)) == cplx(1.0));
    // m = 1: (alpha + 1) + (alpha + beta + 2)(w - 1)/2.
    double al = 2.0, be = 2.0;
    cplx w(0.2, -0.5);
    cplx expect = (al + 1.0) + (al + be + 2.0) * (w - 1.0) * 0.5;
    CHECK(std::abs(jacobi_like(1, al, be, w) - expect) < 1e-14);
    CHECK_THROWS_AS(jacobi_like(-1, 0.0, 0.0, cplx(0)), std::invalid_argument);
}

TEST_CASE("jacobi recurrence matches the explicit sum") {
    // P_m^{(a,b)}(w) = sum_s binom(m+a, m-s) binom(m+b, s) ((w-1)/2)^s ((w+1)/2)^{m-s}
    auto binom = [](double top, int k) {
        double acc = 1.0;
        for (int i = 1; i <= k; ++i) acc *= (top - k + i) / i;
        return acc;
    };
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        double a = 0.5 + u(rng), b = 0.5 + u(rng);
        cplx w(u(rng), u(rng));
        for (int m : {2, 3, 5}) {
            cplx direct = 0.0;
            for (int s = 0; s <= m; ++s)
                direct += binom(m + a, m - s) * binom(m + b, s) *
                          std::pow((w - 1.0) * 0.5, s) * std::pow((w + 1.0) * 0.5, m - s);
            CHECK(std::abs(jacobi_like(m, a, b, w) - direct) < 1e-11);
        }
    }
}

TEST_CASE("h series trivial and constant cases") {
    Point eta(std::complex<double>(0.2, 0.1), 0.3);
    Point xi(std::complex<double>(-0.4, 0.5), -0.1);
    SeriesConfig trivial;
    CHECK(trivial.trivial());
    CHECK(h_series(eta, xi, trivial) == 0.0);

    SeriesConfig cst;
    cst.b0 = 0.37;
    CHECK(h_series(eta, xi, cst) == doctest::Approx(0.37));

    // n = 1: bidegree (k,k) spaces are trivial, only b0 survives even with
    // a nonzero provider.
    SeriesConfig withp;
    withp.b0 = 0.5;
    withp.k_max = 3;
    withp.m_max = 8;
    withp.provider = [](int, int) { return 1.0; };
    CHECK(h_series(eta, xi, withp) == doctest::Approx(0.5));
}

TEST_CASE("h series truncation stabilizes for decaying coefficients") {
    // n = 2, geometric coefficients: successive truncations converge.
    Point eta({cplx(0.2, 0.05), cplx(-0.1, 0.15)}, 0.1);
    Point xi({cplx(0.1, -0.2), cplx(0.25, 0.0)}, -0.05);

    auto at_order = [&](int mmax) {
        SeriesConfig cfg;
        cfg.k_max = mmax / 2;
        cfg.m_max = mmax;
        cfg.provider = [](int m, int k) { return std::pow(0.25, m + k); };
        cfg.b0 = 1.0;
        return h_series(eta, xi, cfg);
    };
    double v8 = at_order(8), v12 = at_order(12), v16 = at_order(16);
    CHECK(std::abs(v12 - v8) < 1e-4);
    CHECK(std::abs(v16 - v12) < 1e-8);
}

TEST_CASE("h series skips ill-defined half indices") {
    // Only terms with m >= 2k and m - 2k even contribute: a provider
    // supported on skipped indices yields b0 alone.
    Point eta({cplx(0.3, 0.0), cplx(0.1, 0.2)}, 0.2);
    Point xi = eta;
    SeriesConfig cfg;
    cfg.k_max = 2;
    cfg.m_max = 6;
    cfg.b0 = 2.0;
    cfg.provider = [](int m, int k) {
        bool valid = (m >= 2 * k) && ((m - 2 * k) % 2 == 0);
        return valid ? 0.0 : 5.0;
    };
    CHECK(h_series(eta, xi, cfg) == doctest::Approx(2.0));
}

TEST_CASE("h series is circular in both arguments") {
    Point eta({cplx(0.2, 0.3), cplx(-0.25, 0.1)}, 0.15);
    Point xi({cplx(0.4, -0.1), cplx(0.05, 0.3)}, -0.2);
    SeriesConfig cfg;
    cfg.k_max = 2;
    cfg.m_max = 8;
    cfg.b0 = 0.1;
    cfg.provider = [](int m, int k) { return 1.0 / ((m + 1.0) * (m + 1.0) + k); };

    double base = h_series(eta, xi, cfg);
    for (double th : {0.4, 1.9, 3.3}) {
        CHECK(h_series(rotate(th, eta), xi, cfg) == doctest::Approx(base).epsilon(1e-10));
        CHECK(h_series(eta, rotate(th, xi), cfg) == doctest::Approx(base).epsilon(1e-10));
    }
}
