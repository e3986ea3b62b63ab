#include "hball/sphharm.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hball {

namespace {

struct Rational {
    long long num = 0, den = 1;

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(std::llabs(num), den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    Rational times(long long a, long long b) const {
        Rational r{num * a, den * b};
        r.reduce();
        return r;
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

}  // namespace

std::vector<double> cq_coefficients(int k, int l, int n) {
    if (k < 0 || l < 0) throw std::invalid_argument("cq_coefficients: k,l must be >= 0");
    if (n < 1) throw std::invalid_argument("cq_coefficients: n must be >= 1");
    int r = std::min(k, l);
    std::vector<Rational> c;
    c.push_back({1, 1});
    for (int q = 0; q < r; ++q) {
        long long lhs = static_cast<long long>(k - q) * (l - q);
        long long fac = static_cast<long long>(q + 1) * (n + q - 1);
        if (fac == 0) {
            // n = 1, q = 0 with nonzero left term: recurrence forces division by zero
            if (lhs * c.back().num != 0)
                throw std::domain_error("cq_coefficients: degenerate recurrence at n=1");
            c.push_back({0, 1});
            continue;
        }
        // c_{q+1} = -(k-q)(l-q) c_q / ((q+1)(n+q-1))
        c.push_back(c.back().times(-lhs, fac));
    }
    std::vector<double> out;
    out.reserve(c.size());
    for (const auto& cq : c) out.push_back(cq.value());
    return out;
}

std::complex<double> spherical_harmonic(const HarmonicSpec& spec,
                                        const std::vector<std::complex<double>>& z) {
    if (z.empty()) throw std::invalid_argument("spherical_harmonic: empty z");
    std::complex<double> z1 = z[0];
    double star2 = 0.0;
    for (std::size_t j = 1; j < z.size(); ++j) star2 += std::norm(z[j]);
    std::complex<double> acc = 0.0;
    int r = static_cast<int>(spec.c.size()) - 1;
    for (int q = 0; q <= r; ++q) {
        std::complex<double> term = spec.c[q];
        term *= std::pow(star2, q);
        term *= std::pow(z1, spec.k - q);
        term *= std::pow(std::conj(z1), spec.l - q);
        acc += term;
    }
    return acc;
}

std::complex<double> jacobi_like(int m, double alpha, double beta, std::complex<double> w) {
    if (m < 0) throw std::invalid_argument("jacobi_like: m must be >= 0");
    if (m == 0) return 1.0;
    std::complex<double> p0 = 1.0;
    std::complex<double> p1 = (alpha + 1.0) + (alpha + beta + 2.0) * (w - 1.0) * 0.5;
    for (int j = 2; j <= m; ++j) {
        double a = alpha, b = beta;
        double c1 = 2.0 * j * (j + a + b) * (2.0 * j + a + b - 2.0);
        double c2 = (2.0 * j + a + b - 1.0);
        double c3 = (2.0 * j + a + b) * (2.0 * j + a + b - 2.0);
        double c4 = a * a - b * b;
        double c5 = 2.0 * (j + a - 1.0) * (j + b - 1.0) * (2.0 * j + a + b);
        std::complex<double> p2 = (c2 * (c3 * w + c4) * p1 - c5 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double h_series(const Point& eta, const Point& xi, const SeriesConfig& cfg) {
    require_same_dim(eta, xi);
    if (cfg.trivial()) return 0.0;
    double acc = cfg.b0;
    if (!cfg.provider) return acc;
    int n = eta.n();
    // In C^1 the bidegree (k,k) harmonic spaces are trivial for k >= 1,
    // so only the constant b0 survives.
    if (n == 1) return acc;
    std::complex<double> arg_eta(eta.t, eta.r2());
    std::complex<double> arg_xi(xi.t, xi.r2());
    for (int k = 1; k <= cfg.k_max; ++k) {
        HarmonicSpec spec = HarmonicSpec::make(k, k, n);
        std::complex<double> Ye = spherical_harmonic(spec, eta.z);
        std::complex<double> Yx = std::conj(spherical_harmonic(spec, xi.z));
        double par = 0.5 * n + k;
        for (int m = 1; m <= cfg.m_max; ++m) {
            if ((m - 2 * k) % 2 != 0 || m < 2 * k) continue;  // ill-defined half-index skipped
            double a_mk = cfg.provider(m, k);
            if (a_mk == 0.0) continue;
            std::complex<double> term = (2.0 * n / m) * a_mk *
                                        jacobi_like((m - 2 * k) / 2, par, par, arg_eta) * Ye *
                                        jacobi_like(m, par, par, arg_xi) * Yx;
            acc += term.real();
        }
    }
    return acc;
}

}  // namespace hball
