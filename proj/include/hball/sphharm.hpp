#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hball/point.hpp"

namespace hball {

/// Coefficients c_0..c_r (r = min(k,l)) of the representative spherical
/// harmonic Y_{k,l}, satisfying c_0 = 1 and
/// (k-q)(l-q) c_q + (q+1)(n+q-1) c_{q+1} = 0. Computed in exact rational
/// arithmetic and emitted as doubles.
std::vector<double> cq_coefficients(int k, int l, int n);

struct HarmonicSpec {
    int k = 0, l = 0;
    std::vector<double> c;  // c_0..c_r

    static HarmonicSpec make(int k, int l, int n) { return {k, l, cq_coefficients(k, l, n)}; }
};

/// Y_{k,l}(z) = sum_q c_q |z*|^{2q} z_1^{k-q} conj(z_1)^{l-q}, where
/// z = (z_1, z*) in C^n.
std::complex<double> spherical_harmonic(const HarmonicSpec& spec,
                                        const std::vector<std::complex<double>>& z);

/// Classical Jacobi polynomial P_m^{(alpha,beta)} continued to complex
/// argument via the three-term recurrence. The series block writes
/// C_m^{(a,a)} without defining the family; this is the default,
/// provider-swappable interpretation.
std::complex<double> jacobi_like(int m, double alpha, double beta, std::complex<double> w);

using CoeffProvider = std::function<double(int m, int k)>;  // a_{m;k}

struct SeriesConfig {
    int k_max = 0;
    int m_max = 0;
    CoeffProvider provider;  // null means identically zero
    double b0 = 0.0;

    bool trivial() const { return !provider && b0 == 0.0; }
};

/// Truncated correction series h(eta,xi): over k=1..k_max, m=1..m_max,
/// representative harmonic per (k,k); terms whose first polynomial degree
/// (m-2k)/2 is non-integer or negative are skipped. Real part returned.
double h_series(const Point& eta, const Point& xi, const SeriesConfig& cfg);

}  // namespace hball
