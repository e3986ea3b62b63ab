#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace hball {

/// A group element [z,t] of H_n, stored as n complex coordinates plus the
/// vertical coordinate t. The dimension n is fixed by the length of z.
struct Point {
    std::vector<std::complex<double>> z;
    double t = 0.0;

    Point() = default;
    Point(std::vector<std::complex<double>> zz, double tt) : z(std::move(zz)), t(tt) {
        if (z.empty()) throw std::invalid_argument("Point: dimension n must be >= 1");
        check_finite();
    }
    // n=1 convenience
    Point(std::complex<double> z1, double tt) : z{z1}, t(tt) { check_finite(); }

    int n() const { return static_cast<int>(z.size()); }
    double x(int j) const { return z[j].real(); }
    double y(int j) const { return z[j].imag(); }

    double r2() const {
        double s = 0.0;
        for (const auto& zj : z) s += std::norm(zj);
        return s;
    }

    void check_finite() const {
        for (const auto& zj : z)
            if (!std::isfinite(zj.real()) || !std::isfinite(zj.imag()))
                throw std::invalid_argument("Point: non-finite coordinate");
        if (!std::isfinite(t)) throw std::invalid_argument("Point: non-finite t");
    }
};

/// Horizontal vector: coefficients along X_1..X_n, Y_1..Y_n.
struct HVector {
    std::vector<double> c;  // length 2n

    int n() const { return static_cast<int>(c.size()) / 2; }
    double xcomp(int j) const { return c[j]; }
    double ycomp(int j) const { return c[n() + j]; }
    double norm() const {
        double s = 0.0;
        for (double v : c) s += v * v;
        return std::sqrt(s);
    }
    double dot(const HVector& o) const {
        if (c.size() != o.c.size()) throw std::invalid_argument("HVector: dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * o.c[i];
        return s;
    }
};

inline void require_same_dim(const Point& p, const Point& q) {
    if (p.n() != q.n()) throw std::invalid_argument("points from different H_n contexts");
}

}  // namespace hball
