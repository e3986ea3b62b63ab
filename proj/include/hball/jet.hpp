#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "hball/point.hpp"

namespace hball {

/// Second-order jet of a scalar field in the 2n+1 real coordinates
/// (x_1..x_n, y_1..y_n, t). Supports arithmetic so that evaluating a
/// formula on seeded coordinate jets propagates exact derivatives.
struct Jet2 {
    double v = 0.0;
    Eigen::VectorXd g;
    Eigen::MatrixXd h;

    Jet2() = default;
    explicit Jet2(int dim) : v(0.0), g(Eigen::VectorXd::Zero(dim)), h(Eigen::MatrixXd::Zero(dim, dim)) {}

    int dim() const { return static_cast<int>(g.size()); }

    static Jet2 constant(double c, int dim) {
        Jet2 j(dim);
        j.v = c;
        return j;
    }
    static Jet2 variable(double x, int index, int dim) {
        Jet2 j(dim);
        j.v = x;
        j.g(index) = 1.0;
        return j;
    }

    Jet2 operator-() const {
        Jet2 r = *this;
        r.v = -r.v;
        r.g = -r.g;
        r.h = -r.h;
        return r;
    }

    Jet2& operator+=(const Jet2& o) {
        v += o.v;
        g += o.g;
        h += o.h;
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        v -= o.v;
        g -= o.g;
        h -= o.h;
        return *this;
    }

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }

    friend Jet2 operator+(Jet2 a, double c) {
        a.v += c;
        return a;
    }
    friend Jet2 operator+(double c, Jet2 a) {
        a.v += c;
        return a;
    }
    friend Jet2 operator-(Jet2 a, double c) {
        a.v -= c;
        return a;
    }
    friend Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r(a.dim());
        r.v = a.v * b.v;
        r.g = a.g * b.v + b.g * a.v;
        r.h = a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
        return r;
    }
    friend Jet2 operator*(Jet2 a, double c) {
        a.v *= c;
        a.g *= c;
        a.h *= c;
        return a;
    }
    friend Jet2 operator*(double c, Jet2 a) { return a * c; }

    /// f(x) composed with this jet: needs f, f', f'' at the value.
    Jet2 chain(double f, double fp, double fpp) const {
        Jet2 r(dim());
        r.v = f;
        r.g = fp * g;
        r.h = fp * h + fpp * g * g.transpose();
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        if (b.v == 0.0) throw std::domain_error("Jet2: division by zero value");
        double iv = 1.0 / b.v;
        return a * b.chain(iv, -iv * iv, 2.0 * iv * iv * iv);
    }
    friend Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }
    friend Jet2 operator/(double c, const Jet2& b) {
        if (b.v == 0.0) throw std::domain_error("Jet2: division by zero value");
        double iv = 1.0 / b.v;
        return c * b.chain(iv, -iv * iv, 2.0 * iv * iv * iv);
    }
};

inline Jet2 sqrt(const Jet2& x) {
    if (x.v <= 0.0) throw std::domain_error("Jet2: sqrt of non-positive value");
    double s = std::sqrt(x.v);
    return x.chain(s, 0.5 / s, -0.25 / (s * x.v));
}
inline Jet2 exp(const Jet2& x) {
    double e = std::exp(x.v);
    return x.chain(e, e, e);
}
inline Jet2 log(const Jet2& x) {
    if (x.v <= 0.0) throw std::domain_error("Jet2: log of non-positive value");
    return x.chain(std::log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v));
}
inline Jet2 sin(const Jet2& x) { return x.chain(std::sin(x.v), std::cos(x.v), -std::sin(x.v)); }
inline Jet2 cos(const Jet2& x) { return x.chain(std::cos(x.v), -std::sin(x.v), -std::cos(x.v)); }

/// x^a for real exponent; requires x > 0 unless a is a small non-negative integer.
inline Jet2 pow(const Jet2& x, double a) {
    if (x.v <= 0.0) throw std::domain_error("Jet2: pow of non-positive base");
    double f = std::pow(x.v, a);
    return x.chain(f, a * f / x.v, a * (a - 1.0) * f / (x.v * x.v));
}

/// Integer power by repeated squaring on jets (valid for any base value).
inline Jet2 powi(const Jet2& x, int k) {
    if (k < 0) return 1.0 / powi(x, -k);
    Jet2 r = Jet2::constant(1.0, x.dim());
    Jet2 b = x;
    while (k > 0) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

/// atan2(y, x) jet, smooth away from the origin.
inline Jet2 jet_atan2(const Jet2& y, const Jet2& x) {
    double r2 = x.v * x.v + y.v * y.v;
    if (r2 == 0.0) throw std::domain_error("Jet2: atan2 at origin");
    // d atan2 = (x dy - y dx)/r2; second derivatives from quotient rules.
    int d = x.dim();
    Jet2 r(d);
    r.v = std::atan2(y.v, x.v);
    Eigen::VectorXd gx = x.g, gy = y.g;
    r.g = (x.v * gy - y.v * gx) / r2;
    // Hessian: d((x dy - y dx)/r2)
    Eigen::MatrixXd term = (gx * gy.transpose() - gy * gx.transpose() + x.v * y.h - y.v * x.h) / r2;
    Eigen::VectorXd dr2 = 2.0 * (x.v * gx + y.v * gy);
    Eigen::MatrixXd corr = (x.v * gy - y.v * gx) * dr2.transpose() / (r2 * r2);
    r.h = term - corr;
    // symmetrize roundoff
    r.h = 0.5 * (r.h + r.h.transpose()).eval();
    return r;
}

/// Coordinate jets of a point: index j -> x_j, n+j -> y_j, 2n -> t.
struct JetPoint {
    std::vector<Jet2> xs, ys;
    Jet2 tt;
    int n;

    static JetPoint seed(const Point& p) {
        JetPoint jp;
        jp.n = p.n();
        int dim = 2 * jp.n + 1;
        for (int j = 0; j < jp.n; ++j) {
            jp.xs.push_back(Jet2::variable(p.x(j), j, dim));
            jp.ys.push_back(Jet2::variable(p.y(j), jp.n + j, dim));
        }
        jp.tt = Jet2::variable(p.t, 2 * jp.n, dim);
        return jp;
    }

    /// Constant (non-differentiated) lift of a point in a dim-sized chart.
    static JetPoint lift(const Point& p, int dim) {
        JetPoint jp;
        jp.n = p.n();
        for (int j = 0; j < jp.n; ++j) {
            jp.xs.push_back(Jet2::constant(p.x(j), dim));
            jp.ys.push_back(Jet2::constant(p.y(j), dim));
        }
        jp.tt = Jet2::constant(p.t, dim);
        return jp;
    }

    Point point() const {
        std::vector<std::complex<double>> z(n);
        for (int j = 0; j < n; ++j) z[j] = {xs[j].v, ys[j].v};
        return Point(z, tt.v);
    }

    JetPoint negated() const {
        JetPoint q = *this;
        for (auto& x : q.xs) x = -x;
        for (auto& y : q.ys) y = -y;
        q.tt = -q.tt;
        return q;
    }

    JetPoint rotated(double theta) const {
        JetPoint q = *this;
        double c = std::cos(theta), s = std::sin(theta);
        for (int j = 0; j < n; ++j) {
            q.xs[j] = c * xs[j] - s * ys[j];
            q.ys[j] = s * xs[j] + c * ys[j];
        }
        return q;
    }

    Jet2 r2() const {
        Jet2 s = Jet2::constant(0.0, xs[0].dim());
        for (int j = 0; j < n; ++j) s += xs[j] * xs[j] + ys[j] * ys[j];
        return s;
    }

    /// |z|^4 + t^2 as a jet.
    Jet2 gauge4() const {
        Jet2 s = r2();
        return s * s + tt * tt;
    }
};

/// Relative point a^{-1} * q where a is a plain point and q carries jets.
inline JetPoint left_translate_inv(const Point& a, const JetPoint& q) {
    if (a.n() != q.n) throw std::invalid_argument("left_translate_inv: dimension mismatch");
    JetPoint r = q;
    Jet2 twist = Jet2::constant(0.0, q.tt.dim());
    for (int j = 0; j < q.n; ++j) {
        // z_r = z_q - a_j ; twist += Im((-a_j) * conj(z_q_j))
        twist += (-a.y(j)) * q.xs[j] + a.x(j) * q.ys[j];
        r.xs[j] = q.xs[j] - a.x(j);
        r.ys[j] = q.ys[j] - a.y(j);
    }
    r.tt = q.tt - a.t + 2.0 * twist;
    return r;
}

}  // namespace hball
