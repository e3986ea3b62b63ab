#include "hball/hgroup.hpp"

#include <cmath>
#include <stdexcept>

namespace hball {

Point identity(int n) {
    if (n < 1) throw std::invalid_argument("identity: n must be >= 1");
    return Point(std::vector<std::complex<double>>(n, {0.0, 0.0}), 0.0);
}

Point multiply(const Point& p, const Point& q) {
    require_same_dim(p, q);
    Point r;
    r.z.resize(p.z.size());
    double twist = 0.0;
    for (int j = 0; j < p.n(); ++j) {
        r.z[j] = p.z[j] + q.z[j];
        // Im(z_j * conj(zeta_j))
        twist += p.y(j) * q.x(j) - p.x(j) * q.y(j);
    }
    r.t = p.t + q.t + 2.0 * twist;
    return r;
}

Point inverse(const Point& p) {
    Point r = p;
    for (auto& zj : r.z) zj = -zj;
    r.t = -r.t;
    return r;
}

double gauge4(const Point& p) {
    double r2 = p.r2();
    return r2 * r2 + p.t * p.t;
}

double koranyi_norm(const Point& p) { return std::pow(gauge4(p), 0.25); }

Point dilate(double r, const Point& p) {
    if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
    Point q = p;
    for (auto& zj : q.z) zj *= r;
    q.t *= r * r;
    return q;
}

Point rotate(double theta, const Point& p) {
    Point q = p;
    std::complex<double> u(std::cos(theta), std::sin(theta));
    for (auto& zj : q.z) zj *= u;
    return q;
}

Point invert(const Point& p) {
    double rho = gauge4(p);
    if (rho == 0.0) throw std::domain_error("invert: pole at the identity");
    std::complex<double> d(p.r2(), -p.t);
    Point q;
    q.z.resize(p.z.size());
    for (int j = 0; j < p.n(); ++j) q.z[j] = -p.z[j] / d;
    q.t = -p.t / rho;
    return q;
}

double kelvin(const ScalarFn& f, const Point& p) {
    double N = koranyi_norm(p);
    if (N == 0.0) throw std::domain_error("kelvin: pole at the identity");
    return std::pow(N, -2.0 * p.n()) * f(invert(p));
}

double circular_average(const ScalarFn& f, const Point& p, int ntheta) {
    if (ntheta < 4) throw std::invalid_argument("circular_average: ntheta must be >= 4");
    double acc = 0.0;
    for (int k = 0; k < ntheta; ++k) {
        double theta = 2.0 * M_PI * k / ntheta;
        acc += f(rotate(theta, p));
    }
    return acc / ntheta;
}

}  // namespace hball
