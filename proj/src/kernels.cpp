#include "hball/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace hball {

double a0(int n) {
    if (n < 1) throw std::invalid_argument("a0: n must be >= 1");
    double gam = std::tgamma(0.5 * n);
    return std::pow(2.0, n - 2) * gam * gam / std::pow(M_PI, n + 1);
}

namespace {

bool is_identity(const Point& p) { return p.r2() == 0.0 && p.t == 0.0; }

}  // namespace

double fundamental(const Point& eta, const Point& xi) {
    require_same_dim(eta, xi);
    double rho = gauge4(multiply(inverse(eta), xi));
    if (rho == 0.0) throw std::domain_error("fundamental: pole at xi = eta");
    return a0(eta.n()) * std::pow(rho, -0.5 * eta.n());
}

Jet2 fundamental_jet(const Point& eta, const Point& xi) {
    require_same_dim(eta, xi);
    JetPoint jxi = JetPoint::seed(xi);
    Jet2 rho = left_translate_inv(eta, jxi).gauge4();
    if (rho.v == 0.0) throw std::domain_error("fundamental_jet: pole at xi = eta");
    return a0(eta.n()) * pow(rho, -0.5 * eta.n());
}

double green(const Point& eta, const Point& xi) {
    require_same_dim(eta, xi);
    int n = eta.n();
    double kel;
    if (is_identity(eta)) {
        kel = a0(n);
    } else {
        Point es = invert(eta);
        kel = std::pow(koranyi_norm(eta), -2.0 * n) * fundamental(es, inverse(xi));
    }
    return fundamental(eta, xi) - kel;
}

Jet2 green_jet(const Point& eta, const Point& xi) {
    require_same_dim(eta, xi);
    int n = eta.n();
    JetPoint jxi = JetPoint::seed(xi);
    Jet2 g = fundamental_jet(eta, xi);
    if (is_identity(eta)) return g - a0(n);
    Point es = invert(eta);
    JetPoint jneg = jxi.negated();
    Jet2 rho = left_translate_inv(es, jneg).gauge4();
    Jet2 kel = std::pow(koranyi_norm(eta), -2.0 * n) * a0(n) * pow(rho, -0.5 * n);
    return g - kel;
}

double green_bar(const Point& eta, const Point& xi, int ntheta) {
    double acc = 0.0;
    for (int k = 0; k < ntheta; ++k) acc += green(eta, rotate(2.0 * M_PI * k / ntheta, xi));
    return acc / ntheta;
}

Jet2 green_bar_jet(const Point& eta, const Point& xi, int ntheta) {
    return circular_average_jet([&](const Point& q) { return green_jet(eta, q); }, xi, ntheta);
}

double poisson(const Point& eta, const Point& xi, double eps_char) {
    return -0.25 * normal_derivative(green_jet(eta, xi), gauge4_jet(xi), xi, eps_char);
}

double poisson_bar(const Point& eta, const Point& xi, int ntheta, double eps_char) {
    return -0.25 * normal_derivative(green_bar_jet(eta, xi, ntheta), gauge4_jet(xi), xi, eps_char);
}

double neumann_plain(const Point& eta, const Point& xi, const SeriesConfig& cfg) {
    require_same_dim(eta, xi);
    int n = eta.n();
    double kel;
    if (is_identity(eta)) {
        kel = a0(n);
    } else {
        Point es = invert(eta);
        kel = std::pow(koranyi_norm(eta), -2.0 * n) * fundamental(es, inverse(xi));
    }
    return fundamental(eta, xi) + kel + h_series(eta, xi, cfg);
}

double neumann(const Point& eta, const Point& xi, const SeriesConfig& cfg, int ntheta) {
    double acc = 0.0;
    for (int k = 0; k < ntheta; ++k) {
        Point xr = rotate(2.0 * M_PI * k / ntheta, xi);
        double kel;
        int n = eta.n();
        if (is_identity(eta)) {
            kel = a0(n);
        } else {
            Point es = invert(eta);
            kel = std::pow(koranyi_norm(eta), -2.0 * n) * fundamental(es, inverse(xr));
        }
        acc += fundamental(eta, xr) + kel;
    }
    return acc / ntheta + h_series(eta, xi, cfg);
}

double kernel_eval(const KernelId& id, const Point& eta, const Point& xi) {
    switch (id.kind) {
        case KernelKind::Fundamental:
            if (!id.circularize) return fundamental(eta, xi);
            return circular_average([&](const Point& q) { return fundamental(eta, q); }, xi,
                                    id.ntheta);
        case KernelKind::Green:
            return id.circularize ? green_bar(eta, xi, id.ntheta) : green(eta, xi);
        case KernelKind::Poisson:
            return id.circularize ? poisson_bar(eta, xi, id.ntheta) : poisson(eta, xi);
        case KernelKind::Neumann:
            return id.circularize ? neumann(eta, xi, id.series, id.ntheta)
                                  : neumann_plain(eta, xi, id.series);
    }
    throw std::logic_error("kernel_eval: bad kind");
}

}  // namespace hball
