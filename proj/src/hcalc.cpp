#include "hball/hcalc.hpp"

#include <cmath>
#include <stdexcept>

namespace hball {

Jet2 fd_jet(const ScalarFn& f, const Point& p, double h) {
    int n = p.n();
    int dim = 2 * n + 1;
    auto coord = [&](const Point& q, int i) -> double {
        if (i < n) return q.x(i);
        if (i < 2 * n) return q.y(i - n);
        return q.t;
    };
    auto shifted = [&](const Point& q, int i, double d) {
        Point r = q;
        if (i < n)
            r.z[i] += d;
        else if (i < 2 * n)
            r.z[i - n] += std::complex<double>(0.0, d);
        else
            r.t += d;
        return r;
    };
    Jet2 jet(dim);
    jet.v = f(p);
    std::vector<double> hs(dim);
    for (int i = 0; i < dim; ++i) hs[i] = h * (1.0 + std::abs(coord(p, i)));
    for (int i = 0; i < dim; ++i) {
        double fp = f(shifted(p, i, hs[i]));
        double fm = f(shifted(p, i, -hs[i]));
        jet.g(i) = (fp - fm) / (2.0 * hs[i]);
        jet.h(i, i) = (fp - 2.0 * jet.v + fm) / (hs[i] * hs[i]);
    }
    for (int i = 0; i < dim; ++i)
        for (int k = i + 1; k < dim; ++k) {
            double fpp = f(shifted(shifted(p, i, hs[i]), k, hs[k]));
            double fpm = f(shifted(shifted(p, i, hs[i]), k, -hs[k]));
            double fmp = f(shifted(shifted(p, i, -hs[i]), k, hs[k]));
            double fmm = f(shifted(shifted(p, i, -hs[i]), k, -hs[k]));
            double d = (fpp - fpm - fmp + fmm) / (4.0 * hs[i] * hs[k]);
            jet.h(i, k) = d;
            jet.h(k, i) = d;
        }
    return jet;
}

double apply_field(const FieldId& id, const Jet2& jet, const Point& p) {
    int n = p.n();
    if (id.kind != FieldKind::T && (id.j < 0 || id.j >= n))
        throw std::invalid_argument("apply_field: index out of range");
    int it = 2 * n;
    switch (id.kind) {
        case FieldKind::X:
            return jet.g(id.j) + 2.0 * p.y(id.j) * jet.g(it);
        case FieldKind::Y:
            return jet.g(n + id.j) - 2.0 * p.x(id.j) * jet.g(it);
        case FieldKind::ZRe:
            return 0.5 * (jet.g(id.j) + 2.0 * p.y(id.j) * jet.g(it));
        case FieldKind::ZIm: {
            double yf = jet.g(n + id.j) - 2.0 * p.x(id.j) * jet.g(it);
            return -0.5 * yf;
        }
        case FieldKind::T:
            return jet.g(it);
    }
    throw std::logic_error("apply_field: bad kind");
}

double apply_field(const FieldId& id, const JetField& f, const Point& p) {
    return apply_field(id, f(p), p);
}

double sublaplacian(const Jet2& jet, const Point& p) {
    int n = p.n();
    int it = 2 * n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double xj = p.x(j), yj = p.y(j);
        acc += jet.h(j, j) + jet.h(n + j, n + j) + 4.0 * (xj * xj + yj * yj) * jet.h(it, it) +
               4.0 * yj * jet.h(j, it) - 4.0 * xj * jet.h(n + j, it);
    }
    return -0.25 * acc;
}

double sublaplacian(const JetField& f, const Point& p) { return sublaplacian(f(p), p); }

HVector horizontal_gradient(const Jet2& jet, const Point& p) {
    int n = p.n();
    HVector v;
    v.c.resize(2 * n);
    for (int j = 0; j < n; ++j) {
        v.c[j] = apply_field({FieldKind::X, j}, jet, p);
        v.c[n + j] = apply_field({FieldKind::Y, j}, jet, p);
    }
    return v;
}

HVector horizontal_gradient(const JetField& f, const Point& p) {
    return horizontal_gradient(f(p), p);
}

Jet2 gauge4_jet(const Point& p) {
    JetPoint jp = JetPoint::seed(p);
    return jp.gauge4();
}

double normal_derivative(const Jet2& u, const Jet2& F, const Point& p, double eps_char) {
    HVector gu = horizontal_gradient(u, p);
    HVector gF = horizontal_gradient(F, p);
    double nF = gF.norm();
    if (nF < eps_char)
        throw std::domain_error("normal_derivative: characteristic point (grad_0 F vanishes)");
    return gu.dot(gF) / nF;
}

double normal_derivative(const JetField& u, const Point& p, double eps_char) {
    return normal_derivative(u(p), gauge4_jet(p), p, eps_char);
}

bool is_characteristic(const Point& p, const Jet2& F, double eps_char) {
    return horizontal_gradient(F, p).norm() < eps_char;
}

bool is_characteristic(const Point& p, double eps_char) {
    return is_characteristic(p, gauge4_jet(p), eps_char);
}

Jet2 circular_average_jet(const JetField& f, const Point& p, int ntheta) {
    if (ntheta < 4) throw std::invalid_argument("circular_average_jet: ntheta must be >= 4");
    int n = p.n();
    int dim = 2 * n + 1;
    Jet2 acc(dim);
    for (int k = 0; k < ntheta; ++k) {
        double theta = 2.0 * M_PI * k / ntheta;
        Point q = rotate(theta, p);
        Jet2 jq = f(q);
        // pull back through the linear rotation: grad -> R^T grad, hess -> R^T hess R
        double c = std::cos(theta), s = std::sin(theta);
        Eigen::MatrixXd R = Eigen::MatrixXd::Identity(dim, dim);
        for (int j = 0; j < n; ++j) {
            R(j, j) = c;
            R(j, n + j) = -s;
            R(n + j, j) = s;
            R(n + j, n + j) = c;
        }
        Jet2 pulled(dim);
        pulled.v = jq.v;
        pulled.g = R.transpose() * jq.g;
        pulled.h = R.transpose() * jq.h * R;
        acc += pulled;
    }
    return acc * (1.0 / ntheta);
}

}  // namespace hball
