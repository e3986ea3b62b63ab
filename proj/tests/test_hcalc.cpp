#include <doctest.h>

#include <random>

#include "hball/hcalc.hpp"
#include "hball/kernels.hpp"

using namespace hball;

namespace {

std::mt19937_64 rng(7);

Point random_point(double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return Point(std::complex<double>(u(rng), u(rng)), u(rng));
}

JetField tfield = [](const Point& p) {
    JetPoint jp = JetPoint::seed(p);
    return jp.tt;
};

JetField r2field = [](const Point& p) {
    JetPoint jp = JetPoint::seed(p);
    return jp.r2();
};

}  // namespace

TEST_CASE("left-invariant fields on t") {
    Point p(std::complex<double>(1, 2), 3.0);
    CHECK(apply_field({FieldKind::X, 0}, tfield, p) == doctest::Approx(4.0));   // 2 y_1
    CHECK(apply_field({FieldKind::Y, 0}, tfield, p) == doctest::Approx(-2.0));  // -2 x_1
    CHECK(apply_field({FieldKind::T, 0}, tfield, p) == doctest::Approx(1.0));
    // Z = (X - iY)/2: Zt = y + ix
    CHECK(apply_field({FieldKind::ZRe, 0}, tfield, p) == doctest::Approx(2.0));
    CHECK(apply_field({FieldKind::ZIm, 0}, tfield, p) == doctest::Approx(1.0));
}

TEST_CASE("left invariance of X") {
    // X_j(f . L_a) at p equals (X_j f) at a p
    auto f = [](const Point& q) { return std::sin(q.x(0)) * q.t + q.y(0) * q.y(0); };
    Point a(std::complex<double>(0.3, -0.8), 0.5);
    for (int i = 0; i < 20; ++i) {
        Point p = random_point();
        auto f_shift = [&](const Point& q) { return f(multiply(a, q)); };
        Jet2 lhs_jet = fd_jet(f_shift, p, 1e-5);
        Jet2 rhs_jet = fd_jet(f, multiply(a, p), 1e-5);
        for (auto kind : {FieldKind::X, FieldKind::Y}) {
            double lhs = apply_field({kind, 0}, lhs_jet, p);
            double rhs = apply_field({kind, 0}, rhs_jet, multiply(a, p));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
        }
    }
}

TEST_CASE("sublaplacian sign convention") {
    // L_0 = -(1/4) sum (X^2 + Y^2): L_0 |z|^2 = -n for n = 1.
    for (int i = 0; i < 10; ++i) {
        Point p = random_point();
        CHECK(sublaplacian(r2field, p) == doctest::Approx(-1.0));
        // t is harmonic
        CHECK(sublaplacian(tfield, p) == doctest::Approx(0.0));
    }
}

TEST_CASE("fundamental solution is harmonic off the pole") {
    for (int i = 0; i < 100; ++i) {
        Point eta = random_point(0.8);
        Point xi = random_point(0.8);
        if (koranyi_norm(multiply(inverse(eta), xi)) < 0.15) continue;
        Jet2 jet = fundamental_jet(eta, xi);
        CHECK(std::abs(sublaplacian(jet, xi)) < 1e-6);
    }
}

TEST_CASE("gauge jet and horizontal gradient identity") {
    // ||grad_0 rho||^2 = 16 |z|^2 rho with rho = |z|^4 + t^2
    for (int i = 0; i < 50; ++i) {
        Point p = random_point();
        if (p.r2() < 1e-3) continue;
        HVector g = horizontal_gradient(gauge4_jet(p), p);
        double lhs = g.norm() * g.norm();
        CHECK(lhs == doctest::Approx(16.0 * p.r2() * gauge4(p)).epsilon(1e-10));
    }
}

TEST_CASE("analytic jets match finite differences") {
    for (int i = 0; i < 25; ++i) {
        Point eta = random_point(0.6);
        Point xi = random_point(0.6);
        if (koranyi_norm(multiply(inverse(eta), xi)) < 0.3) continue;
        Jet2 a = fundamental_jet(eta, xi);
        Jet2 b = fd_jet([&](const Point& q) { return fundamental(eta, q); }, xi, 1e-4);
        CHECK(a.v == doctest::Approx(b.v));
        for (int k = 0; k < 3; ++k) CHECK(a.g(k) == doctest::Approx(b.g(k)).epsilon(1e-5));
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
                CHECK(a.h(k, l) == doctest::Approx(b.h(k, l)).epsilon(1e-3));
    }
}

TEST_CASE("normal derivative on the gauge sphere") {
    // d(rho)/dn_0 = ||grad_0 rho||_0 = 4 |z| N^2; on the unit sphere 4 |z|.
    Point p(std::complex<double>(std::sqrt(std::cos(0.4)), 0.0), std::sin(0.4));
    double nd = normal_derivative(gauge4_jet(p), gauge4_jet(p), p);
    CHECK(nd == doctest::Approx(4.0 * std::sqrt(p.r2())).epsilon(1e-12));

    // u = t on the sphere: <grad_0 t, grad_0 rho>/||grad_0 rho|| = 2 sin(psi) sqrt(cos(psi))
    double nd_t = normal_derivative(tfield, p);
    CHECK(nd_t == doctest::Approx(2.0 * std::sin(0.4) * std::sqrt(std::cos(0.4))).epsilon(1e-12));
}

TEST_CASE("characteristic set of the ball is the poles") {
    CHECK(is_characteristic(Point(std::complex<double>(0, 0), 1.0)));
    CHECK(is_characteristic(Point(std::complex<double>(0, 0), -1.0)));
    Point p(std::complex<double>(std::sqrt(std::cos(1.2)), 0.0), std::sin(1.2));
    CHECK_FALSE(is_characteristic(p));
    CHECK_THROWS_AS(normal_derivative(tfield, Point(std::complex<double>(0, 0), 1.0)),
                    std::domain_error);
}

TEST_CASE("circular average jet") {
    Point p(std::complex<double>(0.4, -0.3), 0.2);
    // t is circular: the averaged jet equals the plain jet
    Jet2 avg = circular_average_jet(tfield, p);
    CHECK(avg.v == doctest::Approx(p.t));
    CHECK(avg.g(2) == doctest::Approx(1.0));
    // averaging x kills value and gradient t-component stays zero
    JetField xf = [](const Point& q) {
        JetPoint jp = JetPoint::seed(q);
        return jp.xs[0];
    };
    Jet2 ax = circular_average_jet(xf, p);
    CHECK(std::abs(ax.v) < 1e-14);
    CHECK(std::abs(ax.g(2)) < 1e-14);
}

TEST_CASE("homogeneity of the sublaplacian") {
    // L_0 (f . delta_r) = r^2 (L_0 f) . delta_r
    auto f = [](const Point& q) { return q.r2() * q.t + q.x(0) * q.x(0) * q.y(0); };
    double r = 1.7;
    for (int i = 0; i < 10; ++i) {
        Point p = random_point(0.5);
        auto fr = [&](const Point& q) { return f(dilate(r, q)); };
        double lhs = sublaplacian(fd_jet(fr, p, 1e-4), p);
        double rhs = r * r * sublaplacian(fd_jet(f, dilate(r, p), 1e-4), dilate(r, p));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
    }
}
