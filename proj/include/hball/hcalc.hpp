#pragma once

#include <functional>

#include "hball/hgroup.hpp"
#include "hball/jet.hpp"

namespace hball {

/// A scalar field that can produce its second-order jet at a point.
using JetField = std::function<Jet2(const Point&)>;

enum class FieldKind { X, Y, ZRe, ZIm, T };

struct FieldId {
    FieldKind kind;
    int j = 0;  // 0-based index, unused for T
};

/// Central finite-difference jet, h scaled per coordinate. Cross-check
/// oracle only; analytic jets are the production path.
Jet2 fd_jet(const ScalarFn& f, const Point& p, double h = 1e-4);

/// Left-invariant field applied through a Euclidean jet:
/// X_j f = d_{x_j} f + 2 y_j d_t f,  Y_j f = d_{y_j} f - 2 x_j d_t f,
/// Z_j = (X_j - i Y_j)/2 (real and imaginary parts exposed separately).
double apply_field(const FieldId& id, const Jet2& jet, const Point& p);
double apply_field(const FieldId& id, const JetField& f, const Point& p);

/// Sub-Laplacian L_0 f = -(1/4) sum_j (X_j^2 + Y_j^2) f. The sign makes
/// L_0 of the fundamental solution a positive delta, so the Green/Neumann
/// representation formulas hold as written; see README.
double sublaplacian(const Jet2& jet, const Point& p);
double sublaplacian(const JetField& f, const Point& p);

/// Components (X_1 F,..,X_n F, Y_1 F,..,Y_n F).
HVector horizontal_gradient(const Jet2& jet, const Point& p);
HVector horizontal_gradient(const JetField& f, const Point& p);

/// Jet of the gauge function rho = |z|^4 + t^2 (closed form).
Jet2 gauge4_jet(const Point& p);

/// <grad_0 u, grad_0 F>_0 / ||grad_0 F||_0. Default F is the ball gauge
/// rho - 1, outward for the unit Koranyi ball.
double normal_derivative(const Jet2& u, const Jet2& F, const Point& p, double eps_char = 1e-6);
double normal_derivative(const JetField& u, const Point& p, double eps_char = 1e-6);

bool is_characteristic(const Point& p, const Jet2& F, double eps_char = 1e-6);
/// Against the default ball gauge.
bool is_characteristic(const Point& p, double eps_char = 1e-6);

/// Average of jets of f over the circle action (jets taken in the
/// unrotated chart via the rotation chain rule).
Jet2 circular_average_jet(const JetField& f, const Point& p, int ntheta = 32);

}  // namespace hball
