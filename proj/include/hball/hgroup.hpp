#pragma once

#include <functional>

#include "hball/point.hpp"

namespace hball {

using ScalarFn = std::function<double(const Point&)>;

Point identity(int n);

/// Group product [z,t].[zeta,s] = [z+zeta, t+s+2 Im(z.conj(zeta))].
Point multiply(const Point& p, const Point& q);

/// Group inverse [-z,-t].
Point inverse(const Point& p);

/// |z|^4 + t^2, the fourth power of the Koranyi gauge.
double gauge4(const Point& p);

/// Koranyi norm (|z|^4 + t^2)^{1/4}.
double koranyi_norm(const Point& p);

/// Heisenberg dilation delta_r[z,t] = [rz, r^2 t], r > 0.
Point dilate(double r, const Point& p);

/// Rotation z -> e^{i theta} z.
Point rotate(double theta, const Point& p);

/// The conformal inversion h([z,t]) = [-z/(|z|^2 - it), -t/(|z|^4 + t^2)].
/// Pole at the identity.
Point invert(const Point& p);

/// Kelvin transform Kf(p) = N(p)^{-2n} f(h(p)).
double kelvin(const ScalarFn& f, const Point& p);

/// Periodic-trapezoid average of theta -> f([e^{i theta} z, t]).
double circular_average(const ScalarFn& f, const Point& p, int ntheta = 32);

}  // namespace hball
