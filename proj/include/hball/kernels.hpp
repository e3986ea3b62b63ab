#pragma once

#include "hball/hcalc.hpp"
#include "hball/sphharm.hpp"

namespace hball {

/// Normalization constant a_0 = 2^{n-2} Gamma(n/2)^2 / pi^{n+1}.
double a0(int n);

/// Fundamental solution g_eta(xi) = a_0 N(eta^{-1} xi)^{-2n}.
double fundamental(const Point& eta, const Point& xi);
/// Jet of g_eta in xi.
Jet2 fundamental_jet(const Point& eta, const Point& xi);

/// Green function G(eta,xi) = g_eta(xi) - K(g_eta)(xi^{-1}); the Kelvin
/// term expands to N(eta)^{-2n} g_{eta*}(xi^{-1}), with the constant-limit
/// convention K(g_e) = a_0 at eta = e.
double green(const Point& eta, const Point& xi);
Jet2 green_jet(const Point& eta, const Point& xi);

/// Circularized Green function: theta-average of G(eta,.) in xi. Vanishes
/// identically on the boundary sphere.
double green_bar(const Point& eta, const Point& xi, int ntheta = 32);
Jet2 green_bar_jet(const Point& eta, const Point& xi, int ntheta = 32);

/// Poisson kernel P(eta,xi) = -(1/4) d/dn_0 G(eta,xi), derivative in the
/// boundary variable xi; circularize for the boundary-reproducing kernel.
double poisson(const Point& eta, const Point& xi, double eps_char = 1e-6);
double poisson_bar(const Point& eta, const Point& xi, int ntheta = 32, double eps_char = 1e-6);

/// Neumann function N(eta,xi) = gbar_eta(xi) + K(gbar_eta)(xi^{-1}) + h(eta,xi).
double neumann(const Point& eta, const Point& xi, const SeriesConfig& cfg, int ntheta = 32);

/// Non-circularized Neumann combination g_eta(xi) + K(g_eta)(xi^{-1}) + h.
/// On circular data its grid sums agree with the circularized kernel's.
double neumann_plain(const Point& eta, const Point& xi, const SeriesConfig& cfg);

enum class KernelKind { Fundamental, Green, Poisson, Neumann };

struct KernelId {
    KernelKind kind = KernelKind::Fundamental;
    bool circularize = false;
    int ntheta = 32;
    SeriesConfig series;  // Neumann only
};

/// Dispatch on a KernelId; xi must lie on the boundary for Poisson.
double kernel_eval(const KernelId& id, const Point& eta, const Point& xi);

}  // namespace hball
