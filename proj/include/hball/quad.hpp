#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hball/kernels.hpp"

namespace hball {

/// Midpoint tensor grid over the Koranyi ball in gauge-polar coordinates
/// (rho, psi, phi); for n=1 the Lebesgue element is rho^3 drho dpsi dphi.
struct VolumeGrid {
    int n = 1;
    int res = 0;
    int nrho = 0, npsi = 0, nphi = 0;
    std::vector<double> rho_nodes, psi_nodes;
    std::vector<Point> nodes;
    Eigen::VectorXd weights;

    std::string id() const { return "vol:" + std::to_string(res); }
    int index(int ir, int ip, int iph) const { return (ir * npsi + ip) * nphi + iph; }
};

/// Boundary grid on the unit gauge sphere minus caps of gauge radius
/// delta_cap around the characteristic points [0,+-1]. Raw surface
/// element sqrt(cos psi) dpsi dphi, scaled by the Poisson-mass
/// calibration constant.
struct BoundaryGrid {
    int n = 1;
    int res = 0;
    double delta_cap = 0.05;
    double calibration = 1.0;
    int npsi = 0, nphi = 0;
    std::vector<Point> nodes;
    Eigen::VectorXd weights;

    std::string id() const { return "bnd:" + std::to_string(res); }
};

VolumeGrid ball_grid(int n, int resolution);
BoundaryGrid boundary_grid(int n, int resolution, double delta_cap = 0.05);

/// Computes and applies the calibration constant enforcing
/// int_dB P(e, .) dsigma = 1; returns the constant.
double calibrate(BoundaryGrid& grid, int ntheta = 32);

double integrate_volume(const ScalarFn& f, const VolumeGrid& grid);
double integrate_boundary(const ScalarFn& f, const BoundaryGrid& grid);

/// Volume of the unit Koranyi ball (closed form for n=1: pi^2/2).
double ball_volume(int n);

struct KernelMatrix {
    std::string src_id, dst_id;
    Eigen::MatrixXd values;  // rows: source points (first kernel argument)
    bool desingularized = false;
};

/// Dense kernel matrix over explicit point sets. When `self` is true the
/// point sets coincide with a volume grid and the singular diagonal is
/// replaced by the cap-averaged value of the gauge-power singularity
/// (preserving the cell integral); `cell_weights` supplies the cell
/// volumes in that case.
KernelMatrix nystrom(const KernelId& id, const std::vector<Point>& src,
                     const std::vector<Point>& dst, bool self = false,
                     const Eigen::VectorXd& cell_weights = {}, int threads = 1);

KernelMatrix nystrom(const KernelId& id, const VolumeGrid& src, const VolumeGrid& dst,
                     int threads = 1);

/// K_k = K_{k-1} diag(w) K_base; k = 1 returns the base.
KernelMatrix iterate(const KernelMatrix& base, const Eigen::VectorXd& volume_weights, int k);

/// Weighted product realizing the mixed convolutions M_{k,j}, S_{k,j}.
KernelMatrix mixed_kernels(const KernelMatrix& nk, const KernelMatrix& gj_or_pj,
                           const Eigen::VectorXd& volume_weights);

// JSON (de)serialization for grid caching.
std::string grid_to_json(const VolumeGrid& g);
std::string grid_to_json(const BoundaryGrid& g);
VolumeGrid volume_grid_from_json(const std::string& text);
BoundaryGrid boundary_grid_from_json(const std::string& text);

}  // namespace hball
