#pragma once

#include <Eigen/Dense>

#include "hball/quad.hpp"

namespace hball {

/// Circular scalar field reduced to the (rho, psi) chart: rho the gauge
/// radius, psi the gauge latitude (t = rho^2 sin psi). Built from values
/// on a volume grid by phi-averaging; evaluation uses local tensor
/// Lagrange stencils, so second-order ambient jets are available through
/// the chain rule.
class CircularField {
  public:
    CircularField() = default;
    /// `log_rho` interpolates in s = log(rho), which tames the power-law
    /// radial growth of kernel-type fields near the origin.
    CircularField(std::vector<double> rho_nodes, std::vector<double> psi_nodes,
                  Eigen::MatrixXd table, int stencil = 6, bool log_rho = true);

    static CircularField from_grid(const VolumeGrid& grid, const Eigen::VectorXd& values,
                                   int stencil = 6, bool log_rho = true);

    double value(double rho, double psi) const;
    double value_at(const Point& p) const;

    /// Second-order jet in the ambient 2n+1 coordinates.
    Jet2 jet_at(const Point& p) const;

    /// Field of L_0 u sampled on the same (rho, psi) table.
    CircularField apply_sublaplacian() const;

    const Eigen::MatrixXd& table() const { return table_; }

  private:
    // Partials in the radial chart coordinate (rho or s = log rho).
    void partials(double r, double psi, double out[6]) const;  // u, ur, up, urr, urp, upp

    std::vector<double> rad_nodes_, psi_nodes_;  // rad = rho or log(rho)
    Eigen::MatrixXd table_;                      // table(i, j) at (rad_i, psi_j)
    int stencil_ = 6;
    bool log_rho_ = true;
};

}  // namespace hball
