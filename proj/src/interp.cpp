#include "hball/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hball/hcalc.hpp"

namespace hball {

namespace {

/// Value and first two derivatives of the local Lagrange basis through
/// nodes[s..s+m) at x. Node products are accumulated jet-style so the
/// result stays exact when x coincides with a node.
void lagrange_basis(const std::vector<double>& nodes, int s, int m, double x,
                    std::vector<double>& l, std::vector<double>& lp, std::vector<double>& lpp) {
    l.assign(m, 0.0);
    lp.assign(m, 0.0);
    lpp.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double denom = 1.0;
        double p0 = 1.0, p1 = 0.0, p2 = 0.0;
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            denom *= nodes[s + i] - nodes[s + j];
            double f = x - nodes[s + j];
            double n2 = p2 * f + 2.0 * p1;
            double n1 = p1 * f + p0;
            double n0 = p0 * f;
            p0 = n0;
            p1 = n1;
            p2 = n2;
        }
        l[i] = p0 / denom;
        lp[i] = p1 / denom;
        lpp[i] = p2 / denom;
    }
}

int window_start(const std::vector<double>& nodes, int m, double x) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    int idx = static_cast<int>(it - nodes.begin());
    int s = idx - m / 2;
    int maxs = static_cast<int>(nodes.size()) - m;
    return std::clamp(s, 0, std::max(0, maxs));
}

}  // namespace

CircularField::CircularField(std::vector<double> rho_nodes, std::vector<double> psi_nodes,
                             Eigen::MatrixXd table, int stencil, bool log_rho)
    : rad_nodes_(std::move(rho_nodes)), psi_nodes_(std::move(psi_nodes)),
      table_(std::move(table)), stencil_(stencil), log_rho_(log_rho) {
    if (table_.rows() != static_cast<Eigen::Index>(rad_nodes_.size()) ||
        table_.cols() != static_cast<Eigen::Index>(psi_nodes_.size()))
        throw std::invalid_argument("CircularField: table shape does not match nodes");
    if (log_rho_)
        for (auto& r : rad_nodes_) {
            if (!(r > 0.0))
                throw std::invalid_argument("CircularField: log chart needs rho > 0");
            r = std::log(r);
        }
}

CircularField CircularField::from_grid(const VolumeGrid& grid, const Eigen::VectorXd& values,
                                       int stencil, bool log_rho) {
    if (values.size() != static_cast<Eigen::Index>(grid.nodes.size()))
        throw std::invalid_argument("CircularField: value count does not match grid");
    Eigen::MatrixXd table(grid.nrho, grid.npsi);
    for (int ir = 0; ir < grid.nrho; ++ir)
        for (int ip = 0; ip < grid.npsi; ++ip) {
            double acc = 0.0;
            for (int iph = 0; iph < grid.nphi; ++iph) acc += values[grid.index(ir, ip, iph)];
            table(ir, ip) = acc / grid.nphi;
        }
    return CircularField(grid.rho_nodes, grid.psi_nodes, std::move(table), stencil, log_rho);
}

void CircularField::partials(double r, double psi, double out[6]) const {
    int mr = std::min<int>(stencil_, static_cast<int>(rad_nodes_.size()));
    int mp = std::min<int>(stencil_, static_cast<int>(psi_nodes_.size()));
    int sr = window_start(rad_nodes_, mr, r);
    int sp = window_start(psi_nodes_, mp, psi);
    std::vector<double> lr, lrp, lrpp, lq, lqp, lqpp;
    lagrange_basis(rad_nodes_, sr, mr, r, lr, lrp, lrpp);
    lagrange_basis(psi_nodes_, sp, mp, psi, lq, lqp, lqpp);
    for (int k = 0; k < 6; ++k) out[k] = 0.0;
    for (int i = 0; i < mr; ++i)
        for (int j = 0; j < mp; ++j) {
            double c = table_(sr + i, sp + j);
            out[0] += c * lr[i] * lq[j];
            out[1] += c * lrp[i] * lq[j];
            out[2] += c * lr[i] * lqp[j];
            out[3] += c * lrpp[i] * lq[j];
            out[4] += c * lrp[i] * lqp[j];
            out[5] += c * lr[i] * lqpp[j];
        }
}

double CircularField::value(double rho, double psi) const {
    if (log_rho_ && !(rho > 0.0))
        throw std::domain_error("CircularField: value needs rho > 0 in the log chart");
    double out[6];
    partials(log_rho_ ? std::log(rho) : rho, psi, out);
    return out[0];
}

double CircularField::value_at(const Point& p) const {
    return value(koranyi_norm(p), std::atan2(p.t, p.r2()));
}

Jet2 CircularField::jet_at(const Point& p) const {
    JetPoint jp = JetPoint::seed(p);
    Jet2 a = jp.r2();
    Jet2 b = jp.tt;
    Jet2 rho4 = a * a + b * b;
    if (rho4.v <= 0.0) throw std::domain_error("CircularField: jet at the group identity");
    // Radial chart coordinate: rho = rho4^{1/4} or s = log(rho) = log(rho4)/4.
    Jet2 rad = log_rho_ ? 0.25 * log(rho4) : pow(rho4, 0.25);
    Jet2 psi = jet_atan2(b, a);

    double out[6];
    partials(rad.v, psi.v, out);
    Jet2 r(rad.dim());
    r.v = out[0];
    r.g = out[1] * rad.g + out[2] * psi.g;
    r.h = out[1] * rad.h + out[2] * psi.h + out[3] * rad.g * rad.g.transpose() +
          out[5] * psi.g * psi.g.transpose() +
          out[4] * (rad.g * psi.g.transpose() + psi.g * rad.g.transpose());
    return r;
}

CircularField CircularField::apply_sublaplacian() const {
    Eigen::MatrixXd out(table_.rows(), table_.cols());
    for (std::size_t i = 0; i < rad_nodes_.size(); ++i)
        for (std::size_t j = 0; j < psi_nodes_.size(); ++j) {
            double rho = log_rho_ ? std::exp(rad_nodes_[i]) : rad_nodes_[i];
            double psi = psi_nodes_[j];
            Point p(std::complex<double>(rho * std::sqrt(std::cos(psi)), 0.0),
                    rho * rho * std::sin(psi));
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                sublaplacian(jet_at(p), p);
        }
    CircularField next = *this;
    next.table_ = std::move(out);
    return next;
}

}  // namespace hball
