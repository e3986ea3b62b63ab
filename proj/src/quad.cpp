#include "hball/quad.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hball {

double ball_volume(int n) {
    if (n != 1) throw std::invalid_argument("ball_volume: closed form implemented for n=1 only");
    return 0.5 * M_PI * M_PI;
}

VolumeGrid ball_grid(int n, int resolution) {
    if (resolution < 4) throw std::invalid_argument("ball_grid: resolution must be >= 4");
    if (n != 1) throw std::invalid_argument("ball_grid: only n=1 is supported at desk scale");
    VolumeGrid g;
    g.n = n;
    g.res = resolution;
    g.nrho = resolution;
    g.npsi = resolution;
    g.nphi = resolution;
    double hr = 1.0 / g.nrho;
    double hp = M_PI / g.npsi;
    double hf = 2.0 * M_PI / g.nphi;
    g.rho_nodes.resize(g.nrho);
    g.psi_nodes.resize(g.npsi);
    for (int i = 0; i < g.nrho; ++i) g.rho_nodes[i] = (i + 0.5) * hr;
    for (int j = 0; j < g.npsi; ++j) g.psi_nodes[j] = -0.5 * M_PI + (j + 0.5) * hp;
    g.nodes.reserve(static_cast<std::size_t>(g.nrho) * g.npsi * g.nphi);
    std::vector<double> w;
    w.reserve(g.nodes.capacity());
    for (int i = 0; i < g.nrho; ++i) {
        double rho = g.rho_nodes[i];
        for (int j = 0; j < g.npsi; ++j) {
            double psi = g.psi_nodes[j];
            double zr = rho * std::sqrt(std::cos(psi));
            double t = rho * rho * std::sin(psi);
            for (int k = 0; k < g.nphi; ++k) {
                double phi = k * hf;
                g.nodes.emplace_back(std::complex<double>(zr * std::cos(phi), zr * std::sin(phi)),
                                     t);
                w.push_back(rho * rho * rho * hr * hp * hf);
            }
        }
    }
    g.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    return g;
}

BoundaryGrid boundary_grid(int n, int resolution, double delta_cap) {
    if (resolution < 4) throw std::invalid_argument("boundary_grid: resolution must be >= 4");
    if (n != 1) throw std::invalid_argument("boundary_grid: only n=1 is supported at desk scale");
    if (!(delta_cap > 0.0)) throw std::invalid_argument("boundary_grid: delta_cap must be > 0");
    BoundaryGrid g;
    g.n = n;
    g.res = resolution;
    g.delta_cap = delta_cap;
    g.npsi = resolution;
    g.nphi = resolution;
    // gauge distance to [0,+-1] on the sphere is (2(1 -+ sin psi))^{1/4}
    double d4 = std::pow(delta_cap, 4);
    double smax = 1.0 - 0.5 * d4;
    double psimax = std::asin(std::min(1.0, smax));
    double hp = 2.0 * psimax / g.npsi;
    double hf = 2.0 * M_PI / g.nphi;
    std::vector<double> w;
    for (int j = 0; j < g.npsi; ++j) {
        double psi = -psimax + (j + 0.5) * hp;
        double zr = std::sqrt(std::cos(psi));
        for (int k = 0; k < g.nphi; ++k) {
            double phi = k * hf;
            g.nodes.emplace_back(std::complex<double>(zr * std::cos(phi), zr * std::sin(phi)),
                                 std::sin(psi));
            w.push_back(std::sqrt(std::cos(psi)) * hp * hf);
        }
    }
    g.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    return g;
}

double calibrate(BoundaryGrid& grid, int ntheta) {
    Point e = identity(grid.n);
    double mass = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
        mass += poisson(e, grid.nodes[i]) * grid.weights(static_cast<Eigen::Index>(i));
    if (!(mass > 0.0)) throw std::runtime_error("calibrate: non-positive Poisson mass");
    double c = 1.0 / mass;
    grid.weights *= c;
    grid.calibration *= c;
    (void)ntheta;  // P(e,.) is already circular
    return grid.calibration;
}

double integrate_volume(const ScalarFn& f, const VolumeGrid& grid) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        double v = f(grid.nodes[i]);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrate_volume: non-finite value at node " << i;
            throw std::runtime_error(os.str());
        }
        acc += v * grid.weights(static_cast<Eigen::Index>(i));
    }
    return acc;
}

double integrate_boundary(const ScalarFn& f, const BoundaryGrid& grid) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        double v = f(grid.nodes[i]);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrate_boundary: non-finite value at node " << i;
            throw std::runtime_error(os.str());
        }
        acc += v * grid.weights(static_cast<Eigen::Index>(i));
    }
    return acc;
}

namespace {

/// Regular (non-singular) remainder of a kernel at coincident arguments:
/// everything except the leading a_0 N^{-2n} gauge singularity.
double diagonal_regular_part(const KernelId& id, const Point& p) {
    int n = p.n();
    double kel;
    if (p.r2() == 0.0 && p.t == 0.0) {
        kel = a0(n);
    } else {
        Point ps = invert(p);
        kel = std::pow(koranyi_norm(p), -2.0 * n) * fundamental(ps, inverse(p));
    }
    switch (id.kind) {
        case KernelKind::Fundamental:
            return 0.0;
        case KernelKind::Green:
            return -kel;
        case KernelKind::Neumann:
            return kel + h_series(p, p, id.series);
        case KernelKind::Poisson:
            throw std::invalid_argument("diagonal rule: Poisson kernel has no volume diagonal");
    }
    return 0.0;
}

}  // namespace

KernelMatrix nystrom(const KernelId& id, const std::vector<Point>& src,
                     const std::vector<Point>& dst, bool self, const Eigen::VectorXd& cell_weights,
                     int threads) {
    KernelMatrix out;
    const auto rows = static_cast<Eigen::Index>(src.size());
    const auto cols = static_cast<Eigen::Index>(dst.size());
    out.values.resize(rows, cols);
    out.desingularized = self;
    if (self && cell_weights.size() != rows)
        throw std::invalid_argument("nystrom: cell_weights required for self grids");

    int n = src.empty() ? 1 : src[0].n();
    int Q = 2 * n + 2;
    double volB = ball_volume(n);
    auto fill_row = [&](Eigen::Index i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (self && i == j) {
                double rc = std::pow(cell_weights(i) / volB, 1.0 / Q);
                double capmean = a0(n) * (0.5 * Q) * std::pow(rc, -2.0 * n);
                out.values(i, j) = capmean + diagonal_regular_part(id, src[i]);
            } else {
                out.values(i, j) = kernel_eval(id, src[i], dst[j]);
            }
        }
    };
    if (threads <= 1) {
        for (Eigen::Index i = 0; i < rows; ++i) fill_row(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t nt = std::min<std::size_t>(threads, std::thread::hardware_concurrency());
        nt = std::max<std::size_t>(nt, 1);
        for (std::size_t w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                for (Eigen::Index i = static_cast<Eigen::Index>(w); i < rows;
                     i += static_cast<Eigen::Index>(nt))
                    fill_row(i);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

KernelMatrix nystrom(const KernelId& id, const VolumeGrid& src, const VolumeGrid& dst,
                     int threads) {
    bool self = src.id() == dst.id();
    KernelMatrix m = nystrom(id, src.nodes, dst.nodes, self, src.weights, threads);
    m.src_id = src.id();
    m.dst_id = dst.id();
    return m;
}

KernelMatrix iterate(const KernelMatrix& base, const Eigen::VectorXd& volume_weights, int k) {
    if (k < 1) throw std::invalid_argument("iterate: k must be >= 1");
    if (base.values.rows() != volume_weights.size() ||
        base.values.cols() != volume_weights.size())
        throw std::invalid_argument("iterate: base must be square over the volume grid");
    KernelMatrix out = base;
    for (int i = 1; i < k; ++i)
        out.values = out.values * volume_weights.asDiagonal() * base.values;
    return out;
}

KernelMatrix mixed_kernels(const KernelMatrix& nk, const KernelMatrix& gj_or_pj,
                           const Eigen::VectorXd& volume_weights) {
    if (nk.values.cols() != volume_weights.size() ||
        gj_or_pj.values.rows() != volume_weights.size())
        throw std::invalid_argument("mixed_kernels: dimension mismatch");
    KernelMatrix out;
    out.src_id = nk.src_id;
    out.dst_id = gj_or_pj.dst_id;
    out.values = nk.values * volume_weights.asDiagonal() * gj_or_pj.values;
    return out;
}

namespace {

nlohmann::json points_to_json(const std::vector<Point>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pts) {
        nlohmann::json jp;
        for (const auto& zj : p.z) {
            jp["x"].push_back(zj.real());
            jp["y"].push_back(zj.imag());
        }
        jp["t"] = p.t;
        arr.push_back(jp);
    }
    return arr;
}

std::vector<Point> points_from_json(const nlohmann::json& arr) {
    std::vector<Point> pts;
    for (const auto& jp : arr) {
        std::vector<std::complex<double>> z;
        for (std::size_t j = 0; j < jp["x"].size(); ++j)
            z.emplace_back(jp["x"][j].get<double>(), jp["y"][j].get<double>());
        pts.emplace_back(z, jp["t"].get<double>());
    }
    return pts;
}

}  // namespace

std::string grid_to_json(const VolumeGrid& g) {
    nlohmann::json j;
    j["kind"] = "volume";
    j["n"] = g.n;
    j["res"] = g.res;
    j["nrho"] = g.nrho;
    j["npsi"] = g.npsi;
    j["nphi"] = g.nphi;
    j["rho_nodes"] = g.rho_nodes;
    j["psi_nodes"] = g.psi_nodes;
    j["nodes"] = points_to_json(g.nodes);
    j["weights"] = std::vector<double>(g.weights.data(), g.weights.data() + g.weights.size());
    return j.dump();
}

std::string grid_to_json(const BoundaryGrid& g) {
    nlohmann::json j;
    j["kind"] = "boundary";
    j["n"] = g.n;
    j["res"] = g.res;
    j["delta_cap"] = g.delta_cap;
    j["calibration"] = g.calibration;
    j["npsi"] = g.npsi;
    j["nphi"] = g.nphi;
    j["nodes"] = points_to_json(g.nodes);
    j["weights"] = std::vector<double>(g.weights.data(), g.weights.data() + g.weights.size());
    return j.dump();
}

VolumeGrid volume_grid_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j["kind"] != "volume") throw std::invalid_argument("expected a volume grid");
    VolumeGrid g;
    g.n = j["n"];
    g.res = j["res"];
    g.nrho = j["nrho"];
    g.npsi = j["npsi"];
    g.nphi = j["nphi"];
    g.rho_nodes = j["rho_nodes"].get<std::vector<double>>();
    g.psi_nodes = j["psi_nodes"].get<std::vector<double>>();
    g.nodes = points_from_json(j["nodes"]);
    auto w = j["weights"].get<std::vector<double>>();
    g.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    return g;
}

BoundaryGrid boundary_grid_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j["kind"] != "boundary") throw std::invalid_argument("expected a boundary grid");
    BoundaryGrid g;
    g.n = j["n"];
    g.res = j["res"];
    g.delta_cap = j["delta_cap"];
    g.calibration = j["calibration"];
    g.npsi = j["npsi"];
    g.nphi = j["nphi"];
    g.nodes = points_from_json(j["nodes"]);
    auto w = j["weights"].get<std::vector<double>>();
    g.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    return g;
}

}  // namespace hball
