#include "hball/solver.hpp"

#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <stdexcept>

namespace hball {

std::string to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::Neumann: return "neumann";
        case ProblemKind::NeumannDirichlet: return "neumann-dirichlet";
        case ProblemKind::DirichletNeumann: return "dirichlet-neumann";
    }
    throw std::logic_error("to_string: bad ProblemKind");
}

ProblemKind problem_kind_from_string(const std::string& s) {
    if (s == "neumann" || s == "neumann-m") return ProblemKind::Neumann;
    if (s == "neumann-dirichlet") return ProblemKind::NeumannDirichlet;
    if (s == "dirichlet-neumann") return ProblemKind::DirichletNeumann;
    throw std::invalid_argument("unknown problem kind: " + s);
}

void BVPSpec::validate() const {
    if (kind == ProblemKind::Neumann) {
        if (p < 1) throw std::invalid_argument("neumann problem needs order p >= 1");
        if (q != 0 || !h.empty())
            throw std::invalid_argument("neumann problem takes no dirichlet data");
    } else {
        if (p < 1 || q < 1) throw std::invalid_argument("mixed problems need p, q >= 1");
        if (static_cast<int>(h.size()) != q)
            throw std::invalid_argument("expected q dirichlet data expressions");
    }
    if (static_cast<int>(g.size()) != p)
        throw std::invalid_argument("expected p neumann data expressions");
    if (!f.valid()) throw std::invalid_argument("interior data f missing");
    auto check_circ = [](const Expr& e, const std::string& name) {
        if (!is_circular(e))
            throw std::invalid_argument("data expression '" + name + "' is not circular");
    };
    check_circ(f, "f");
    for (std::size_t i = 0; i < g.size(); ++i) check_circ(g[i], "g" + std::to_string(i));
    for (std::size_t i = 0; i < h.size(); ++i) check_circ(h[i], "h" + std::to_string(i));
}

BVPSpec BVPSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BVPSpec s;
    s.kind = problem_kind_from_string(j.value("kind", "neumann"));
    s.p = j.value("p", s.kind == ProblemKind::Neumann ? 1 : 1);
    s.q = j.value("q", s.kind == ProblemKind::Neumann ? 0 : 1);
    s.f = parse(j.value("f", "0"));
    for (const auto& e : j.value("g", std::vector<std::string>{})) s.g.push_back(parse(e));
    for (const auto& e : j.value("h", std::vector<std::string>{})) s.h.push_back(parse(e));
    if (j.contains("resolution")) {
        const auto& r = j["resolution"];
        s.res.volume = r.value("volume", s.res.volume);
        s.res.boundary = r.value("boundary", s.res.boundary);
        s.res.delta_cap = r.value("delta_cap", s.res.delta_cap);
        s.res.ntheta = r.value("ntheta", s.res.ntheta);
    }
    if (j.contains("series")) {
        const auto& t = j["series"];
        s.series.k_max = t.value("k_max", 0);
        s.series.m_max = t.value("m_max", 0);
        s.series.b0 = t.value("b0", 0.0);
        if (t.contains("coeffs")) {
            auto table = std::make_shared<std::map<std::pair<int, int>, double>>();
            for (const auto& c : t["coeffs"])
                (*table)[{c.at("m").get<int>(), c.at("k").get<int>()}] = c.at("value").get<double>();
            s.series.provider = [table](int m, int k) {
                auto it = table->find({m, k});
                return it == table->end() ? 0.0 : it->second;
            };
        }
    }
    s.strict_paper_dn = j.value("strict_paper_dn", false);
    return s;
}

// ---------------------------------------------------------------------------
// Workspace

Workspace::Workspace(int n, const Resolution& res, const SeriesConfig& series, int threads)
    : n_(n), res_(res), series_(series), threads_(threads),
      vol_(ball_grid(n, res.volume)), bnd_(boundary_grid(n, res.boundary, res.delta_cap)) {
    calibrate(bnd_, res.ntheta);
}

const Eigen::MatrixXd& Workspace::neumann_vv() {
    if (!nvv_) {
        KernelId id{KernelKind::Neumann, false, res_.ntheta, series_};
        nvv_ = nystrom(id, vol_, vol_, threads_).values;
    }
    return *nvv_;
}

const Eigen::MatrixXd& Workspace::neumann_bv() {
    if (!nbv_) {
        KernelId id{KernelKind::Neumann, false, res_.ntheta, series_};
        nbv_ = nystrom(id, bnd_.nodes, vol_.nodes, false, {}, threads_).values;
    }
    return *nbv_;
}

const Eigen::MatrixXd& Workspace::green_vv() {
    if (!gvv_) {
        KernelId id{KernelKind::Green, false, res_.ntheta, {}};
        gvv_ = nystrom(id, vol_, vol_, threads_).values;
    }
    return *gvv_;
}

const Eigen::MatrixXd& Workspace::poisson_vb() {
    if (!pvb_) {
        KernelId id{KernelKind::Poisson, false, res_.ntheta, {}};
        pvb_ = nystrom(id, vol_.nodes, bnd_.nodes, false, {}, threads_).values;
    }
    return *pvb_;
}

Eigen::MatrixXd Workspace::neumann_iter_vv(int k) {
    if (k < 1) throw std::invalid_argument("neumann_iter_vv: k >= 1");
    Eigen::MatrixXd out = neumann_vv();
    for (int i = 1; i < k; ++i) out = out * vol_.weights.asDiagonal() * neumann_vv();
    return out;
}

Eigen::MatrixXd Workspace::green_iter_vv(int k) {
    if (k < 1) throw std::invalid_argument("green_iter_vv: k >= 1");
    Eigen::MatrixXd out = green_vv();
    for (int i = 1; i < k; ++i) out = out * vol_.weights.asDiagonal() * green_vv();
    return out;
}

Eigen::MatrixXd Workspace::poisson_iter_vb(int k) {
    if (k < 1) throw std::invalid_argument("poisson_iter_vb: k >= 1");
    Eigen::MatrixXd out = poisson_vb();
    for (int i = 1; i < k; ++i) out = green_vv() * vol_.weights.asDiagonal() * out;
    return out;
}

Eigen::MatrixXd Workspace::neumann_chain_to(int k, const std::vector<Point>& targets) {
    if (k < 1) throw std::invalid_argument("neumann_chain_to: k >= 1");
    KernelId id{KernelKind::Neumann, true, res_.ntheta, series_};
    Eigen::MatrixXd tail = nystrom(id, vol_.nodes, targets, false, {}, threads_).values;
    for (int i = 1; i < k; ++i) tail = neumann_vv() * (vol_.weights.asDiagonal() * tail);
    return tail;
}

Eigen::MatrixXd Workspace::neumann_chain_bnd_to(int k, const std::vector<Point>& targets) {
    if (k < 1) throw std::invalid_argument("neumann_chain_bnd_to: k >= 1");
    KernelId id{KernelKind::Neumann, true, res_.ntheta, series_};
    if (k == 1) return nystrom(id, bnd_.nodes, targets, false, {}, threads_).values;
    return neumann_bv() * (vol_.weights.asDiagonal() * neumann_chain_to(k - 1, targets));
}

Eigen::MatrixXd Workspace::green_chain_to(int k, const std::vector<Point>& targets) {
    if (k < 1) throw std::invalid_argument("green_chain_to: k >= 1");
    KernelId id{KernelKind::Green, true, res_.ntheta, {}};
    Eigen::MatrixXd tail = nystrom(id, vol_.nodes, targets, false, {}, threads_).values;
    for (int i = 1; i < k; ++i) tail = green_vv() * (vol_.weights.asDiagonal() * tail);
    return tail;
}

Eigen::MatrixXd Workspace::poisson_chain_from(int k, const std::vector<Point>& targets) {
    if (k < 1) throw std::invalid_argument("poisson_chain_from: k >= 1");
    KernelId id{KernelKind::Poisson, true, res_.ntheta, {}};
    if (k == 1) return nystrom(id, targets, bnd_.nodes, false, {}, threads_).values;
    // P_k(xi, b) = int Gbar(zeta, xi) P_{k-1}(zeta, b) dv(zeta)
    return green_chain_to(1, targets).transpose() * vol_.weights.asDiagonal() *
           poisson_iter_vb(k - 1);
}

// ---------------------------------------------------------------------------
// Value-level helpers

namespace {

Eigen::VectorXd eval_on(const Expr& e, const std::vector<Point>& pts) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) v[static_cast<Eigen::Index>(i)] = e.eval(pts[i]);
    return v;
}

Eigen::VectorXd data_or_zero(const std::vector<Expr>& data, std::size_t i,
                             const std::vector<Point>& pts) {
    if (i < data.size() && data[i].valid()) return eval_on(data[i], pts);
    return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pts.size()));
}

/// N_k(bnd node, vol node) matrix.
Eigen::MatrixXd neumann_iter_bv(Workspace& ws, int k) {
    if (k == 1) return ws.neumann_bv();
    return ws.neumann_bv() * ws.vol().weights.asDiagonal() * ws.neumann_iter_vv(k - 1);
}

/// Thm 3.2 conditions on grid-sampled data. The boundary-weight
/// calibration factor is tracked so both calibrated and uncalibrated
/// residuals can be reported.
SolvabilityReport check_neumann_values(int p, const Eigen::VectorXd& f_vol,
                                       const std::vector<Eigen::VectorXd>& g_bnd, Workspace& ws,
                                       const std::string& mode, double tol = 0.02) {
    const Eigen::VectorXd& wv = ws.vol().weights;
    const Eigen::VectorXd& wb = ws.bnd().weights;
    double c = ws.calibration();
    Eigen::VectorXd wb0 = wb / c;

    double scale = wv.dot(f_vol.cwiseAbs());
    for (const auto& gj : g_bnd) scale += wb.dot(gj.cwiseAbs());

    SolvabilityReport rep;
    rep.tol = tol;
    rep.calibration = c;
    rep.mode = mode;

    auto push = [&](int j, double volpart, double bndpart0, double rhs0) {
        // calibrated: lhs = volpart - c*bndpart0, rhs = c*rhs0
        ConditionResult r;
        r.index = j;
        r.lhs = volpart - c * bndpart0;
        r.rhs = c * rhs0;
        r.abs_residual = std::abs(r.lhs - r.rhs);
        r.abs_residual_uncalibrated = std::abs((volpart - bndpart0) - rhs0);
        if (std::abs(r.rhs) >= 1e-12)
            r.rel_residual = r.abs_residual / std::abs(r.rhs);
        else
            r.rel_residual = r.abs_residual == 0.0 ? 0.0
                                                   : r.abs_residual / std::max(scale, 1e-12);
        r.pass = r.rel_residual < tol;
        rep.conditions.push_back(r);
        rep.solvable = rep.solvable && r.pass;
    };

    for (int j = 0; j <= p - 2; ++j) {
        Eigen::VectorXd inner_f =
            ws.neumann_iter_vv(p - j - 1).transpose() * wv.cwiseProduct(f_vol);
        double volpart = wv.dot(inner_f);
        double bndsum0 = 0.0;
        for (int mu = j + 1; mu <= p - 1; ++mu) {
            Eigen::VectorXd inner_g = neumann_iter_bv(ws, mu - j).transpose() *
                                      wb0.cwiseProduct(g_bnd[static_cast<std::size_t>(mu)]);
            bndsum0 += wv.dot(inner_g);
        }
        push(j, volpart, bndsum0, wb0.dot(g_bnd[static_cast<std::size_t>(j)]));
    }
    // Mass condition: int_B f dv = int_dB g_{p-1} dsigma.
    push(p - 1, wv.dot(f_vol), 0.0, wb0.dot(g_bnd[static_cast<std::size_t>(p - 1)]));
    return rep;
}

/// Thm 3.2 solution (2*) contracted to arbitrary targets.
Eigen::VectorXd neumann_apply(int p, const Eigen::VectorXd& f_vol,
                              const std::vector<Eigen::VectorXd>& g_bnd, Workspace& ws,
                              const std::vector<Point>& targets) {
    const Eigen::VectorXd& wv = ws.vol().weights;
    const Eigen::VectorXd& wb = ws.bnd().weights;
    Eigen::VectorXd u = ws.neumann_chain_to(p, targets).transpose() * wv.cwiseProduct(f_vol);
    for (int mu = 0; mu <= p - 1; ++mu)
        u -= ws.neumann_chain_bnd_to(mu + 1, targets).transpose() *
             wb.cwiseProduct(g_bnd[static_cast<std::size_t>(mu)]);
    return u;
}

/// Same contraction onto the volume grid nodes (plain matrices).
Eigen::VectorXd neumann_apply_grid(int p, const Eigen::VectorXd& f_vol,
                                   const std::vector<Eigen::VectorXd>& g_bnd, Workspace& ws) {
    const Eigen::VectorXd& wv = ws.vol().weights;
    const Eigen::VectorXd& wb = ws.bnd().weights;
    Eigen::VectorXd u = ws.neumann_iter_vv(p).transpose() * wv.cwiseProduct(f_vol);
    for (int mu = 0; mu <= p - 1; ++mu)
        u -= neumann_iter_bv(ws, mu + 1).transpose() *
             wb.cwiseProduct(g_bnd[static_cast<std::size_t>(mu)]);
    return u;
}

Eigen::VectorXd dirichlet_apply(int q, const Eigen::VectorXd& f_vol,
                                const std::vector<Eigen::VectorXd>& h_bnd, Workspace& ws,
                                const std::vector<Point>& targets) {
    const Eigen::VectorXd& wv = ws.vol().weights;
    const Eigen::VectorXd& wb = ws.bnd().weights;
    Eigen::VectorXd u = ws.green_chain_to(q, targets).transpose() * wv.cwiseProduct(f_vol);
    for (int s = 0; s <= q - 1; ++s)
        u += ws.poisson_chain_from(s + 1, targets) *
             wb.cwiseProduct(h_bnd[static_cast<std::size_t>(q - s - 1)]);
    return u;
}

Eigen::VectorXd dirichlet_apply_grid(int q, const Eigen::VectorXd& f_vol,
                                     const std::vector<Eigen::VectorXd>& h_bnd, Workspace& ws) {
    const Eigen::VectorXd& wv = ws.vol().weights;
    const Eigen::VectorXd& wb = ws.bnd().weights;
    Eigen::VectorXd u = ws.green_iter_vv(q).transpose() * wv.cwiseProduct(f_vol);
    for (int s = 0; s <= q - 1; ++s)
        u += ws.poisson_iter_vb(s + 1) *
             wb.cwiseProduct(h_bnd[static_cast<std::size_t>(q - s - 1)]);
    return u;
}

void require_interior(const std::vector<Point>& targets) {
    for (const auto& p : targets)
        if (!(koranyi_norm(p) < 1.0))
            throw std::invalid_argument("solution sample points must be interior (gauge < 1)");
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points

SolvabilityReport check_neumann(const BVPSpec& spec, Workspace& ws) {
    spec.validate();
    if (spec.kind != ProblemKind::Neumann)
        throw std::invalid_argument("check_neumann: spec kind must be neumann");
    Eigen::VectorXd f_vol = eval_on(spec.f, ws.vol().nodes);
    std::vector<Eigen::VectorXd> g_bnd;
    for (int j = 0; j < spec.p; ++j)
        g_bnd.push_back(data_or_zero(spec.g, static_cast<std::size_t>(j), ws.bnd().nodes));
    return check_neumann_values(spec.p, f_vol, g_bnd, ws, "direct");
}

SolutionField solve_neumann(const BVPSpec& spec, Workspace& ws, const std::vector<Point>& targets,
                            bool force) {
    require_interior(targets);
    SolvabilityReport rep = check_neumann(spec, ws);
    if (!rep.solvable && !force)
        throw UnsolvableError("neumann problem fails its solvability conditions");
    Eigen::VectorXd f_vol = eval_on(spec.f, ws.vol().nodes);
    std::vector<Eigen::VectorXd> g_bnd;
    for (int j = 0; j < spec.p; ++j)
        g_bnd.push_back(data_or_zero(spec.g, static_cast<std::size_t>(j), ws.bnd().nodes));
    SolutionField out;
    out.points = targets;
    out.values = neumann_apply(spec.p, f_vol, g_bnd, ws, targets);
    out.grid_values = neumann_apply_grid(spec.p, f_vol, g_bnd, ws);
    out.calibration = ws.calibration();
    out.forced = !rep.solvable;
    return out;
}

Eigen::VectorXd solve_dirichlet_values(int q, const Eigen::VectorXd& f_vol,
                                       const std::vector<Eigen::VectorXd>& h_bnd, Workspace& ws,
                                       const std::vector<Point>& targets) {
    if (q < 1) throw std::invalid_argument("solve_dirichlet: q >= 1");
    if (static_cast<int>(h_bnd.size()) != q)
        throw std::invalid_argument("solve_dirichlet: expected q data vectors");
    return dirichlet_apply(q, f_vol, h_bnd, ws, targets);
}

SolutionField solve_dirichlet(int q, const Expr& f, const std::vector<Expr>& h, Workspace& ws,
                              const std::vector<Point>& targets) {
    require_interior(targets);
    Eigen::VectorXd f_vol =
        f.valid() ? eval_on(f, ws.vol().nodes)
                  : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ws.vol().nodes.size()));
    std::vector<Eigen::VectorXd> h_bnd;
    for (int s = 0; s < q; ++s)
        h_bnd.push_back(data_or_zero(h, static_cast<std::size_t>(s), ws.bnd().nodes));
    SolutionField out;
    out.points = targets;
    out.values = solve_dirichlet_values(q, f_vol, h_bnd, ws, targets);
    out.grid_values = dirichlet_apply_grid(q, f_vol, h_bnd, ws);
    out.calibration = ws.calibration();
    return out;
}

std::pair<SolvabilityReport, SolutionField> check_and_solve_nd(const BVPSpec& spec, Workspace& ws,
                                                               const std::vector<Point>& targets,
                                                               bool force, bool two_stage) {
    spec.validate();
    if (spec.kind != ProblemKind::NeumannDirichlet)
        throw std::invalid_argument("check_and_solve_nd: wrong problem kind");
    require_interior(targets);
    const Eigen::VectorXd& wv = ws.vol().weights;
    const Eigen::VectorXd& wb = ws.bnd().weights;

    Eigen::VectorXd f_vol = eval_on(spec.f, ws.vol().nodes);
    std::vector<Eigen::VectorXd> g_bnd, h_bnd;
    for (int j = 0; j < spec.p; ++j)
        g_bnd.push_back(data_or_zero(spec.g, static_cast<std::size_t>(j), ws.bnd().nodes));
    for (int s = 0; s < spec.q; ++s)
        h_bnd.push_back(data_or_zero(spec.h, static_cast<std::size_t>(s), ws.bnd().nodes));

    // Inner Dirichlet stage: w = L_0^p u on the volume grid. The
    // conditions (10) are the Neumann conditions (1*) applied to w; the
    // fused M/S matrices arise by regrouping the same products.
    Eigen::VectorXd w_grid = dirichlet_apply_grid(spec.q, f_vol, h_bnd, ws);
    SolvabilityReport rep =
        check_neumann_values(spec.p, w_grid, g_bnd, ws, two_stage ? "composition" : "direct");

    SolutionField out;
    out.points = targets;
    out.calibration = ws.calibration();
    out.forced = !rep.solvable;
    if (!rep.solvable && !force) throw UnsolvableError("mixed ND problem is unsolvable");

    if (two_stage) {
        out.values = neumann_apply(spec.p, w_grid, g_bnd, ws, targets);
    } else {
        // Direct formula (11): fused kernels M_{p,q}, S_{p,s+1}.
        Eigen::MatrixXd np_to_t = ws.neumann_chain_to(spec.p, targets);
        KernelMatrix gq{ws.vol().id(), ws.vol().id(), ws.green_iter_vv(spec.q), true};
        KernelMatrix np{ws.vol().id(), "targets", np_to_t, false};
        Eigen::MatrixXd m_to_t = mixed_kernels(gq, np, wv).values;  // vol x targets
        Eigen::VectorXd u = m_to_t.transpose() * wv.cwiseProduct(f_vol);
        for (int s = 0; s <= spec.q - 1; ++s) {
            Eigen::MatrixXd s_mat =
                np_to_t.transpose() * wv.asDiagonal() * ws.poisson_iter_vb(s + 1);
            u += s_mat * wb.cwiseProduct(h_bnd[static_cast<std::size_t>(spec.q - s - 1)]);
        }
        for (int mu = 0; mu <= spec.p - 1; ++mu)
            u -= ws.neumann_chain_bnd_to(mu + 1, targets).transpose() *
                 wb.cwiseProduct(g_bnd[static_cast<std::size_t>(mu)]);
        out.values = u;
    }
    out.grid_values = neumann_apply_grid(spec.p, w_grid, g_bnd, ws);
    return {rep, out};
}

std::pair<SolvabilityReport, SolutionField> check_and_solve_dn(const BVPSpec& spec, Workspace& ws,
                                                               const std::vector<Point>& targets,
                                                               bool force, bool two_stage) {
    spec.validate();
    if (spec.kind != ProblemKind::DirichletNeumann)
        throw std::invalid_argument("check_and_solve_dn: wrong problem kind");
    require_interior(targets);
    const Eigen::VectorXd& wv = ws.vol().weights;
    const Eigen::VectorXd& wb = ws.bnd().weights;

    Eigen::VectorXd f_vol = eval_on(spec.f, ws.vol().nodes);
    std::vector<Eigen::VectorXd> g_bnd, h_bnd;
    for (int j = 0; j < spec.p; ++j)
        g_bnd.push_back(data_or_zero(spec.g, static_cast<std::size_t>(j), ws.bnd().nodes));
    for (int s = 0; s < spec.q; ++s)
        h_bnd.push_back(data_or_zero(spec.h, static_cast<std::size_t>(s), ws.bnd().nodes));

    // Conditions (5.29): the inner Neumann stage L_0^q u = w sees f and
    // the Neumann data only.
    std::string mode = spec.strict_paper_dn ? "strict-paper" : (two_stage ? "composition" : "direct");
    SolvabilityReport rep = check_neumann_values(spec.p, f_vol, g_bnd, ws, mode);

    SolutionField out;
    out.points = targets;
    out.calibration = ws.calibration();
    out.forced = !rep.solvable;
    if (!rep.solvable && !force) throw UnsolvableError("mixed DN problem is unsolvable");

    // Poisson-term data: Dirichlet family h (composition-consistent); the
    // strict paper reading substitutes the Neumann family g literally.
    const std::vector<Eigen::VectorXd>& trace_data = spec.strict_paper_dn ? g_bnd : h_bnd;
    auto trace_at = [&](int idx) -> Eigen::VectorXd {
        if (idx < static_cast<int>(trace_data.size())) return trace_data[static_cast<std::size_t>(idx)];
        return Eigen::VectorXd::Zero(wb.size());
    };

    Eigen::VectorXd w_grid = neumann_apply_grid(spec.p, f_vol, g_bnd, ws);
    if (two_stage && !spec.strict_paper_dn) {
        out.values = dirichlet_apply(spec.q, w_grid, h_bnd, ws, targets);
    } else {
        // Direct formula (5.30) with fused M_{p,q} and M_{mu+1,q}.
        Eigen::MatrixXd gq_to_t = ws.green_chain_to(spec.q, targets);
        Eigen::MatrixXd m_to_t =
            ws.neumann_iter_vv(spec.p) * wv.asDiagonal() * gq_to_t;  // vol x targets
        Eigen::VectorXd u = m_to_t.transpose() * wv.cwiseProduct(f_vol);
        for (int mu = 0; mu <= spec.p - 1; ++mu) {
            Eigen::MatrixXd mb_to_t =
                neumann_iter_bv(ws, mu + 1) * wv.asDiagonal() * gq_to_t;  // bnd x targets
            u -= mb_to_t.transpose() * wb.cwiseProduct(g_bnd[static_cast<std::size_t>(mu)]);
        }
        for (int r = 0; r <= spec.q - 1; ++r)
            u += ws.poisson_chain_from(r + 1, targets) *
                 wb.cwiseProduct(trace_at(spec.q - r - 1));
        out.values = u;
    }
    std::vector<Eigen::VectorXd> trace_grid;
    for (int s = 0; s < spec.q; ++s) trace_grid.push_back(trace_at(s));
    out.grid_values = dirichlet_apply_grid(spec.q, w_grid, trace_grid, ws);
    return {rep, out};
}

// ---------------------------------------------------------------------------
// Probes and verification

std::vector<Point> interior_probes(int count, unsigned seed, double gauge_min, double gauge_max) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ur(gauge_min, gauge_max);
    std::uniform_real_distribution<double> up(-1.1, 1.1);
    std::uniform_real_distribution<double> uf(0.0, 2.0 * M_PI);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double rho = ur(rng), psi = up(rng), phi = uf(rng);
        double zr = rho * std::sqrt(std::cos(psi));
        pts.emplace_back(std::complex<double>(zr * std::cos(phi), zr * std::sin(phi)),
                         rho * rho * std::sin(psi));
    }
    return pts;
}

std::vector<Point> boundary_probes(int count, unsigned seed, double psi_max) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> up(-psi_max, psi_max);
    std::uniform_real_distribution<double> uf(0.0, 2.0 * M_PI);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double psi = up(rng), phi = uf(rng);
        double zr = std::sqrt(std::cos(psi));
        pts.emplace_back(std::complex<double>(zr * std::cos(phi), zr * std::sin(phi)),
                         std::sin(psi));
    }
    return pts;
}

ResidualReport verify(const SolutionField& u, const BVPSpec& spec, Workspace& ws, unsigned seed) {
    if (u.grid_values.size() != static_cast<Eigen::Index>(ws.vol().nodes.size()))
        throw std::invalid_argument("verify: solution grid samples do not match the workspace");
    int total = spec.total_order();
    std::vector<CircularField> iter;
    iter.push_back(CircularField::from_grid(ws.vol(), u.grid_values));
    for (int k = 1; k <= total; ++k) iter.push_back(iter.back().apply_sublaplacian());

    std::vector<Point> inner = interior_probes(40, seed, 0.25, 0.65);
    std::vector<Point> bprobes = boundary_probes(24, seed + 1, 1.0);

    ResidualReport rep;
    double fsup = 1e-8, sup = 0.0, l2 = 0.0;
    for (const auto& pt : inner) fsup = std::max(fsup, std::abs(spec.f.eval(pt)));
    double uscale = 1e-8;
    for (const auto& pt : inner) uscale = std::max(uscale, std::abs(iter[0].value_at(pt)));
    for (const auto& pt : inner) {
        double r = iter[static_cast<std::size_t>(total)].value_at(pt) - spec.f.eval(pt);
        sup = std::max(sup, std::abs(r));
        l2 += r * r;
    }
    rep.interior_sup = sup / fsup;
    rep.interior_l2 = std::sqrt(l2 / static_cast<double>(inner.size())) / fsup;

    auto b0_of = [&](const CircularField& fld, const Point& pt) {
        return -0.25 * normal_derivative(fld.jet_at(pt), gauge4_jet(pt), pt);
    };
    auto data_sup = [&](const std::vector<Expr>& data, int j) {
        double s = 1e-8;
        if (j < static_cast<int>(data.size()) && data[static_cast<std::size_t>(j)].valid())
            for (const auto& pt : bprobes)
                s = std::max(s, std::abs(data[static_cast<std::size_t>(j)].eval(pt)));
        return s;
    };
    auto data_val = [&](const std::vector<Expr>& data, int j, const Point& pt) {
        if (j < static_cast<int>(data.size()) && data[static_cast<std::size_t>(j)].valid())
            return data[static_cast<std::size_t>(j)].eval(pt);
        return 0.0;
    };

    // Neumann-side conditions: which L_0 power carries B_0 depends on the kind.
    int neumann_shift = spec.kind == ProblemKind::DirichletNeumann ? spec.q : 0;
    for (int j = 0; j < spec.p; ++j) {
        double s = 0.0;
        double denom = std::max(data_sup(spec.g, j), uscale);
        for (const auto& pt : bprobes) {
            double r = b0_of(iter[static_cast<std::size_t>(neumann_shift + j)], pt) -
                       data_val(spec.g, j, pt);
            s = std::max(s, std::abs(r));
        }
        rep.neumann_sup.push_back(s / denom);
    }
    // Dirichlet-side traces.
    int dirichlet_shift = spec.kind == ProblemKind::NeumannDirichlet ? spec.p : 0;
    for (int s_idx = 0; s_idx < spec.q; ++s_idx) {
        double s = 0.0;
        double denom = std::max(data_sup(spec.h, s_idx), uscale);
        for (const auto& pt : bprobes) {
            double r = iter[static_cast<std::size_t>(dirichlet_shift + s_idx)].value_at(pt) -
                       data_val(spec.h, s_idx, pt);
            s = std::max(s, std::abs(r));
        }
        rep.dirichlet_sup.push_back(s / denom);
    }
    return rep;
}

std::string report_to_json(const SolvabilityReport& rep) {
    nlohmann::json j;
    j["solvable"] = rep.solvable;
    j["tolerance"] = rep.tol;
    j["calibration"] = rep.calibration;
    j["mode"] = rep.mode;
    j["conditions"] = nlohmann::json::array();
    for (const auto& c : rep.conditions) {
        j["conditions"].push_back({{"index", c.index},
                                   {"lhs", c.lhs},
                                   {"rhs", c.rhs},
                                   {"abs_residual", c.abs_residual},
                                   {"rel_residual", c.rel_residual},
                                   {"abs_residual_uncalibrated", c.abs_residual_uncalibrated},
                                   {"pass", c.pass}});
    }
    return j.dump(2);
}

std::string residuals_to_json(const ResidualReport& rep) {
    nlohmann::json j;
    j["interior_sup"] = rep.interior_sup;
    j["interior_l2"] = rep.interior_l2;
    j["neumann_sup"] = rep.neumann_sup;
    j["dirichlet_sup"] = rep.dirichlet_sup;
    return j.dump(2);
}

}  // namespace hball
