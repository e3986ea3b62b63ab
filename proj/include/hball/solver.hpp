#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hball/exprdsl.hpp"
#include "hball/interp.hpp"
#include "hball/quad.hpp"

namespace hball {

/// Problem kinds. Orders are renamed (p = Neumann order, q = Dirichlet
/// order) so that n stays the group dimension.
enum class ProblemKind { Neumann, NeumannDirichlet, DirichletNeumann };

std::string to_string(ProblemKind k);
ProblemKind problem_kind_from_string(const std::string& s);

/// Thrown when a solve is requested on a spec whose solvability check
/// fails and the force flag is not set.
struct UnsolvableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Resolution {
    int volume = 12;
    int boundary = 16;
    double delta_cap = 0.05;
    int ntheta = 32;
};

/// A polyharmonic BVP on the unit Koranyi ball. The Neumann data family
/// g_0..g_{p-1} pairs with the normal-derivative conditions, the
/// Dirichlet family h_0..h_{q-1} with the trace conditions.
struct BVPSpec {
    ProblemKind kind = ProblemKind::Neumann;
    int p = 1;  // Neumann order
    int q = 0;  // Dirichlet order
    Expr f;
    std::vector<Expr> g;
    std::vector<Expr> h;
    SeriesConfig series;
    Resolution res;
    bool strict_paper_dn = false;

    int total_order() const { return p + q; }

    /// Structural checks plus the circularity requirement on all data.
    void validate() const;

    static BVPSpec from_json(const std::string& text);
};

struct ConditionResult {
    int index = 0;              // j of the condition (p-1 = mass condition)
    double lhs = 0.0, rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;  // against the data scale when |rhs| < 1e-12
    double abs_residual_uncalibrated = 0.0;
    bool pass = false;
};

struct SolvabilityReport {
    std::vector<ConditionResult> conditions;
    bool solvable = true;
    double tol = 0.02;
    double calibration = 1.0;
    std::string mode;  // e.g. "direct", "composition", "strict-paper"
};

struct SolutionField {
    std::vector<Point> points;
    Eigen::VectorXd values;
    Eigen::VectorXd grid_values;  // on the workspace volume grid, for verify
    double calibration = 1.0;
    bool forced = false;  // solved despite a failing solvability check
};

struct ResidualReport {
    double interior_sup = 0.0, interior_l2 = 0.0;       // relative, L_0^{p+q} u vs f
    std::vector<double> neumann_sup;                    // per g_j, relative
    std::vector<double> dirichlet_sup;                  // per h_s, relative
};

/// Grids plus lazily-built kernel matrices shared across the checkers and
/// solvers. Matrices over grid nodes use plain kernels (exact on circular
/// data at the phi-ring level); probe-point columns are circularized.
class Workspace {
  public:
    Workspace(int n, const Resolution& res, const SeriesConfig& series, int threads = 1);

    const VolumeGrid& vol() const { return vol_; }
    const BoundaryGrid& bnd() const { return bnd_; }
    double calibration() const { return bnd_.calibration; }
    int threads() const { return threads_; }
    const SeriesConfig& series() const { return series_; }

    const Eigen::MatrixXd& neumann_vv();   // vol x vol, desingularized
    const Eigen::MatrixXd& neumann_bv();   // bnd x vol
    const Eigen::MatrixXd& green_vv();     // vol x vol, desingularized
    const Eigen::MatrixXd& poisson_vb();   // vol x bnd (interior eta rows)

    /// N_k(vol node, target) as a vol x m matrix; targets circularized.
    Eigen::MatrixXd neumann_chain_to(int k, const std::vector<Point>& targets);
    /// N_k(bnd node, target), k >= 1.
    Eigen::MatrixXd neumann_chain_bnd_to(int k, const std::vector<Point>& targets);
    /// G_k(vol node, target).
    Eigen::MatrixXd green_chain_to(int k, const std::vector<Point>& targets);
    /// P_k(target, bnd node) as an m x bnd matrix; L_0 in the first slot
    /// peels one index: L_0 P_k = P_{k-1}.
    Eigen::MatrixXd poisson_chain_from(int k, const std::vector<Point>& targets);

    /// Same chains contracted to the volume grid itself (plain kernels).
    Eigen::MatrixXd neumann_iter_vv(int k);
    Eigen::MatrixXd green_iter_vv(int k);
    Eigen::MatrixXd poisson_iter_vb(int k);  // P_k(vol node, bnd node)

  private:
    int n_;
    Resolution res_;
    SeriesConfig series_;
    int threads_;
    VolumeGrid vol_;
    BoundaryGrid bnd_;
    std::optional<Eigen::MatrixXd> nvv_, nbv_, gvv_, pvb_;
};

/// Thm 3.2 conditions (1*) for the order-p Neumann problem; also serves
/// the mixed kinds once f is replaced by the inner Dirichlet solve.
SolvabilityReport check_neumann(const BVPSpec& spec, Workspace& ws);

/// Thm 3.2 solution (2*) sampled at `targets`; `force` solves despite a
/// failing check (recorded in the result).
SolutionField solve_neumann(const BVPSpec& spec, Workspace& ws, const std::vector<Point>& targets,
                            bool force = false);

/// Polyharmonic Dirichlet helper: L_0^q u = f in B, L_0^s u = h_s on the
/// boundary; always solvable. Data given as grid samples.
Eigen::VectorXd solve_dirichlet_values(int q, const Eigen::VectorXd& f_vol,
                                       const std::vector<Eigen::VectorXd>& h_bnd, Workspace& ws,
                                       const std::vector<Point>& targets);
SolutionField solve_dirichlet(int q, const Expr& f, const std::vector<Expr>& h, Workspace& ws,
                              const std::vector<Point>& targets);

/// Thm 4.2: conditions (10) and solution (11). `two_stage` evaluates the
/// explicit composition instead of the fused M/S matrices.
std::pair<SolvabilityReport, SolutionField> check_and_solve_nd(const BVPSpec& spec, Workspace& ws,
                                                               const std::vector<Point>& targets,
                                                               bool force = false,
                                                               bool two_stage = false);

/// Thm 4.3: conditions (5.29) and solution (5.30). The Poisson term takes
/// the Dirichlet data (composition-consistent); `spec.strict_paper_dn`
/// substitutes the Neumann data literally and flags the report mode.
std::pair<SolvabilityReport, SolutionField> check_and_solve_dn(const BVPSpec& spec, Workspace& ws,
                                                               const std::vector<Point>& targets,
                                                               bool force = false,
                                                               bool two_stage = false);

/// Residuals of the interpolated solution against the PDE and each
/// boundary condition at deterministic non-characteristic probes.
ResidualReport verify(const SolutionField& u, const BVPSpec& spec, Workspace& ws,
                      unsigned seed = 2024);

/// Deterministic probe sets (interior: gauge in [0.2, 0.7]; boundary:
/// away from the caps).
std::vector<Point> interior_probes(int count, unsigned seed, double gauge_min = 0.2,
                                   double gauge_max = 0.7);
std::vector<Point> boundary_probes(int count, unsigned seed, double psi_max = 1.1);

std::string report_to_json(const SolvabilityReport& rep);
std::string residuals_to_json(const ResidualReport& rep);

}  // namespace hball
