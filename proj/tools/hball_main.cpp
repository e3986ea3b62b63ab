#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hball/solver.hpp"

namespace {

constexpr const char* kVersion = "hball 1.0.0";

using hball::BVPSpec;
using hball::Point;
using hball::ProblemKind;
using nlohmann::json;

struct RunConfig {
    std::string spec_path;
    int resolution = 12;
    int boundary_resolution = 16;
    double delta_cap = 0.05;
    int ntheta = 32;
    int series_kmax = -1;  // -1: keep spec value
    int series_mmax = -1;
    double series_b0 = 0.0;
    bool series_b0_set = false;
    std::string series_coeffs;
    bool force = false;
    std::string out_path, report_path, grid_cache, plot_data;
    int threads = 1;
    unsigned seed = 2024;
    int probes = 64;
    // kernel subcommand
    std::string kernel_type = "green";
    std::string eta_str = "0,0,0";
    bool no_circularize = false;

    // which flags were given explicitly (for spec-file override rules)
    bool resolution_set = false, boundary_set = false, delta_cap_set = false, ntheta_set = false;
};

json config_echo(const RunConfig& c, const std::string& subcommand) {
    json j;
    j["subcommand"] = subcommand;
    j["spec"] = c.spec_path;
    j["resolution"] = c.resolution;
    j["boundary_resolution"] = c.boundary_resolution;
    j["delta_cap"] = c.delta_cap;
    j["ntheta"] = c.ntheta;
    j["threads"] = c.threads;
    j["seed"] = c.seed;
    j["force"] = c.force;
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << text;
}

Point parse_point(const std::string& s) {
    std::istringstream is(s);
    double x, y, t;
    char c1, c2;
    if (!(is >> x >> c1 >> y >> c2 >> t) || c1 != ',' || c2 != ',')
        throw std::invalid_argument("expected point as x,y,t: " + s);
    return Point(std::complex<double>(x, y), t);
}

/// Load the problem spec and apply command-line overrides.
BVPSpec load_spec(const RunConfig& c) {
    if (c.spec_path.empty()) throw std::invalid_argument("--spec is required");
    BVPSpec spec = BVPSpec::from_json(slurp(c.spec_path));
    if (c.resolution_set) spec.res.volume = c.resolution;
    if (c.boundary_set) spec.res.boundary = c.boundary_resolution;
    if (c.delta_cap_set) spec.res.delta_cap = c.delta_cap;
    if (c.ntheta_set) spec.res.ntheta = c.ntheta;
    if (c.series_kmax >= 0) spec.series.k_max = c.series_kmax;
    if (c.series_mmax >= 0) spec.series.m_max = c.series_mmax;
    if (c.series_b0_set) spec.series.b0 = c.series_b0;
    if (!c.series_coeffs.empty()) {
        std::string text = c.series_coeffs;
        if (text.find_first_of("[{") != 0) text = slurp(text);
        json arr = json::parse(text);
        auto table = std::make_shared<std::map<std::pair<int, int>, double>>();
        for (const auto& e : arr)
            (*table)[{e.at("m").get<int>(), e.at("k").get<int>()}] = e.at("value").get<double>();
        spec.series.provider = [table](int m, int k) {
            auto it = table->find({m, k});
            return it == table->end() ? 0.0 : it->second;
        };
    }
    spec.validate();
    return spec;
}

json report_envelope(const RunConfig& c, const std::string& subcommand, double calibration) {
    json j;
    j["version"] = kVersion;
    j["config"] = config_echo(c, subcommand);
    j["calibration"] = calibration;
    j["tolerances"] = {{"tau_solv", 0.02}, {"circularity", 1e-8}};
    return j;
}

std::string csv_preamble(const RunConfig& c, const std::string& subcommand, double calibration) {
    std::ostringstream os;
    os << "# " << kVersion << "\n";
    os << "# config " << config_echo(c, subcommand).dump() << "\n";
    os << std::setprecision(17) << "# calibration " << calibration << "\n";
    os << "# tau_solv 0.02\n";
    return os.str();
}

void emit_report(const RunConfig& c, const json& j) {
    if (!c.report_path.empty())
        write_text(c.report_path, j.dump(2) + "\n");
    else
        std::cerr << j.dump(2) << "\n";
}

void maybe_write_grid_cache(const RunConfig& c, const hball::BoundaryGrid& bnd) {
    if (c.grid_cache.empty()) return;
    std::ifstream probe(c.grid_cache);
    if (probe) {
        hball::BoundaryGrid cached = hball::boundary_grid_from_json(slurp(c.grid_cache));
        if (cached.res == bnd.res && cached.delta_cap == bnd.delta_cap &&
            std::abs(cached.calibration - bnd.calibration) > 1e-12 * std::abs(bnd.calibration))
            std::cerr << "warning: cached calibration differs from recomputed value\n";
    } else {
        write_text(c.grid_cache, hball::grid_to_json(bnd));
    }
}

/// Run the kind-appropriate checker; solution computed only when asked.
std::pair<hball::SolvabilityReport, hball::SolutionField> dispatch(
    const BVPSpec& spec, hball::Workspace& ws, const std::vector<Point>& targets, bool force) {
    switch (spec.kind) {
        case ProblemKind::Neumann: {
            hball::SolvabilityReport rep = hball::check_neumann(spec, ws);
            hball::SolutionField sol;
            if (rep.solvable || force) sol = hball::solve_neumann(spec, ws, targets, force);
            return {rep, sol};
        }
        case ProblemKind::NeumannDirichlet:
            return hball::check_and_solve_nd(spec, ws, targets, force);
        case ProblemKind::DirichletNeumann:
            return hball::check_and_solve_dn(spec, ws, targets, force);
    }
    throw std::logic_error("dispatch: bad kind");
}

int cmd_check(const RunConfig& c) {
    BVPSpec spec = load_spec(c);
    hball::Workspace ws(1, spec.res, spec.series, c.threads);
    maybe_write_grid_cache(c, ws.bnd());
    auto [rep, sol] = dispatch(spec, ws, {}, true);
    json j = report_envelope(c, "check", ws.calibration());
    j["report"] = json::parse(hball::report_to_json(rep));
    emit_report(c, j);
    std::cout << "check: " << (rep.solvable ? "solvable" : "unsolvable") << " ("
              << rep.conditions.size() << " condition(s))\n";
    return rep.solvable ? 0 : 2;
}

int cmd_solve(const RunConfig& c) {
    BVPSpec spec = load_spec(c);
    hball::Workspace ws(1, spec.res, spec.series, c.threads);
    maybe_write_grid_cache(c, ws.bnd());
    std::vector<Point> targets = hball::interior_probes(c.probes, c.seed, 0.15, 0.8);
    auto [rep, sol] = dispatch(spec, ws, targets, c.force);
    if (!rep.solvable && !c.force)
        throw hball::UnsolvableError("solvability conditions fail (use --force to override)");

    std::ostringstream csv;
    csv << csv_preamble(c, "solve", ws.calibration());
    csv << "x,y,t,u\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < sol.values.size(); ++i) {
        const Point& p = sol.points[static_cast<std::size_t>(i)];
        csv << p.x(0) << "," << p.y(0) << "," << p.t << "," << sol.values[i] << "\n";
    }
    if (!c.out_path.empty())
        write_text(c.out_path, csv.str());
    else
        std::cout << csv.str();

    if (!c.plot_data.empty()) {
        hball::CircularField fld = hball::CircularField::from_grid(ws.vol(), sol.grid_values);
        std::ostringstream plot;
        plot << csv_preamble(c, "solve", ws.calibration()) << "rho,psi,u\n"
             << std::setprecision(17);
        const auto& vg = ws.vol();
        for (std::size_t i = 0; i < vg.rho_nodes.size(); ++i)
            for (std::size_t jj = 0; jj < vg.psi_nodes.size(); ++jj)
                plot << vg.rho_nodes[i] << "," << vg.psi_nodes[jj] << ","
                     << fld.value(vg.rho_nodes[i], vg.psi_nodes[jj]) << "\n";
        write_text(c.plot_data, plot.str());
    }

    json j = report_envelope(c, "solve", ws.calibration());
    j["report"] = json::parse(hball::report_to_json(rep));
    j["forced"] = sol.forced;
    emit_report(c, j);
    std::cout << "solve: " << sol.values.size() << " samples"
              << (sol.forced ? " (forced past failing conditions)" : "") << "\n";
    return 0;
}

int cmd_verify(const RunConfig& c) {
    BVPSpec spec = load_spec(c);
    hball::Workspace ws(1, spec.res, spec.series, c.threads);
    std::vector<Point> targets = hball::interior_probes(c.probes, c.seed, 0.15, 0.8);
    auto [rep, sol] = dispatch(spec, ws, targets, c.force);
    if (!rep.solvable && !c.force)
        throw hball::UnsolvableError("solvability conditions fail (use --force to override)");
    hball::ResidualReport res = hball::verify(sol, spec, ws, c.seed);
    json j = report_envelope(c, "verify", ws.calibration());
    j["solvability"] = json::parse(hball::report_to_json(rep));
    j["residuals"] = json::parse(hball::residuals_to_json(res));
    emit_report(c, j);
    std::cout << "verify: interior sup residual " << res.interior_sup << "\n";
    return 0;
}

int cmd_kernel(const RunConfig& c) {
    hball::KernelId id;
    if (c.kernel_type == "fundamental")
        id.kind = hball::KernelKind::Fundamental;
    else if (c.kernel_type == "green")
        id.kind = hball::KernelKind::Green;
    else if (c.kernel_type == "poisson")
        id.kind = hball::KernelKind::Poisson;
    else if (c.kernel_type == "neumann")
        id.kind = hball::KernelKind::Neumann;
    else
        throw std::invalid_argument("unknown kernel type: " + c.kernel_type);
    id.circularize = !c.no_circularize;
    id.ntheta = c.ntheta;
    if (c.series_kmax >= 0) id.series.k_max = c.series_kmax;
    if (c.series_mmax >= 0) id.series.m_max = c.series_mmax;
    if (c.series_b0_set) id.series.b0 = c.series_b0;

    Point eta = parse_point(c.eta_str);
    std::ostringstream csv;
    csv << csv_preamble(c, "kernel", 1.0);
    csv << "x,y,t,gauge,value\n" << std::setprecision(17);
    auto emit = [&](const Point& p) {
        csv << p.x(0) << "," << p.y(0) << "," << p.t << "," << hball::koranyi_norm(p) << ","
            << hball::kernel_eval(id, eta, p) << "\n";
    };
    if (id.kind == hball::KernelKind::Poisson) {
        hball::BoundaryGrid bnd = hball::boundary_grid(1, c.boundary_resolution, c.delta_cap);
        for (const auto& p : bnd.nodes) emit(p);
    } else {
        hball::VolumeGrid vol = hball::ball_grid(1, c.resolution);
        for (const auto& p : vol.nodes) emit(p);
        hball::BoundaryGrid bnd = hball::boundary_grid(1, c.boundary_resolution, c.delta_cap);
        for (const auto& p : bnd.nodes) emit(p);
    }
    if (!c.out_path.empty())
        write_text(c.out_path, csv.str());
    else
        std::cout << csv.str();
    std::cout << "kernel: tabulated " << c.kernel_type << "\n";
    return 0;
}

int cmd_calibrate(const RunConfig& c) {
    hball::BoundaryGrid bnd = hball::boundary_grid(1, c.boundary_resolution, c.delta_cap);
    double cal = hball::calibrate(bnd, c.ntheta);
    if (!c.grid_cache.empty()) write_text(c.grid_cache, hball::grid_to_json(bnd));
    json j = report_envelope(c, "calibrate", cal);
    j["boundary_resolution"] = c.boundary_resolution;
    j["delta_cap"] = c.delta_cap;
    emit_report(c, j);
    std::cout << std::setprecision(12) << "calibrate: constant " << cal << "\n";
    return 0;
}

int cmd_grid(const RunConfig& c) {
    hball::VolumeGrid vol = hball::ball_grid(1, c.resolution);
    hball::BoundaryGrid bnd = hball::boundary_grid(1, c.boundary_resolution, c.delta_cap);
    hball::calibrate(bnd, c.ntheta);
    json j;
    j["version"] = kVersion;
    j["config"] = config_echo(c, "grid");
    j["volume"] = json::parse(hball::grid_to_json(vol));
    j["boundary"] = json::parse(hball::grid_to_json(bnd));
    std::string text = j.dump();
    if (!c.out_path.empty())
        write_text(c.out_path, text + "\n");
    else
        std::cout << text << "\n";
    std::cerr << "grid: " << vol.nodes.size() << " volume nodes, " << bnd.nodes.size()
              << " boundary nodes\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Potential theory on the Koranyi ball of the Heisenberg group"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", c.spec_path, "problem spec JSON path");
        sub->add_option("--resolution", c.resolution, "volume grid resolution")
            ->check(CLI::Range(4, 64))
            ->each([&](const std::string&) { c.resolution_set = true; });
        sub->add_option("--boundary-resolution", c.boundary_resolution,
                        "boundary grid resolution")
            ->check(CLI::Range(4, 128))
            ->each([&](const std::string&) { c.boundary_set = true; });
        sub->add_option("--delta-cap", c.delta_cap, "characteristic cap gauge radius")
            ->each([&](const std::string&) { c.delta_cap_set = true; });
        sub->add_option("--ntheta", c.ntheta, "circular-average quadrature order")
            ->each([&](const std::string&) { c.ntheta_set = true; });
        sub->add_option("--series-kmax", c.series_kmax, "h-series k truncation");
        sub->add_option("--series-mmax", c.series_mmax, "h-series m truncation");
        sub->add_option("--series-b0", c.series_b0, "h-series constant term")
            ->each([&](const std::string&) { c.series_b0_set = true; });
        sub->add_option("--series-coeffs", c.series_coeffs,
                        "series coefficient table (JSON inline or path)");
        sub->add_flag("--force", c.force, "solve even when the check fails");
        sub->add_option("--out", c.out_path, "field CSV output path");
        sub->add_option("--report", c.report_path, "report JSON output path");
        sub->add_option("--grid-cache", c.grid_cache, "grid/calibration cache path");
        sub->add_option("--threads", c.threads, "matrix-fill thread cap");
        sub->add_option("--seed", c.seed, "probe-sampling seed");
        sub->add_option("--probes", c.probes, "number of sample points");
        sub->add_option("--emit-plot-data", c.plot_data, "write (rho,psi,u) triples");
    };

    CLI::App* s_solve = app.add_subcommand("solve", "check and solve a BVP");
    CLI::App* s_check = app.add_subcommand("check", "evaluate solvability conditions");
    CLI::App* s_verify = app.add_subcommand("verify", "solve then verify residuals");
    CLI::App* s_kernel = app.add_subcommand("kernel", "tabulate a kernel to CSV");
    CLI::App* s_cal = app.add_subcommand("calibrate", "compute the dsigma calibration");
    CLI::App* s_grid = app.add_subcommand("grid", "emit grids as JSON");
    for (CLI::App* sub : {s_solve, s_check, s_verify, s_kernel, s_cal, s_grid}) add_common(sub);
    s_kernel->add_option("--type", c.kernel_type, "fundamental|green|poisson|neumann");
    s_kernel->add_option("--eta", c.eta_str, "source point as x,y,t");
    s_kernel->add_flag("--no-circularize", c.no_circularize, "tabulate the raw kernel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? 0 : 3;
    }

    try {
        if (s_solve->parsed()) return cmd_solve(c);
        if (s_check->parsed()) return cmd_check(c);
        if (s_verify->parsed()) return cmd_verify(c);
        if (s_kernel->parsed()) return cmd_kernel(c);
        if (s_cal->parsed()) return cmd_calibrate(c);
        if (s_grid->parsed()) return cmd_grid(c);
        return 3;
    } catch (const hball::UnsolvableError& e) {
        std::cerr << "unsolvable: " << e.what() << "\n";
        return 2;
    } catch (const hball::ParseError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
