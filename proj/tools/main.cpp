#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sinkflow/beurling.hpp"
#include "sinkflow/bridge.hpp"
#include "sinkflow/diagnostics.hpp"
#include "sinkflow/io.hpp"
#include "sinkflow/solver.hpp"
#include "sinkflow/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 1;
constexpr int kExitComputeFailed = 2;

struct LoadedProblem {
    sinkflow::ProblemInstance problem;
    sinkflow::SolveConfig solver;
};

// Config errors map to exit 1, anything after a valid config to exit 2.
std::optional<LoadedProblem> load_config(const std::string& path) {
    try {
        const json j = sinkflow::load_json_file(path);
        LoadedProblem lp{sinkflow::problem_from_json(j),
                         sinkflow::solve_config_from_json(j)};
        return lp;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sinkflow: invalid config: %s\n", e.what());
        return std::nullopt;
    }
}

int run_solve(const std::string& config_path, const fs::path& out_dir) {
    auto lp = load_config(config_path);
    if (!lp) return kExitBadConfig;
    try {
        sinkflow::SolveConfig cfg = lp->solver;
        cfg.record_trace = true;
        const sinkflow::KernelOperator K = lp->problem.kernel();
        const sinkflow::SolveResult result = sinkflow::solve_on_kernel(
            K, lp->problem.mu0.weights, lp->problem.mu1.weights, cfg);

        fs::create_directories(out_dir);
        sinkflow::write_trace_csv(out_dir / "trace.csv", result.trace);
        sinkflow::write_json_file(out_dir / "solution.json",
                                  sinkflow::solution_to_json(result));
        if (result.status != sinkflow::SolveStatus::Diverged)
            sinkflow::write_plan_csv(out_dir / "plan.csv",
                                     sinkflow::entropic_plan(result.scalings, K));
        if (result.status == sinkflow::SolveStatus::Diverged) {
            std::fprintf(stderr, "sinkflow: solve diverged after %d iterations\n",
                         result.iters);
            return kExitComputeFailed;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sinkflow: solve failed: %s\n", e.what());
        return kExitComputeFailed;
    }
}

int run_stability(double delta, double h_min, double h_max, int steps,
                  const fs::path& out_dir) {
    sinkflow::StabilityReport report;
    try {
        report = sinkflow::scan_stability(delta, h_min, h_max, steps);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sinkflow: invalid stability scan: %s\n", e.what());
        return kExitBadConfig;
    }
    try {
        fs::create_directories(out_dir);
        sinkflow::write_stability_csv(out_dir / "stability.csv", report);
        sinkflow::write_json_file(out_dir / "stability_summary.json",
                                  {{"h_optimal", report.h_optimal},
                                   {"h_unstable_onset", report.h_unstable_onset}});
        return kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sinkflow: stability scan failed: %s\n", e.what());
        return kExitComputeFailed;
    }
}

int run_sweep(const std::string& config_path, const std::vector<double>& h_list,
              const fs::path& out_dir) {
    auto lp = load_config(config_path);
    if (!lp) return kExitBadConfig;
    try {
        const sinkflow::KernelOperator K = lp->problem.kernel();
        fs::create_directories(out_dir);
        std::ofstream summary(out_dir / "sweep_summary.csv");
        if (!summary) throw std::runtime_error("cannot open sweep_summary.csv");
        summary << "h,iters_to_tol,final_residual,status\n";
        for (double h : h_list) {
            sinkflow::SolveConfig cfg = lp->solver;
            cfg.h = h;
            cfg.record_trace = true;
            const sinkflow::SolveResult result = sinkflow::solve_on_kernel(
                K, lp->problem.mu0.weights, lp->problem.mu1.weights, cfg);
            char name[64];
            std::snprintf(name, sizeof(name), "sweep_trace_h%g.csv", h);
            sinkflow::write_trace_csv(out_dir / name, result.trace);
            summary << sinkflow::format_float(h) << ',' << result.iters << ','
                    << sinkflow::format_float(result.residual) << ','
                    << sinkflow::status_name(result.status) << '\n';
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sinkflow: sweep failed: %s\n", e.what());
        return kExitComputeFailed;
    }
}

int run_interpolate(const std::string& config_path, const std::vector<double>& times,
                    int grid_points, const std::vector<double>& grid_lo,
                    const std::vector<double>& grid_hi, const fs::path& out_dir) {
    auto lp = load_config(config_path);
    if (!lp) return kExitBadConfig;
    try {
        const sinkflow::SolveResult result = sinkflow::solve(lp->problem, lp->solver);
        if (result.status != sinkflow::SolveStatus::Converged)
            throw std::runtime_error("solve did not converge (" +
                                     sinkflow::status_name(result.status) + ")");

        sinkflow::GridSpec grid;
        if (!grid_lo.empty() || !grid_hi.empty()) {
            if (grid_lo.size() != grid_hi.size() ||
                static_cast<int>(grid_lo.size()) != lp->problem.domain.dim)
                throw std::invalid_argument("grid bounds must have one entry per axis");
            grid.lo = Eigen::Map<const Eigen::VectorXd>(grid_lo.data(), grid_lo.size());
            grid.hi = Eigen::Map<const Eigen::VectorXd>(grid_hi.data(), grid_hi.size());
            grid.shape.assign(grid_lo.size(), grid_points);
            grid.validate();
        } else {
            grid = sinkflow::default_grid(lp->problem, grid_points);
        }

        const sinkflow::BridgeDensity bridge =
            sinkflow::bridge_density(result.scalings, lp->problem, times, grid);
        fs::create_directories(out_dir);
        sinkflow::write_bridge_csv(out_dir / "bridge.csv", bridge);
        return kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sinkflow: interpolation failed: %s\n", e.what());
        return kExitComputeFailed;
    }
}

int run_beurling_check(const std::string& config_path, double tol, std::uint64_t seed,
                       const fs::path& out_dir) {
    auto lp = load_config(config_path);
    if (!lp) return kExitBadConfig;
    try {
        const sinkflow::KernelOperator K = lp->problem.kernel();
        const Eigen::VectorXd& mu0 = lp->problem.mu0.weights;
        const Eigen::VectorXd& mu1 = lp->problem.mu1.weights;

        const sinkflow::ProductMeasure inverse =
            sinkflow::invert_t_epsilon(mu0, mu1, K, tol);
        const sinkflow::ProductMeasure image = sinkflow::t_epsilon_map(inverse, K);
        const Eigen::MatrixXd target =
            sinkflow::ProductMeasure{mu0, mu1}.canonical().outer();
        const double roundtrip_err =
            (image.outer() - target).cwiseAbs().maxCoeff() / target.maxCoeff();

        std::mt19937_64 rng(seed);
        auto uniform_pm1 = [&rng] {
            return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
        };
        auto random_start = [&] {
            sinkflow::Potentials p;
            p.f = Eigen::VectorXd::NullaryExpr(K.rows(), [&](Eigen::Index) {
                return uniform_pm1();
            });
            p.g = Eigen::VectorXd::NullaryExpr(K.cols(), [&](Eigen::Index) {
                return uniform_pm1();
            });
            return p;
        };
        const Eigen::MatrixXd o1 =
            sinkflow::invert_t_epsilon(mu0, mu1, K, tol, random_start()).outer();
        const Eigen::MatrixXd o2 =
            sinkflow::invert_t_epsilon(mu0, mu1, K, tol, random_start()).outer();
        const double uniqueness_err = (o1 - o2).cwiseAbs().maxCoeff() / o1.maxCoeff();

        fs::create_directories(out_dir);
        sinkflow::write_json_file(
            out_dir / "beurling_report.json",
            {{"roundtrip_err", roundtrip_err},
             {"uniqueness_err", uniqueness_err},
             {"log_kernel_quantity", sinkflow::log_kernel_integrability(mu0, mu1, K)}});
        return kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sinkflow: product-measure check failed: %s\n", e.what());
        return kExitComputeFailed;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropic optimal transport via heat-kernel scaling iterations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "problem/solver config JSON");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "seed for randomized checks")->capture_default_str();

    auto* solve_cmd =
        app.add_subcommand("solve", "solve a problem; writes trace.csv, solution.json, plan.csv");
    solve_cmd->fallthrough();

    auto* stability_cmd = app.add_subcommand(
        "stability", "scan the flow-map spectral radius over step sizes");
    stability_cmd->fallthrough();
    double delta = 1e-2, h_min = 0.0, h_max = 2.5;
    int steps = 251;
    stability_cmd->add_option("--delta", delta, "test-equation coupling parameter")
        ->capture_default_str();
    stability_cmd->add_option("--h-min", h_min, "grid lower bound")->capture_default_str();
    stability_cmd->add_option("--h-max", h_max, "grid upper bound")->capture_default_str();
    stability_cmd->add_option("--steps", steps, "number of grid points")
        ->capture_default_str();

    auto* sweep_cmd =
        app.add_subcommand("sweep", "solve once per step size; writes per-h traces and a summary");
    sweep_cmd->fallthrough();
    std::vector<double> h_list;
    sweep_cmd->add_option("--h", h_list, "step sizes to run")->required()->delimiter(',');

    auto* interp_cmd = app.add_subcommand(
        "interpolate", "evaluate the interpolating density on a grid; writes bridge.csv");
    interp_cmd->fallthrough();
    std::vector<double> times, grid_lo, grid_hi;
    int grid_points = 400;
    interp_cmd->add_option("--times", times, "interior times in (0,1)")
        ->required()
        ->delimiter(',');
    interp_cmd->add_option("--grid-points", grid_points, "grid cells per axis")
        ->capture_default_str();
    interp_cmd->add_option("--grid-lo", grid_lo, "grid lower bounds per axis")
        ->delimiter(',');
    interp_cmd->add_option("--grid-hi", grid_hi, "grid upper bounds per axis")
        ->delimiter(',');

    auto* beurling_cmd = app.add_subcommand(
        "beurling-check", "product-measure round-trip and uniqueness report");
    beurling_cmd->fallthrough();
    double beurling_tol = 1e-11;
    beurling_cmd->add_option("--tol", beurling_tol, "inversion tolerance")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadConfig;
    }

    auto require_config = [&]() -> bool {
        if (!config_path.empty()) return true;
        std::fprintf(stderr, "sinkflow: --config is required for this command\n");
        return false;
    };

    if (solve_cmd->parsed()) {
        if (!require_config()) return kExitBadConfig;
        return run_solve(config_path, out_dir);
    }
    if (stability_cmd->parsed()) return run_stability(delta, h_min, h_max, steps, out_dir);
    if (sweep_cmd->parsed()) {
        if (!require_config()) return kExitBadConfig;
        return run_sweep(config_path, h_list, out_dir);
    }
    if (interp_cmd->parsed()) {
        if (!require_config()) return kExitBadConfig;
        return run_interpolate(config_path, times, grid_points, grid_lo, grid_hi, out_dir);
    }
    if (beurling_cmd->parsed()) {
        if (!require_config()) return kExitBadConfig;
        return run_beurling_check(config_path, beurling_tol, seed, out_dir);
    }
    return kExitBadConfig;
}
