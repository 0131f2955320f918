#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sinkflow/bridge.hpp"
#include "sinkflow/problem.hpp"
#include "sinkflow/solver.hpp"
#include "sinkflow/stability.hpp"

namespace sinkflow {

/// Fixed 17-significant-digit formatting; all CSV output goes through this
/// so identical runs produce byte-identical files.
std::string format_float(double v);

std::string status_name(SolveStatus status);

nlohmann::json domain_to_json(const DomainSpec& domain);
DomainSpec domain_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const ProblemInstance& problem);
ProblemInstance problem_from_json(const nlohmann::json& j);

/// Reads the optional "solver" object {"h":..., "tol":..., "max_iter":...,
/// "mode": "log"|"scaling"}; absent fields keep the passed defaults.
SolveConfig solve_config_from_json(const nlohmann::json& j, SolveConfig defaults = {});

nlohmann::json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// Columns: iter,residual_l2,coupling_mass,F1,F2.
void write_trace_csv(const std::filesystem::path& path, const SolveTrace& trace);

/// Columns: h,radius,eig1_abs,eig2_abs.
void write_stability_csv(const std::filesystem::path& path, const StabilityReport& report);

/// Dense matrix, one CSV row per plan row, no header.
void write_plan_csv(const std::filesystem::path& path, const Eigen::MatrixXd& plan);

/// Columns: t,x[,y],rho — one row per (time, grid node).
void write_bridge_csv(const std::filesystem::path& path, const BridgeDensity& bridge);

nlohmann::json solution_to_json(const SolveResult& result);

}  // namespace sinkflow
