#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sinkflow/kernels.hpp"
#include "sinkflow/problem.hpp"

namespace sinkflow {

/// Log-domain state (f, g) = (log a, log b). States related by
/// (f + c, g - c) for a constant c describe the same coupling.
struct Potentials {
    Eigen::VectorXd f;  // on mu0's support (kernel rows)
    Eigen::VectorXd g;  // on mu1's support (kernel columns)
};

/// Positive scaling pair (a, b); (c*a, b/c) is the same coupling.
struct Scalings {
    Eigen::VectorXd a;
    Eigen::VectorXd b;

    Potentials log() const;
};

Scalings exp(const Potentials& p);

enum class SolveMode { LogDomain, ScalingDomain };
enum class SolveStatus { Converged, MaxIter, Diverged };

struct SolveConfig {
    double h = 1.0;     // splitting step size; the classical update at h = 1
    double tol = 1e-9;  // on the gauge-projected L2 residual
    int max_iter = 10000;
    SolveMode mode = SolveMode::LogDomain;
    bool record_trace = false;
};

struct TraceRecord {
    int iter = 0;
    double residual_l2 = 0.0;
    double coupling_mass = 0.0;
    double F1 = 0.0;
    double F2 = 0.0;
};

struct SolveTrace {
    std::vector<TraceRecord> records;
    SolveStatus status = SolveStatus::MaxIter;
};

struct SolveResult {
    Scalings scalings;      // gauge fixed so that mean(f) = 0
    Potentials potentials;  // same gauge
    SolveTrace trace;       // populated when record_trace is set
    SolveStatus status = SolveStatus::MaxIter;
    int iters = 0;
    double residual = 0.0;
};

/// Stationarity defect of the coupled evolution in log coordinates:
///   df = -f - log(K exp g)   + log mass0
///   dg = -g - log(K^T exp f) + log mass1
std::pair<Eigen::VectorXd, Eigen::VectorXd> ode_rhs_log(
    const Potentials& p, const KernelOperator& K,
    const Eigen::VectorXd& mass0, const Eigen::VectorXd& mass1);

/// Same vector field in the scaling coordinates:
///   da = -a * log(a * (K b) / mass0),  db = -b * log(b * (K^T a) / mass1).
std::pair<Eigen::VectorXd, Eigen::VectorXd> ode_rhs_scaling(
    const Scalings& s, const KernelOperator& K,
    const Eigen::VectorXd& mass0, const Eigen::VectorXd& mass1);

/// One sequential splitting step of length h:
///   f+ = (1-h) f - h log(K exp g)    + h log mass0,
///   g+ = (1-h) g - h log(K^T exp f+) + h log mass1,
/// with the already-updated f+ feeding the g update. h = 1 is the classical
/// alternating update; the iteration is linearly unstable for h >= 2.
Potentials splitting_step(const Potentials& p, const KernelOperator& K,
                          const Eigen::VectorXd& mass0, const Eigen::VectorXd& mass1,
                          double h);

/// The same step in scaling coordinates (entrywise powers):
///   a+ = a^(1-h) (mass0 / (K b))^h,  b+ = b^(1-h) (mass1 / (K^T a+))^h.
Scalings scaling_step(const Scalings& s, const KernelOperator& K,
                      const Eigen::VectorXd& mass0, const Eigen::VectorXd& mass1,
                      double h);

/// L2 norm of (df, dg) after projecting out the constant direction
/// (+1, ..., +1, -1, ..., -1), which only moves along the gauge orbit.
double residual(const Potentials& p, const KernelOperator& K,
                const Eigen::VectorXd& mass0, const Eigen::VectorXd& mass1);
double residual(const Scalings& s, const KernelOperator& K,
                const Eigen::VectorXd& mass0, const Eigen::VectorXd& mass1);

/// Iterates splitting_step (LogDomain) or scaling_step (ScalingDomain) until
/// the residual drops below tol or max_iter is reached. Divergence is flagged
/// when the residual exceeds 1e6 times its initial value or turns non-finite.
/// The returned state is gauge fixed (mean f = 0) only on output.
SolveResult solve(const ProblemInstance& problem, const SolveConfig& config = {});

/// Same driver on an explicit kernel and marginal weights; `init` seeds the
/// potentials (zero by default).
SolveResult solve_on_kernel(const KernelOperator& K,
                            const Eigen::VectorXd& mass0, const Eigen::VectorXd& mass1,
                            const SolveConfig& config = {},
                            const std::optional<Potentials>& init = {});

struct ReferenceTrajectory {
    std::vector<double> times;
    std::vector<Potentials> states;
};

/// Integrates the coupled (non-split) system with the classical fourth-order
/// Runge-Kutta method from the zero state; reference for splitting
/// consistency checks. The step actually used divides s_end exactly.
ReferenceTrajectory integrate_reference(const ProblemInstance& problem,
                                        double s_end, double ds);
ReferenceTrajectory integrate_reference(const KernelOperator& K,
                                        const Eigen::VectorXd& mass0,
                                        const Eigen::VectorXd& mass1,
                                        const Potentials& start,
                                        double s_end, double ds);

/// Coupling matrix P(i,j) = a_i K(i,j) b_j. Gauge invariant; at a converged
/// state its row sums are mass0 and its column sums are mass1.
Eigen::MatrixXd entropic_plan(const Scalings& s, const KernelOperator& K);

}  // namespace sinkflow
