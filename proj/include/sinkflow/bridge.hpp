#pragma once

#include <vector>

#include <Eigen/Core>

#include "sinkflow/domain.hpp"
#include "sinkflow/problem.hpp"
#include "sinkflow/solver.hpp"

namespace sinkflow {

/// Uniform midpoint-rule evaluation grid with one or two axes; nodes sit at
/// cell centers, so sums of values times cell_volume() are midpoint
/// quadratures.
struct GridSpec {
    Eigen::VectorXd lo, hi;
    std::vector<int> shape;  // cells per axis

    int dim() const { return static_cast<int>(shape.size()); }
    Eigen::Index size() const;
    double spacing(int axis) const;
    double cell_volume() const;
    Eigen::MatrixXd points() const;  // row-major over axes, one node per row

    void validate() const;
};

/// Grid covering both supports. Euclidean domains get the bounding box
/// padded by 6*sqrt(2*epsilon), which keeps the truncated Gaussian mass
/// below ~1e-8; torus domains get the fundamental cell.
GridSpec default_grid(const ProblemInstance& problem, int points_per_axis);

/// Heat evolution of an atomic scaling, evaluated on the grid:
/// out(x) = sum_i weights_i K_{t_eps}(x, source_i). Requires t_eps > 0; the
/// atoms themselves have no pointwise values.
Eigen::VectorXd evolve_scaling(const Eigen::VectorXd& weights,
                               const Eigen::MatrixXd& source_points,
                               double t_eps, const GridSpec& grid,
                               const DomainSpec& domain);

/// Interpolating densities rho_t on a grid for a set of interior times.
struct BridgeDensity {
    std::vector<double> times;  // strictly inside (0, 1)
    GridSpec grid;
    double epsilon = 0.0;
    Eigen::MatrixXd values;  // one row per time, one column per grid node
};

/// rho_t(x) = (sum_i a_i K_{t eps}(x, x_i)) * (sum_j b_j K_{(1-t) eps}(x, y_j)).
/// Strictly positive everywhere for t in (0,1); its quadrature equals the
/// coupling mass C for every t. Endpoints t in {0,1} are atomic and rejected.
BridgeDensity bridge_density(const Scalings& s, const ProblemInstance& problem,
                             const std::vector<double>& times, const GridSpec& grid);

}  // namespace sinkflow
