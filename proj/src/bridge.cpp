#include "sinkflow/bridge.hpp"

#include <cmath>
#include <stdexcept>

namespace sinkflow {

void GridSpec::validate() const {
    const int d = dim();
    if (d < 1 || d > 2) throw std::invalid_argument("grid must have one or two axes");
    if (lo.size() != d || hi.size() != d)
        throw std::invalid_argument("grid bounds must have one entry per axis");
    for (int a = 0; a < d; ++a) {
        if (!(hi[a] > lo[a])) throw std::invalid_argument("grid bounds must be ordered");
        if (shape[a] < 1) throw std::invalid_argument("grid must contain at least one cell");
    }
}

Eigen::Index GridSpec::size() const {
    Eigen::Index n = 1;
    for (int s : shape) n *= s;
    return n;
}

double GridSpec::spacing(int axis) const {
    return (hi[axis] - lo[axis]) / shape[axis];
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= spacing(a);
    return v;
}

Eigen::MatrixXd GridSpec::points() const {
    validate();
    const int d = dim();
    Eigen::MatrixXd pts(size(), d);
    if (d == 1) {
        const double sp = spacing(0);
        for (int i = 0; i < shape[0]; ++i) pts(i, 0) = lo[0] + (i + 0.5) * sp;
    } else {
        const double sp0 = spacing(0), sp1 = spacing(1);
        Eigen::Index row = 0;
        for (int i = 0; i < shape[0]; ++i)
            for (int j = 0; j < shape[1]; ++j, ++row) {
                pts(row, 0) = lo[0] + (i + 0.5) * sp0;
                pts(row, 1) = lo[1] + (j + 0.5) * sp1;
            }
    }
    return pts;
}

GridSpec default_grid(const ProblemInstance& problem, int points_per_axis) {
    if (points_per_axis < 1)
        throw std::invalid_argument("grid must contain at least one cell");
    const int d = problem.domain.dim;
    if (d > 2) throw std::invalid_argument("grid must have one or two axes");

    GridSpec grid;
    grid.lo.resize(d);
    grid.hi.resize(d);
    grid.shape.assign(d, points_per_axis);
    if (problem.domain.kind == DomainKind::FlatTorus) {
        grid.lo.setZero();
        grid.hi = problem.domain.periods;
    } else {
        const double pad = 6.0 * std::sqrt(2.0 * problem.epsilon);
        for (int a = 0; a < d; ++a) {
            const double lo = std::min(problem.mu0.points.col(a).minCoeff(),
                                       problem.mu1.points.col(a).minCoeff());
            const double hi = std::max(problem.mu0.points.col(a).maxCoeff(),
                                       problem.mu1.points.col(a).maxCoeff());
            grid.lo[a] = lo - pad;
            grid.hi[a] = hi + pad;
        }
    }
    grid.validate();
    return grid;
}

Eigen::VectorXd evolve_scaling(const Eigen::VectorXd& weights,
                               const Eigen::MatrixXd& source_points, double t_eps,
                               const GridSpec& grid, const DomainSpec& domain) {
    if (t_eps == 0.0)
        throw std::invalid_argument("atomic scaling not pointwise evaluable");
    if (!(t_eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (weights.size() != source_points.rows())
        throw std::invalid_argument("weights and points must have equal length");
    grid.validate();
    if (grid.dim() != domain.dim)
        throw std::invalid_argument("grid dimension does not match domain");

    const KernelOperator K = build_kernel_matrix(domain, t_eps, grid.points(),
                                                 source_points);
    return apply_semigroup(K, weights);
}

BridgeDensity bridge_density(const Scalings& s, const ProblemInstance& problem,
                             const std::vector<double>& times, const GridSpec& grid) {
    if (s.a.size() != problem.mu0.size() || s.b.size() != problem.mu1.size())
        throw std::invalid_argument("scaling length does not match problem");
    for (double t : times)
        if (!(t > 0.0 && t < 1.0))
            throw std::invalid_argument("bridge times must lie strictly inside (0, 1)");
    grid.validate();

    BridgeDensity bridge;
    bridge.times = times;
    bridge.grid = grid;
    bridge.epsilon = problem.epsilon;
    bridge.values.resize(static_cast<Eigen::Index>(times.size()), grid.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const Eigen::VectorXd u = evolve_scaling(s.a, problem.mu0.points,
                                                 t * problem.epsilon, grid,
                                                 problem.domain);
        const Eigen::VectorXd v = evolve_scaling(s.b, problem.mu1.points,
                                                 (1.0 - t) * problem.epsilon, grid,
                                                 problem.domain);
        bridge.values.row(static_cast<Eigen::Index>(k)) =
            (u.array() * v.array()).matrix().transpose();
    }
    return bridge;
}

}  // namespace sinkflow
