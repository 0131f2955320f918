#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "sinkflow/domain.hpp"
#include "sinkflow/kernels.hpp"

namespace sinkflow {

/// Weighted point cloud: support points (one per row) with strictly positive
/// weights.
struct AtomicMeasure {
    Eigen::MatrixXd points;
    Eigen::VectorXd weights;

    Eigen::Index size() const { return weights.size(); }
    double total_mass() const { return weights.sum(); }
};

/// A discrete transport problem: two atomic marginals with equal total mass
/// on a common domain, regularized at diffusion time epsilon.
///
/// The kernel matrix pairs mu0's support with the rows and mu1's support
/// with the columns; the row scaling enforces mu0's weights and the column
/// scaling enforces mu1's weights.
struct ProblemInstance {
    DomainSpec domain;
    AtomicMeasure mu0, mu1;
    double epsilon = 0.0;

    KernelOperator kernel() const;
};

/// Checks domain validity, strict weight positivity, epsilon > 0 and mass
/// balance (relative tolerance 1e-12). Weights are never renormalized and
/// zero-weight atoms are rejected, not pruned.
ProblemInstance validate_problem(const DomainSpec& domain, AtomicMeasure mu0,
                                 AtomicMeasure mu1, double epsilon);

/// Deterministic test problem: n points per marginal drawn uniformly in the
/// unit box (the fundamental cell on a torus), weights positive and
/// normalized to total mass one.
ProblemInstance random_instance(std::uint64_t seed, int n,
                                const DomainSpec& domain, double epsilon);

}  // namespace sinkflow
