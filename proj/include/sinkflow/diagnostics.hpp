#pragma once

#include <utility>

#include <Eigen/Core>

#include "sinkflow/kernels.hpp"
#include "sinkflow/solver.hpp"

namespace sinkflow {

/// Total coupling mass C = sum_i a_i (K b)_i.
double coupling_mass(const Scalings& s, const KernelOperator& K);

/// Rate of change of C along the coupled evolution:
///   dC/ds = - sum_i r0_i log(r0_i / mass0_i) - sum_j r1_j log(r1_j / mass1_j)
/// with r0 = a*(K b) and r1 = b*(K^T a). Zero exactly at a fixed point.
double coupling_mass_derivative(const Scalings& s, const KernelOperator& K,
                                const Eigen::VectorXd& mass0,
                                const Eigen::VectorXd& mass1);

/// sum_i sigma_i log(sigma_i / ref_i), with the 0 log 0 = 0 convention.
/// Nonnegative whenever sigma and ref carry equal total mass.
double relative_entropy(const Eigen::VectorXd& sigma, const Eigen::VectorXd& ref);

/// Squared Fisher-Rao length of the tangent delta_sigma at sigma:
/// sum_i delta_sigma_i^2 / sigma_i.
double fisher_rao_norm(const Eigen::VectorXd& delta_sigma, const Eigen::VectorXd& sigma);

/// The two half-step descent functionals
///   F1 = H_mass0(a * (K b)),  F2 = H_mass1(b * (K^T a)).
/// Each half of the iteration is a gradient flow for its functional in the
/// Fisher-Rao geometry, so F1 decreases along the a-only flow (b frozen)
/// and F2 along the b-only flow.
std::pair<double, double> half_flow_functionals(const Scalings& s, const KernelOperator& K,
                                                const Eigen::VectorXd& mass0,
                                                const Eigen::VectorXd& mass1);

/// The almost-linear remainder T(f) = log(exp(-f) Kn exp(f)) where Kn is K
/// with rows normalized to sum one (so that T(0) = 0 and T is invariant
/// under constant shifts of f, exactly). Requires a square kernel.
Eigen::VectorXd t_eps_operator(const KernelOperator& K, const Eigen::VectorXd& f);

/// Entropy sum_i rho_i log(rho_i) * cell_volume on a uniform grid.
double grid_entropy(const Eigen::VectorXd& density, double cell_volume);

/// Fisher information 0.5 * sum_i grad_i^2 / rho_i * spacing on a uniform
/// 1-D grid, with centered differences inside and one-sided at the ends.
double grid_fisher_information(const Eigen::VectorXd& density, double grid_spacing);

}  // namespace sinkflow
