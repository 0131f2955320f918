#pragma once

#include <Eigen/Core>

#include "sinkflow/domain.hpp"

namespace sinkflow {

/// Heat kernel at diffusion time epsilon: a Gaussian with variance scale
/// 4*epsilon and prefactor (4*pi*epsilon)^(-n/2) on Euclidean domains, the
/// truncated lattice-image sum of that Gaussian on the flat torus.
///
/// Note on conventions: entropic-transport codes often write the kernel as
/// exp(-c(x,y)/eps') with quadratic cost c = |x-y|^2/2. That matches this
/// kernel (up to the mass-preserving prefactor) with eps' = 2*epsilon.
double heat_kernel_eval(const DomainSpec& domain, double epsilon,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// log K_epsilon(x, y), formed without exponentiating, so it stays finite
/// where the kernel value itself would underflow.
double heat_kernel_log_eval(const DomainSpec& domain, double epsilon,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Dense kernel matrix entries(i,j) = K_epsilon(xs_i, ys_j) together with its
/// log, stored eagerly so log-domain iterations never exponentiate the kernel.
struct KernelOperator {
    DomainSpec domain;
    double epsilon = 0.0;
    Eigen::MatrixXd xs, ys;  // one point per row
    Eigen::MatrixXd entries;
    Eigen::MatrixXd log_entries;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }

    /// Kernel between the same points at the shorter diffusion time
    /// t*epsilon, t in (0, 1].
    KernelOperator at_time(double t) const;
};

KernelOperator build_kernel_matrix(const DomainSpec& domain, double epsilon,
                                   const Eigen::MatrixXd& xs,
                                   const Eigen::MatrixXd& ys);

/// K*w (or K^T*w when transpose is set). Outputs are strictly positive for
/// any nonnegative w with at least one positive entry.
Eigen::VectorXd apply_semigroup(const KernelOperator& K, const Eigen::VectorXd& w,
                                bool transpose = false);

/// log(K exp g) (or log(K^T exp g)) evaluated by per-row shifted exponential
/// sums, so arbitrarily large or small entries of g cannot overflow.
Eigen::VectorXd log_apply_semigroup(const KernelOperator& K, const Eigen::VectorXd& g,
                                    bool transpose = false);

}  // namespace sinkflow
