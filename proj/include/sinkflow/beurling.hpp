#pragma once

#include <optional>
#include <utility>

#include <Eigen/Core>

#include "sinkflow/kernels.hpp"
#include "sinkflow/solver.hpp"

namespace sinkflow {

/// Rank-one nonnegative measure alpha (x) beta on the product of the two
/// supports. The components are only determined up to (c*alpha, beta/c);
/// the canonical representative balances the component masses, and all
/// comparisons should go through the gauge-free outer product.
struct ProductMeasure {
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;

    ProductMeasure canonical() const;
    Eigen::MatrixXd outer() const { return alpha * beta.transpose(); }
};

/// A general nonnegative measure on the product of the two supports.
struct GeneralMeasure {
    Eigen::MatrixXd nu;  // entrywise >= 0, not identically zero
};

/// Kernel-weighted marginals nu0_i = sum_j K(i,j) nu(i,j) and
/// nu1_j = sum_i K(i,j) nu(i,j). Both always carry the same total mass.
std::pair<Eigen::VectorXd, Eigen::VectorXd> generalized_marginals(
    const GeneralMeasure& nu, const KernelOperator& K);

/// The quadratic map sending a product measure to the product of the
/// kernel-weighted marginals of its outer product:
/// (alpha, beta) -> (alpha * (K beta), beta * (K^T alpha)), canonicalized.
ProductMeasure t_epsilon_map(const ProductMeasure& pm, const KernelOperator& K);

/// Solves alpha * (K beta) = mu0, beta * (K^T alpha) = mu1 (as product
/// measure classes) with the scaling iteration; unique as an equivalence
/// class for a strictly positive kernel. `init` seeds the solver, which
/// makes multi-start uniqueness checks possible. Throws if the solver does
/// not converge to `tol`.
ProductMeasure invert_t_epsilon(const Eigen::VectorXd& mu0, const Eigen::VectorXd& mu1,
                                const KernelOperator& K, double tol,
                                const std::optional<Potentials>& init = {});

/// The double sum sum_ij mu0_i mu1_j log K(i,j); finite kernels make this
/// always finite, so it is reported for inspection rather than tested.
double log_kernel_integrability(const Eigen::VectorXd& mu0, const Eigen::VectorXd& mu1,
                                const KernelOperator& K);

}  // namespace sinkflow
