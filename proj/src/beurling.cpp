#include "sinkflow/beurling.hpp"

#include <cmath>
#include <stdexcept>

#include "sinkflow/io.hpp"

namespace sinkflow {

namespace {

void check_positive(const Eigen::VectorXd& v, const char* what) {
    if (v.size() == 0 || (v.array() <= 0.0).any())
        throw std::invalid_argument(std::string(what) + " must be strictly positive");
}

}  // namespace

ProductMeasure ProductMeasure::canonical() const {
    check_positive(alpha, "product-measure components");
    check_positive(beta, "product-measure components");
    const double c = std::sqrt(beta.sum() / alpha.sum());
    return {alpha * c, beta / c};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> generalized_marginals(
    const GeneralMeasure& m, const KernelOperator& K) {
    if (m.nu.rows() != K.rows() || m.nu.cols() != K.cols())
        throw std::invalid_argument("measure shape does not match kernel");
    if ((m.nu.array() < 0.0).any())
        throw std::invalid_argument("measure must be nonnegative");
    if (!(m.nu.array() > 0.0).any())
        throw std::invalid_argument("measure must not be identically zero");
    const Eigen::ArrayXXd weighted = K.entries.array() * m.nu.array();
    return {weighted.rowwise().sum(), weighted.colwise().sum().transpose()};
}

ProductMeasure t_epsilon_map(const ProductMeasure& pm, const KernelOperator& K) {
    check_positive(pm.alpha, "product-measure components");
    check_positive(pm.beta, "product-measure components");
    if (pm.alpha.size() != K.rows() || pm.beta.size() != K.cols())
        throw std::invalid_argument("component length does not match kernel");
    ProductMeasure image;
    image.alpha = pm.alpha.array() * apply_semigroup(K, pm.beta).array();
    image.beta = pm.beta.array() * apply_semigroup(K, pm.alpha, true).array();
    return image.canonical();
}

ProductMeasure invert_t_epsilon(const Eigen::VectorXd& mu0, const Eigen::VectorXd& mu1,
                                const KernelOperator& K, double tol,
                                const std::optional<Potentials>& init) {
    check_positive(mu0, "marginal components");
    check_positive(mu1, "marginal components");
    if (mu0.size() != K.rows() || mu1.size() != K.cols())
        throw std::invalid_argument("component length does not match kernel");

    // Only the product class of (mu0, mu1) matters; balance the masses so
    // the scaling iteration sees an exactly solvable pair.
    const double c = std::sqrt(mu1.sum() / mu0.sum());

    SolveConfig config;
    config.h = 1.0;
    config.tol = tol;
    config.max_iter = 200000;
    config.mode = SolveMode::LogDomain;
    const SolveResult result = solve_on_kernel(K, mu0 * c, mu1 / c, config, init);
    if (result.status != SolveStatus::Converged)
        throw std::runtime_error("inverse map did not converge (" +
                                 status_name(result.status) + ")");
    return ProductMeasure{result.scalings.a, result.scalings.b}.canonical();
}

double log_kernel_integrability(const Eigen::VectorXd& mu0, const Eigen::VectorXd& mu1,
                                const KernelOperator& K) {
    if (mu0.size() != K.rows() || mu1.size() != K.cols())
        throw std::invalid_argument("component length does not match kernel");
    return mu0.dot(K.log_entries * mu1);
}

}  // namespace sinkflow
