#include "sinkflow/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace sinkflow {

namespace {

void check_scaling_pair(const Scalings& s, const KernelOperator& K) {
    if (s.a.size() != K.rows() || s.b.size() != K.cols())
        throw std::invalid_argument("scaling length does not match kernel");
    if ((s.a.array() <= 0.0).any() || (s.b.array() <= 0.0).any())
        throw std::invalid_argument("scalings must be strictly positive");
}

}  // namespace

double coupling_mass(const Scalings& s, const KernelOperator& K) {
    check_scaling_pair(s, K);
    return s.a.dot(K.entries * s.b);
}

double coupling_mass_derivative(const Scalings& s, const KernelOperator& K,
                                const Eigen::VectorXd& mass0,
                                const Eigen::VectorXd& mass1) {
    check_scaling_pair(s, K);
    if (mass0.size() != K.rows() || mass1.size() != K.cols())
        throw std::invalid_argument("marginal weights do not match kernel");
    const Eigen::ArrayXd r0 = s.a.array() * (K.entries * s.b).array();
    const Eigen::ArrayXd r1 = s.b.array() * (K.entries.transpose() * s.a).array();
    return -(r0 * (r0 / mass0.array()).log()).sum() -
           (r1 * (r1 / mass1.array()).log()).sum();
}

double relative_entropy(const Eigen::VectorXd& sigma, const Eigen::VectorXd& ref) {
    if (sigma.size() != ref.size())
        throw std::invalid_argument("vector lengths must match");
    if ((ref.array() <= 0.0).any())
        throw std::invalid_argument("reference must be strictly positive");
    if ((sigma.array() < 0.0).any())
        throw std::invalid_argument("sigma must be nonnegative");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] > 0.0) acc += sigma[i] * std::log(sigma[i] / ref[i]);
    return acc;
}

double fisher_rao_norm(const Eigen::VectorXd& delta_sigma, const Eigen::VectorXd& sigma) {
    if (delta_sigma.size() != sigma.size())
        throw std::invalid_argument("vector lengths must match");
    if ((sigma.array() <= 0.0).any())
        throw std::invalid_argument("sigma must be strictly positive");
    return (delta_sigma.array().square() / sigma.array()).sum();
}

std::pair<double, double> half_flow_functionals(const Scalings& s, const KernelOperator& K,
                                                const Eigen::VectorXd& mass0,
                                                const Eigen::VectorXd& mass1) {
    check_scaling_pair(s, K);
    const Eigen::VectorXd r0 = s.a.array() * (K.entries * s.b).array();
    const Eigen::VectorXd r1 = s.b.array() * (K.entries.transpose() * s.a).array();
    return {relative_entropy(r0, mass0), relative_entropy(r1, mass1)};
}

Eigen::VectorXd t_eps_operator(const KernelOperator& K, const Eigen::VectorXd& f) {
    if (K.rows() != K.cols())
        throw std::invalid_argument("operator requires a square kernel");
    if (f.size() != K.cols())
        throw std::invalid_argument("vector length does not match kernel");

    // Row-normalized kernel so that constants are fixed points of the heat
    // application; the f_j - f_i form makes constant-shift invariance exact.
    const Eigen::VectorXd row_lse =
        log_apply_semigroup(K, Eigen::VectorXd::Zero(K.cols()));
    Eigen::VectorXd out(K.rows());
    Eigen::ArrayXd shifted(K.cols());
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
        shifted = K.log_entries.row(i).transpose().array() - row_lse[i] +
                  (f.array() - f[i]);
        const double m = shifted.maxCoeff();
        out[i] = m + std::log((shifted - m).exp().sum());
    }
    return out;
}

double grid_entropy(const Eigen::VectorXd& density, double cell_volume) {
    if (!(cell_volume > 0.0)) throw std::invalid_argument("cell volume must be positive");
    if ((density.array() <= 0.0).any())
        throw std::invalid_argument("density must be strictly positive");
    return (density.array() * density.array().log()).sum() * cell_volume;
}

double grid_fisher_information(const Eigen::VectorXd& density, double grid_spacing) {
    if (!(grid_spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
    if (density.size() < 2)
        throw std::invalid_argument("grid must contain at least two cells");
    if ((density.array() <= 0.0).any())
        throw std::invalid_argument("density must be strictly positive");

    const Eigen::Index n = density.size();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double grad;
        if (i == 0)
            grad = (density[1] - density[0]) / grid_spacing;
        else if (i == n - 1)
            grad = (density[n - 1] - density[n - 2]) / grid_spacing;
        else
            grad = (density[i + 1] - density[i - 1]) / (2.0 * grid_spacing);
        acc += grad * grad / density[i];
    }
    return 0.5 * acc * grid_spacing;
}

}  // namespace sinkflow
