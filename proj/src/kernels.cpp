#include "sinkflow/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sinkflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

void check_point(const DomainSpec& domain, const Eigen::VectorXd& p) {
    if (p.size() != domain.dim)
        throw std::invalid_argument("point dimension does not match domain");
}

// log of the one-axis image sum  sum_k exp(-(delta - k*L)^2 / (4 eps)) over
// |k| <= image_count. Terms decay like exp(-(kL)^2 / (4 eps)) once |kL| is
// past |delta|, so the truncation tail is negligible for eps well below L^2.
double torus_axis_log_sum(double delta, double period, double epsilon, int image_count) {
    const double inv4e = 1.0 / (4.0 * epsilon);
    double m = -std::numeric_limits<double>::infinity();
    for (int k = -image_count; k <= image_count; ++k) {
        const double d = delta - k * period;
        m = std::max(m, -d * d * inv4e);
    }
    double sum = 0.0;
    for (int k = -image_count; k <= image_count; ++k) {
        const double d = delta - k * period;
        sum += std::exp(-d * d * inv4e - m);
    }
    return m + std::log(sum);
}

}  // namespace

DomainSpec DomainSpec::euclidean(int dim) {
    DomainSpec d;
    d.kind = DomainKind::Euclidean;
    d.dim = dim;
    d.validate();
    return d;
}

DomainSpec DomainSpec::flat_torus(Eigen::VectorXd periods, int image_count) {
    DomainSpec d;
    d.kind = DomainKind::FlatTorus;
    d.dim = static_cast<int>(periods.size());
    d.periods = std::move(periods);
    d.image_count = image_count;
    d.validate();
    return d;
}

void DomainSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("domain dimension must be at least 1");
    if (kind == DomainKind::FlatTorus) {
        if (periods.size() != dim)
            throw std::invalid_argument("torus periods must have one entry per axis");
        if ((periods.array() <= 0.0).any())
            throw std::invalid_argument("torus periods must be positive");
        if (image_count < 1)
            throw std::invalid_argument("torus image_count must be at least 1");
    }
}

double heat_kernel_log_eval(const DomainSpec& domain, double epsilon,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    check_epsilon(epsilon);
    domain.validate();
    check_point(domain, x);
    check_point(domain, y);

    const double log_prefactor = -0.5 * domain.dim * std::log(4.0 * kPi * epsilon);
    if (domain.kind == DomainKind::Euclidean)
        return log_prefactor - (x - y).squaredNorm() / (4.0 * epsilon);

    // The Gaussian factorizes over axes, so the lattice-image sum does too.
    double log_sum = 0.0;
    for (int d = 0; d < domain.dim; ++d)
        log_sum += torus_axis_log_sum(x[d] - y[d], domain.periods[d], epsilon,
                                      domain.image_count);
    return log_prefactor + log_sum;
}

double heat_kernel_eval(const DomainSpec& domain, double epsilon,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return std::exp(heat_kernel_log_eval(domain, epsilon, x, y));
}

KernelOperator KernelOperator::at_time(double t) const {
    if (!(t > 0.0 && t <= 1.0))
        throw std::invalid_argument("time fraction must lie in (0, 1]");
    return build_kernel_matrix(domain, t * epsilon, xs, ys);
}

KernelOperator build_kernel_matrix(const DomainSpec& domain, double epsilon,
                                   const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys) {
    check_epsilon(epsilon);
    domain.validate();
    if (xs.rows() == 0 || ys.rows() == 0)
        throw std::invalid_argument("point list must not be empty");
    if (xs.cols() != domain.dim || ys.cols() != domain.dim)
        throw std::invalid_argument("point dimension does not match domain");

    KernelOperator K;
    K.domain = domain;
    K.epsilon = epsilon;
    K.xs = xs;
    K.ys = ys;
    K.log_entries.resize(xs.rows(), ys.rows());
    for (Eigen::Index i = 0; i < xs.rows(); ++i)
        for (Eigen::Index j = 0; j < ys.rows(); ++j)
            K.log_entries(i, j) = heat_kernel_log_eval(domain, epsilon,
                                                       xs.row(i), ys.row(j));
    K.entries = K.log_entries.array().exp();
    return K;
}

Eigen::VectorXd apply_semigroup(const KernelOperator& K, const Eigen::VectorXd& w,
                                bool transpose) {
    const Eigen::Index n_in = transpose ? K.rows() : K.cols();
    if (w.size() != n_in)
        throw std::invalid_argument("vector length does not match kernel");
    if ((w.array() < 0.0).any())
        throw std::invalid_argument("weights must be nonnegative");
    if (w.maxCoeff() <= 0.0) throw std::invalid_argument("measure has zero mass");
    return transpose ? Eigen::VectorXd(K.entries.transpose() * w)
                     : Eigen::VectorXd(K.entries * w);
}

Eigen::VectorXd log_apply_semigroup(const KernelOperator& K, const Eigen::VectorXd& g,
                                    bool transpose) {
    const Eigen::Index n_out = transpose ? K.cols() : K.rows();
    const Eigen::Index n_in = transpose ? K.rows() : K.cols();
    if (g.size() != n_in)
        throw std::invalid_argument("vector length does not match kernel");

    Eigen::VectorXd out(n_out);
    Eigen::ArrayXd shifted(n_in);
    for (Eigen::Index i = 0; i < n_out; ++i) {
        if (transpose)
            shifted = K.log_entries.col(i).array() + g.array();
        else
            shifted = K.log_entries.row(i).transpose().array() + g.array();
        const double m = shifted.maxCoeff();
        if (!std::isfinite(m)) {
            out[i] = m;  // all terms vanish (or an input was already non-finite)
            continue;
        }
        out[i] = m + std::log((shifted - m).exp().sum());
    }
    return out;
}

}  // namespace sinkflow
