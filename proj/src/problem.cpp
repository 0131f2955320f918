#include "sinkflow/problem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sinkflow {

KernelOperator ProblemInstance::kernel() const {
    return build_kernel_matrix(domain, epsilon, mu0.points, mu1.points);
}

ProblemInstance validate_problem(const DomainSpec& domain, AtomicMeasure mu0,
                                 AtomicMeasure mu1, double epsilon) {
    domain.validate();
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

    for (const AtomicMeasure* m : {&mu0, &mu1}) {
        if (m->points.rows() < 1)
            throw std::invalid_argument("marginal must contain at least one atom");
        if (m->points.cols() != domain.dim)
            throw std::invalid_argument("point dimension does not match domain");
        if (m->weights.size() != m->points.rows())
            throw std::invalid_argument("weights and points must have equal length");
        if ((m->weights.array() <= 0.0).any())
            throw std::invalid_argument("weights must be strictly positive");
    }

    const double m0 = mu0.total_mass();
    const double m1 = mu1.total_mass();
    if (std::abs(m0 - m1) > 1e-12 * m0) throw std::invalid_argument("unbalanced problem");

    ProblemInstance p;
    p.domain = domain;
    p.mu0 = std::move(mu0);
    p.mu1 = std::move(mu1);
    p.epsilon = epsilon;
    return p;
}

ProblemInstance random_instance(std::uint64_t seed, int n, const DomainSpec& domain,
                                double epsilon) {
    if (n < 1) throw std::invalid_argument("instance must contain at least one atom");
    domain.validate();

    std::mt19937_64 rng(seed);
    // 53-bit uniforms straight from the generator keep instances reproducible
    // across standard libraries.
    auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    auto draw = [&](AtomicMeasure& m) {
        m.points.resize(n, domain.dim);
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < domain.dim; ++d) {
                const double scale =
                    domain.kind == DomainKind::FlatTorus ? domain.periods[d] : 1.0;
                m.points(i, d) = scale * u01();
            }
        m.weights.resize(n);
        for (int i = 0; i < n; ++i) m.weights[i] = 0.5 + u01();  // bounded away from 0
        m.weights /= m.weights.sum();
    };

    AtomicMeasure mu0, mu1;
    draw(mu0);
    draw(mu1);
    return validate_problem(domain, std::move(mu0), std::move(mu1), epsilon);
}

}  // namespace sinkflow
