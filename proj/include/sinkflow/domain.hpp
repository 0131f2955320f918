#pragma once

#include <Eigen/Core>

namespace sinkflow {

enum class DomainKind { Euclidean, FlatTorus };

/// Where a transport problem lives. FlatTorus wraps each coordinate with its
/// own period; kernel evaluation then sums over lattice images, truncated at
/// image_count shifts per axis.
struct DomainSpec {
    DomainKind kind = DomainKind::Euclidean;
    int dim = 1;
    Eigen::VectorXd periods;  // FlatTorus only, one entry per axis
    int image_count = 5;      // FlatTorus lattice truncation radius

    static DomainSpec euclidean(int dim);
    static DomainSpec flat_torus(Eigen::VectorXd periods, int image_count = 5);

    /// Throws std::invalid_argument on an inconsistent spec.
    void validate() const;
};

}  // namespace sinkflow
