#pragma once

#include <Eigen/Core>

namespace sinkflow {

/// One sequential splitting step applied to the linear test system
///   x' = -x - (1-delta) y,   y' = -(1-delta) x - y,
/// with the x update feeding the y update:
///   [[1-h, -h(1-delta)], [-h(1-delta)(1-h), (1-h) + h^2 (1-delta)^2]].
Eigen::Matrix2d test_equation_flow_map(double h, double delta);

/// Largest eigenvalue magnitude of a 2x2 matrix via the characteristic
/// quadratic (trace/determinant), complex pairs included.
double spectral_radius(const Eigen::Matrix2d& M);

struct StabilityReport {
    double delta = 0.0;
    Eigen::VectorXd h_values;
    Eigen::VectorXd radii;
    // eigenvalue pair per grid point, |eig1| >= |eig2|, phases in (-pi, pi]
    Eigen::VectorXd eig1_abs, eig2_abs;
    Eigen::VectorXd eig1_phase, eig2_phase;
    double h_optimal = 0.0;         // grid minimum refined by golden section
    double h_unstable_onset = 0.0;  // smallest h > 0 with radius >= 1 (NaN if none)
};

/// Tabulates the flow-map spectral radius over an inclusive grid of `steps`
/// step sizes, refines the optimum to 1e-4 and locates the radius = 1
/// crossing by bisection.
StabilityReport scan_stability(double delta, double h_min, double h_max, int steps);

}  // namespace sinkflow
