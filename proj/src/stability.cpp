#include "sinkflow/stability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sinkflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct EigenPair {
    double abs1, phase1;  // |eig1| >= |eig2|
    double abs2, phase2;
};

EigenPair characteristic_eigenvalues(const Eigen::Matrix2d& M) {
    const double tr = M(0, 0) + M(1, 1);
    const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const double disc = 0.25 * tr * tr - det;
    EigenPair e{};
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        double l1 = 0.5 * tr + root;
        double l2 = 0.5 * tr - root;
        if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
        e.abs1 = std::abs(l1);
        e.phase1 = l1 < 0.0 ? kPi : 0.0;
        e.abs2 = std::abs(l2);
        e.phase2 = l2 < 0.0 ? kPi : 0.0;
    } else {
        const double re = 0.5 * tr;
        const double im = std::sqrt(-disc);
        e.abs1 = e.abs2 = std::hypot(re, im);
        e.phase1 = std::atan2(im, re);
        e.phase2 = std::atan2(-im, re);
    }
    return e;
}

}  // namespace

Eigen::Matrix2d test_equation_flow_map(double h, double delta) {
    if (!(h >= 0.0)) throw std::invalid_argument("step size must be nonnegative");
    const double c = 1.0 - delta;
    Eigen::Matrix2d M;
    M << 1.0 - h, -h * c,                                    //
        -h * c * (1.0 - h), (1.0 - h) + h * h * c * c;       //
    return M;
}

double spectral_radius(const Eigen::Matrix2d& M) {
    return characteristic_eigenvalues(M).abs1;
}

StabilityReport scan_stability(double delta, double h_min, double h_max, int steps) {
    if (!(h_min >= 0.0) || !(h_max > h_min))
        throw std::invalid_argument("invalid step-size range");
    if (steps < 2) throw std::invalid_argument("grid must contain at least two points");

    StabilityReport report;
    report.delta = delta;
    report.h_values = Eigen::VectorXd::LinSpaced(steps, h_min, h_max);
    report.radii.resize(steps);
    report.eig1_abs.resize(steps);
    report.eig2_abs.resize(steps);
    report.eig1_phase.resize(steps);
    report.eig2_phase.resize(steps);

    auto radius_at = [delta](double h) {
        return spectral_radius(test_equation_flow_map(h, delta));
    };

    int arg_min = 0;
    for (int i = 0; i < steps; ++i) {
        const auto e = characteristic_eigenvalues(
            test_equation_flow_map(report.h_values[i], delta));
        report.eig1_abs[i] = e.abs1;
        report.eig2_abs[i] = e.abs2;
        report.eig1_phase[i] = e.phase1;
        report.eig2_phase[i] = e.phase2;
        report.radii[i] = e.abs1;
        if (e.abs1 < report.radii[arg_min]) arg_min = i;
    }

    // Golden-section refinement inside the bracket around the grid minimum.
    {
        double a = report.h_values[std::max(arg_min - 1, 0)];
        double b = report.h_values[std::min(arg_min + 1, steps - 1)];
        const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = radius_at(c);
        double fd = radius_at(d);
        while (b - a > 1e-4) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = radius_at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = radius_at(d);
            }
        }
        report.h_optimal = 0.5 * (a + b);
    }

    // Instability onset: first grid h > 0 with radius >= 1, refined by
    // bisection against the preceding (stable) grid point. h = 0 always has
    // radius 1 and does not count.
    report.h_unstable_onset = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < steps; ++i) {
        if (!(report.h_values[i] > 0.0) || report.radii[i] < 1.0) continue;
        if (i == 0 || !(report.radii[i - 1] < 1.0)) {
            report.h_unstable_onset = report.h_values[i];
        } else {
            double lo = report.h_values[i - 1];
            double hi = report.h_values[i];
            while (hi - lo > 1e-9) {
                const double mid = 0.5 * (lo + hi);
                (radius_at(mid) >= 1.0 ? hi : lo) = mid;
            }
            report.h_unstable_onset = hi;
        }
        break;
    }
    return report;
}

}  // namespace sinkflow
