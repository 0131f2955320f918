#include "sinkflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace sinkflow {

using nlohmann::json;

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIter: return "MaxIter";
        case SolveStatus::Diverged: return "Diverged";
    }
    return "Unknown";
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
    Eigen::VectorXd v(j.size());
    Eigen::Index i = 0;
    for (const auto& x : j) {
        if (!x.is_number()) throw std::invalid_argument(std::string(what) + " must be numeric");
        v[i++] = x.get<double>();
    }
    return v;
}

json measure_to_json(const AtomicMeasure& m) {
    json points = json::array();
    for (Eigen::Index i = 0; i < m.points.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index d = 0; d < m.points.cols(); ++d) row.push_back(m.points(i, d));
        points.push_back(std::move(row));
    }
    return {{"points", std::move(points)}, {"weights", to_std(m.weights)}};
}

AtomicMeasure measure_from_json(const json& j) {
    if (!j.is_object() || !j.contains("points") || !j.contains("weights"))
        throw std::invalid_argument("marginal must provide points and weights");
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.empty())
        throw std::invalid_argument("points must be a non-empty array");

    AtomicMeasure m;
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    Eigen::Index dim = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = pts[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.empty())
            throw std::invalid_argument("each point must be an array of coordinates");
        if (dim < 0) {
            dim = static_cast<Eigen::Index>(row.size());
            m.points.resize(n, dim);
        }
        if (static_cast<Eigen::Index>(row.size()) != dim)
            throw std::invalid_argument("points must share one dimension");
        for (Eigen::Index d = 0; d < dim; ++d)
            m.points(i, d) = row[static_cast<std::size_t>(d)].get<double>();
    }
    m.weights = vector_from_json(j.at("weights"), "weights");
    return m;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

json domain_to_json(const DomainSpec& domain) {
    json j;
    j["kind"] = domain.kind == DomainKind::Euclidean ? "Euclidean" : "FlatTorus";
    j["dim"] = domain.dim;
    if (domain.kind == DomainKind::FlatTorus) {
        j["periods"] = to_std(domain.periods);
        j["image_count"] = domain.image_count;
    }
    return j;
}

DomainSpec domain_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("dim"))
        throw std::invalid_argument("domain must provide kind and dim");
    const std::string kind = j.at("kind").get<std::string>();
    const int dim = j.at("dim").get<int>();
    if (kind == "Euclidean") return DomainSpec::euclidean(dim);
    if (kind == "FlatTorus") {
        Eigen::VectorXd periods = vector_from_json(j.at("periods"), "periods");
        const int image_count = j.value("image_count", 5);
        DomainSpec d = DomainSpec::flat_torus(std::move(periods), image_count);
        if (d.dim != dim)
            throw std::invalid_argument("domain dim does not match periods length");
        return d;
    }
    throw std::invalid_argument("unknown domain kind: " + kind);
}

json problem_to_json(const ProblemInstance& problem) {
    return {{"domain", domain_to_json(problem.domain)},
            {"epsilon", problem.epsilon},
            {"mu0", measure_to_json(problem.mu0)},
            {"mu1", measure_to_json(problem.mu1)}};
}

ProblemInstance problem_from_json(const json& j) {
    if (!j.is_object() || !j.contains("domain") || !j.contains("epsilon") ||
        !j.contains("mu0") || !j.contains("mu1"))
        throw std::invalid_argument("config must provide domain, epsilon, mu0 and mu1");
    return validate_problem(domain_from_json(j.at("domain")),
                            measure_from_json(j.at("mu0")),
                            measure_from_json(j.at("mu1")),
                            j.at("epsilon").get<double>());
}

SolveConfig solve_config_from_json(const json& j, SolveConfig defaults) {
    SolveConfig cfg = defaults;
    if (!j.contains("solver")) return cfg;
    const json& s = j.at("solver");
    if (!s.is_object()) throw std::invalid_argument("solver config must be an object");
    cfg.h = s.value("h", cfg.h);
    cfg.tol = s.value("tol", cfg.tol);
    cfg.max_iter = s.value("max_iter", cfg.max_iter);
    if (s.contains("mode")) {
        const std::string mode = s.at("mode").get<std::string>();
        if (mode == "log")
            cfg.mode = SolveMode::LogDomain;
        else if (mode == "scaling")
            cfg.mode = SolveMode::ScalingDomain;
        else
            throw std::invalid_argument("solver mode must be \"log\" or \"scaling\"");
    }
    return cfg;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_trace_csv(const std::filesystem::path& path, const SolveTrace& trace) {
    auto out = open_out(path);
    out << "iter,residual_l2,coupling_mass,F1,F2\n";
    for (const TraceRecord& r : trace.records)
        out << r.iter << ',' << format_float(r.residual_l2) << ','
            << format_float(r.coupling_mass) << ',' << format_float(r.F1) << ','
            << format_float(r.F2) << '\n';
}

void write_stability_csv(const std::filesystem::path& path, const StabilityReport& report) {
    auto out = open_out(path);
    out << "h,radius,eig1_abs,eig2_abs\n";
    for (Eigen::Index i = 0; i < report.h_values.size(); ++i)
        out << format_float(report.h_values[i]) << ',' << format_float(report.radii[i])
            << ',' << format_float(report.eig1_abs[i]) << ','
            << format_float(report.eig2_abs[i]) << '\n';
}

void write_plan_csv(const std::filesystem::path& path, const Eigen::MatrixXd& plan) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < plan.rows(); ++i) {
        for (Eigen::Index j = 0; j < plan.cols(); ++j) {
            if (j) out << ',';
            out << format_float(plan(i, j));
        }
        out << '\n';
    }
}

void write_bridge_csv(const std::filesystem::path& path, const BridgeDensity& bridge) {
    auto out = open_out(path);
    const Eigen::MatrixXd pts = bridge.grid.points();
    out << (bridge.grid.dim() == 1 ? "t,x,rho" : "t,x,y,rho") << '\n';
    for (std::size_t k = 0; k < bridge.times.size(); ++k)
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            out << format_float(bridge.times[k]);
            for (Eigen::Index d = 0; d < pts.cols(); ++d)
                out << ',' << format_float(pts(i, d));
            out << ',' << format_float(bridge.values(static_cast<Eigen::Index>(k), i))
                << '\n';
        }
}

json solution_to_json(const SolveResult& result) {
    return {{"f", to_std(result.potentials.f)},
            {"g", to_std(result.potentials.g)},
            {"a", to_std(result.scalings.a)},
            {"b", to_std(result.scalings.b)},
            {"status", status_name(result.status)},
            {"iters", result.iters},
            {"residual", result.residual}};
}

}  // namespace sinkflow
