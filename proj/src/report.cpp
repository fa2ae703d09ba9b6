#include "gcomp/report.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "gcomp/error.hpp"

namespace gcomp {

Json to_json(const MCEstimate& e) {
    Json j = Json::object();
    j["mean"] = e.mean;
    j["std_error"] = e.std_error;
    j["samples"] = e.samples;
    j["confidence"] = e.confidence;
    j["ci_lower"] = e.lower();
    j["ci_upper"] = e.upper();
    return j;
}

Json to_json(const Quantity& q) {
    Json j = Json::object();
    j["mean"] = q.mean;
    j["std_error"] = q.std_error;
    j["samples"] = q.samples;
    j["exact"] = q.exact;
    return j;
}

Json to_json(const InequalityReport& r) {
    Json j = Json::object();
    j["name"] = r.name;
    j["lhs"] = to_json(r.lhs);
    j["rhs"] = to_json(r.rhs);
    j["margin"] = r.margin;
    j["slack_allowance"] = r.slack_allowance;
    j["verdict"] = to_string(r.verdict);
    j["note"] = r.note;
    return j;
}

Json to_json(const SlepianConditionReport& r) {
    Json j = Json::object();
    j["satisfied"] = r.satisfied;
    j["dist_equal_max_gap"] = r.dist_equal_max_gap;
    j["worst_pair"] = Json::array({r.worst_pair.first, r.worst_pair.second});
    j["worst_excess"] = r.worst_excess;
    return j;
}

Json to_json(const SectionCertificate& c) {
    Json j = Json::object();
    j["verified"] = c.verified;
    j["ambient_dim"] = c.ambient_dim;
    j["section_dim"] = c.section_dim;
    j["epsilon"] = c.epsilon;
    j["mu"] = to_json(c.mu);
    j["lipschitz"] = c.lipschitz;
    j["failure_bound"] = c.failure_bound;
    j["worst_deviation"] = c.worst_deviation;
    j["threshold"] = c.threshold;
    j["tier"] = c.tier;
    j["attempts_used"] = c.attempts_used;
    j["attempt_index"] = c.attempt_index;
    j["stream"] = Json{{"master_seed", c.stream.master_seed},
                       {"stream_id", c.stream.stream_id},
                       {"counter", c.stream.counter}};
    return j;
}

std::string matrix_csv(const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += format_number(m(i, j));
        }
        out += '\n';
    }
    return out;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonFiniteSample:
        case ErrorCode::DimensionTooLargeForExact:
        case ErrorCode::LipschitzViolation:
        case ErrorCode::GradientUnavailable:
            return kExitNumericError;
        default:
            return kExitConfigError;
    }
}

namespace {

std::vector<Vector> points_of(const Json& s) { return decode_points(s["points"], "points"); }

std::vector<LipschitzFn> functions_of(const Json& s, int dim) {
    std::vector<LipschitzFn> out;
    for (std::size_t i = 0; i < s["functions"].size(); ++i) {
        out.push_back(decode_function(s["functions"][i], dim, "functions[" + std::to_string(i) + "]"));
    }
    return out;
}

Json reports_json(const std::vector<InequalityReport>& reports) {
    Json arr = Json::array();
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
    }
    return arr;
}

struct Outcome {
    Json results = Json::object();
    std::vector<InequalityReport> reports;
    int unverified = 0;
    std::string csv;
};

Outcome run_theorem1(const ExperimentConfig& cfg, const MCOptions& mc, const SeedStream& stream) {
    const Json& s = cfg.settings;
    const int d = s["d"].get<int>();
    Outcome o;
    o.reports.push_back(check_theorem1(points_of(s), d, functions_of(s, d), mc, stream));
    o.results["reports"] = reports_json(o.reports);
    return o;
}

Outcome run_corollary1(const ExperimentConfig& cfg, const MCOptions& mc, const SeedStream& stream) {
    const Json& s = cfg.settings;
    const int d = s["d"].get<int>();
    Outcome o;
    o.reports = check_corollary1(points_of(s), d, decode_norm(s["norm"], d, "norm"), mc, stream);
    o.results["reports"] = reports_json(o.reports);
    return o;
}

Outcome run_corollary2(const ExperimentConfig& cfg, const MCOptions& mc, const SeedStream& stream) {
    const Json& s = cfg.settings;
    const int d = s["d"].get<int>();
    Outcome o;
    o.reports = check_corollary2(points_of(s), d, decode_function(s["function"], d, "function"), mc, stream);
    o.results["reports"] = reports_json(o.reports);
    return o;
}

Outcome run_poincare(const ExperimentConfig& cfg, const MCOptions& mc, const SeedStream& stream) {
    const Json& s = cfg.settings;
    const int d = s["d"].get<int>();
    const auto mode = s["gradient"] == "finite_difference" ? GradientMode::FiniteDifference : GradientMode::Analytic;
    Outcome o;
    o.reports.push_back(check_poincare(decode_function(s["function"], d, "function"), d, mc, stream, mode));
    o.results["reports"] = reports_json(o.reports);
    return o;
}

struct Triple {
    IndexedGaussianFamily x;
    IndexedGaussianFamily y;
    IndexedGaussianFamily g;
};

// X_x = Σ xᵢGᵢ, Y_x = ‖x‖₂X, g_x = ⟨x, g⟩: the families compared by theorem1.
Triple comparison_triple(const std::vector<Vector>& points, int d) {
    return {build_sphere_family(points, d), build_scaled_family(points, d), build_sphere_family(points, 1)};
}

Outcome run_slepian(const ExperimentConfig& cfg) {
    const Json& s = cfg.settings;
    Outcome o;
    SlepianConditionReport rep;
    if (!s["points"].is_null()) {
        const Triple t = comparison_triple(points_of(s), s["d"].get<int>());
        rep = verify_slepian_conditions(t.x, t.y, t.g);
    } else {
        const auto& f = s["families"];
        rep = verify_slepian_conditions(decode_family(f["X"], "families.X"), decode_family(f["Y"], "families.Y"),
                                        decode_family(f["G"], "families.G"));
    }
    o.results["conditions"] = to_json(rep);
    InequalityReport r = make_report("slepian_check.worst_excess", Quantity::exact_value(rep.worst_excess),
                                     Quantity::exact_value(0.0));
    // Exact quantities: the 1e-9 tolerance of the check replaces the 4σ band.
    r.verdict = rep.satisfied ? Verdict::Holds : Verdict::Violated;
    r.slack_allowance = 1e-9;
    if (!rep.satisfied) {
        r.note = "covariance hypotheses fail";
    }
    o.reports.push_back(r);
    o.results["reports"] = reports_json(o.reports);
    return o;
}

Outcome run_h_curve(const ExperimentConfig& cfg, const MCOptions& mc, const SeedStream& stream) {
    const Json& s = cfg.settings;
    const int d = s["d"].get<int>();
    const auto points = points_of(s);
    Triple t = comparison_triple(points, d);
    InterpolationConfig ic{std::move(t.x), std::move(t.y), std::move(t.g), functions_of(s, d),
                           s["theta_grid"].get<std::vector<double>>(), s["beta"].get<double>()};
    const HCurve curve = h_curve(ic, mc, stream.child(1));
    const EndpointEstimates ends = endpoint_estimates(ic, mc, stream.child(2));

    Outcome o;
    o.results["hypotheses_satisfied"] = curve.hypotheses_satisfied;
    o.results["theta"] = curve.theta;
    Json values = Json::array();
    for (const auto& v : curve.values) {
        values.push_back(to_json(v));
    }
    o.results["values"] = values;
    Json incs = Json::array();
    for (std::size_t k = 0; k < curve.increments.size(); ++k) {
        incs.push_back(to_json(curve.increments[k]));
        // h(θ_k) ≤ h(θ_{k+1}) read as 0 ≤ increment.
        InequalityReport r = make_report("h_curve.increment[" + std::to_string(k) + "]", Quantity::exact_value(0.0),
                                         Quantity::from(curve.increments[k]));
        if (!curve.hypotheses_satisfied) {
            r.note = "comparison hypotheses not satisfied; monotonicity is not implied";
            if (r.verdict == Verdict::Violated) {
                r.verdict = Verdict::Inconclusive;
            }
        }
        o.reports.push_back(std::move(r));
    }
    o.results["increments"] = incs;
    Json endpoints = Json::object();
    endpoints["start_direct"] = to_json(ends.start);
    endpoints["end_direct"] = to_json(ends.end);
    endpoints["unsmoothed_end_direct"] = to_json(ends.unsmoothed_end);
    o.results["endpoints"] = endpoints;
    o.results["reports"] = reports_json(o.reports);
    if (!s["csv"].get<std::string>().empty()) {
        std::ostringstream csv;
        write_h_curve_csv(curve, csv);
        o.csv = csv.str();
    }
    return o;
}

Outcome run_gordon_chevet(const ExperimentConfig& cfg, const MCOptions& mc, const SeedStream& stream) {
    const Json& s = cfg.settings;
    const int n = s["n"].get<int>();
    const int d = s["d"].get<int>();
    const Matrix v = s["v_matrix"].is_null() ? Matrix(Matrix::Identity(n, n)) : decode_matrix(s["v_matrix"], "v_matrix");
    const Matrix u = s["u_matrix"].is_null() ? Matrix(Matrix::Identity(d, d)) : decode_matrix(s["u_matrix"], "u_matrix");
    const RandomOperatorSpec spec{v, u, decode_norm(s["domain_norm"], static_cast<int>(v.cols()), "domain_norm"),
                                  decode_norm(s["range_norm"], static_cast<int>(u.rows()), "range_norm")};
    const GordonChevetResult res = check_gordon_chevet(spec, mc, stream);
    Outcome o;
    Json terms = Json::object();
    terms["inf_term"] = res.terms.inf_term;
    terms["eps2_domain"] = res.terms.eps2_domain;
    terms["eps2_range"] = res.terms.eps2_range;
    terms["range_gaussian"] = to_json(res.terms.range_gaussian);
    terms["domain_dual_gaussian"] = to_json(res.terms.domain_dual_gaussian);
    terms["expected_min"] = to_json(res.terms.expected_min);
    terms["expected_max"] = to_json(res.terms.expected_max);
    terms["min_certified"] = res.terms.min_certified;
    o.results["terms"] = terms;
    o.reports = res.reports;
    o.results["reports"] = reports_json(o.reports);
    return o;
}

Outcome run_dvoretzky(const ExperimentConfig& cfg, const MCOptions& mc, const SeedStream& stream) {
    const Json& s = cfg.settings;
    const int big_n = s["N"].get<int>();
    SectionSearchOptions opts;
    opts.mu_samples = mc.samples;
    opts.confidence = mc.confidence;
    opts.exec = mc.exec;
    opts.max_attempts = s["max_attempts"].get<int>();
    opts.sphere_samples = s["sphere_samples"].get<int>();
    const SectionCertificate cert =
        find_section(decode_function(s["function"], big_n, "function"), s["epsilon"].get<double>(), opts, stream);
    Outcome o;
    o.results["certificate"] = to_json(cert);
    o.unverified = cert.verified ? 0 : 1;
    if (!s["csv"].get<std::string>().empty()) {
        o.csv = matrix_csv(cert.op);
    }
    return o;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const MCOptions mc{static_cast<std::size_t>(config.samples), config.confidence, options.exec};
    const SeedStream stream{config.seed, 0, 0};

    Outcome o;
    const std::string& e = config.experiment;
    if (e == "theorem1") {
        o = run_theorem1(config, mc, stream);
    } else if (e == "corollary1") {
        o = run_corollary1(config, mc, stream);
    } else if (e == "corollary2") {
        o = run_corollary2(config, mc, stream);
    } else if (e == "poincare") {
        o = run_poincare(config, mc, stream);
    } else if (e == "slepian_check") {
        o = run_slepian(config);
    } else if (e == "h_curve") {
        o = run_h_curve(config, mc, stream);
    } else if (e == "gordon_chevet") {
        o = run_gordon_chevet(config, mc, stream);
    } else if (e == "dvoretzky") {
        o = run_dvoretzky(config, mc, stream);
    } else {
        throw Error(ErrorCode::InvalidValue, "field `experiment`: unknown experiment `" + e + "`");
    }

    int holds = 0;
    int violated = 0;
    int inconclusive = 0;
    for (const auto& r : o.reports) {
        holds += r.verdict == Verdict::Holds;
        violated += r.verdict == Verdict::Violated;
        inconclusive += r.verdict == Verdict::Inconclusive;
    }

    RunReport report;
    Json& doc = report.document;
    doc["schema"] = 1;
    doc["version"] = GCOMP_VERSION;
    doc["experiment"] = e;
    doc["config"] = config.echo();
    doc["results"] = o.results;
    Json summary = Json::object();
    summary["holds"] = holds;
    summary["violated"] = violated;
    summary["inconclusive"] = inconclusive;
    summary["unverified"] = o.unverified;
    const bool failed = violated > 0 || o.unverified > 0;
    summary["status"] = violated > 0 ? "violated" : (o.unverified > 0 ? "unverified" : "ok");
    doc["verdict_summary"] = summary;
    if (options.include_wall_time) {
        doc["wall_time"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    report.exit_code = failed ? kExitViolated : kExitOk;
    if (!o.csv.empty()) {
        report.csv_path = config.settings["csv"].get<std::string>();
        report.csv_content = std::move(o.csv);
    }
    return report;
}

}  // namespace gcomp
