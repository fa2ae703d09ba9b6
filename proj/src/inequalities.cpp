#include "gcomp/inequalities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "gcomp/error.hpp"

namespace gcomp {

namespace {

constexpr double kBallSlack = 1e-12;
constexpr double kSphereTolerance = 1e-9;
constexpr double kSlepianTolerance = 1e-9;

void require_in_ball(const std::vector<Vector>& points) {
    require(!points.empty(), ErrorCode::EmptyIndexSet, "index set is empty");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double len = points[i].norm();
        require(len <= 1.0 + kBallSlack, ErrorCode::PointOutsideBall,
                "point " + std::to_string(i) + " has Euclidean norm " + std::to_string(len) + " > 1");
    }
}

void require_on_sphere(const std::vector<Vector>& points) {
    require(!points.empty(), ErrorCode::EmptyIndexSet, "index set is empty");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double len = points[i].norm();
        require(std::abs(len - 1.0) <= kSphereTolerance, ErrorCode::PointNotOnSphere,
                "point " + std::to_string(i) + " has Euclidean norm " + std::to_string(len));
    }
}

void require_one_lipschitz(const LipschitzFn& fn, int d) {
    require(fn.dim() == d, ErrorCode::DimensionMismatch,
            "function on R^" + std::to_string(fn.dim()) + " but d = " + std::to_string(d));
    require(fn.lipschitz_constant() <= 1.0 + kBallSlack, ErrorCode::LipschitzViolation,
            fn.describe() + " has Lipschitz constant " + std::to_string(fn.lipschitz_constant()) + " > 1");
}

const LipschitzFn& function_for(const std::vector<LipschitzFn>& functions, std::size_t i) {
    return functions.size() == 1 ? functions.front() : functions[i];
}

Vector row(const Matrix& m, Eigen::Index i) {
    return m.row(i).transpose();
}

}  // namespace

Quantity combine(double a, const Quantity& x, double b, const Quantity& y) {
    Quantity q;
    q.mean = a * x.mean + b * y.mean;
    q.std_error = std::hypot(a * x.std_error, b * y.std_error);
    q.samples = std::max(x.samples, y.samples);
    q.exact = x.exact && y.exact;
    return q;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds:
            return "holds";
        case Verdict::Violated:
            return "violated";
        case Verdict::Inconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

InequalityReport make_report(std::string name, const Quantity& lhs, const Quantity& rhs, double extra_slack) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs.mean - lhs.mean;
    r.slack_allowance = kSlackSigmas * std::hypot(lhs.std_error, rhs.std_error) + extra_slack;
    r.verdict = r.margin >= -r.slack_allowance ? Verdict::Holds : Verdict::Violated;
    return r;
}

// --- Slepian-type hypotheses ---------------------------------------------

Matrix mij(const IndexedGaussianFamily& famX, const IndexedGaussianFamily& famY, int t, int s) {
    require(famX.size() == famY.size(), ErrorCode::IndexMismatch, "families have different index sets");
    require(famX.value_dim() == famY.value_dim(), ErrorCode::IndexMismatch, "families have different value_dim");
    return famY.cross_cov(t, s) - famX.cross_cov(t, s);
}

double pair_excess(const IndexedGaussianFamily& famX, const IndexedGaussianFamily& famY,
                   const IndexedGaussianFamily& famG, int t, int s) {
    require(famG.size() == famX.size(), ErrorCode::IndexMismatch, "scalar family has a different index set");
    require(famG.value_dim() == 1, ErrorCode::IndexMismatch, "scalar family must have value_dim 1");
    const double half_increment =
        0.5 * (famG.cross_cov(t, t)(0, 0) + famG.cross_cov(s, s)(0, 0) - 2.0 * famG.cross_cov(t, s)(0, 0));
    return spectral_norm(mij(famX, famY, t, s)) - half_increment;
}

SlepianConditionReport verify_slepian_conditions(const IndexedGaussianFamily& famX, const IndexedGaussianFamily& famY,
                                                 const IndexedGaussianFamily& famG) {
    require(famX.size() == famY.size() && famX.size() == famG.size(), ErrorCode::IndexMismatch,
            "families have different index sets");
    require(famX.value_dim() == famY.value_dim(), ErrorCode::IndexMismatch, "families have different value_dim");
    require(famG.value_dim() == 1, ErrorCode::IndexMismatch, "scalar family must have value_dim 1");

    SlepianConditionReport report;
    const int n = famX.size();
    for (int t = 0; t < n; ++t) {
        const double gap = (famX.cross_cov(t, t) - famY.cross_cov(t, t)).cwiseAbs().maxCoeff();
        report.dist_equal_max_gap = std::max(report.dist_equal_max_gap, gap);
    }
    report.worst_excess = n > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
    for (int t = 0; t < n; ++t) {
        for (int s = t + 1; s < n; ++s) {
            const double excess = pair_excess(famX, famY, famG, t, s);
            if (excess > report.worst_excess) {
                report.worst_excess = excess;
                report.worst_pair = {t, s};
            }
        }
    }
    report.satisfied =
        report.dist_equal_max_gap <= kSlepianTolerance && report.worst_excess <= kSlepianTolerance;
    return report;
}

// --- Comparison of maxima and its consequences ------------------------------

InequalityReport check_theorem1(const std::vector<Vector>& points, int d, const std::vector<LipschitzFn>& functions,
                                const MCOptions& options, const SeedStream& stream) {
    require_in_ball(points);
    require(functions.size() == 1 || functions.size() == points.size(), ErrorCode::DimensionMismatch,
            "need one function per point or a single shared function");
    for (const auto& fn : functions) {
        require_one_lipschitz(fn, d);
    }
    const FamilySampler sphere(build_sphere_family(points, d));
    const FamilySampler scaled(build_scaled_family(points, d));
    const FamilySampler scalar(build_sphere_family(points, 1));
    const auto count = static_cast<Eigen::Index>(points.size());

    const MCEstimate lhs = estimate_scalar(options, stream.child(1), [&](Engine& engine) {
        const Matrix x = sphere.draw(engine);
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < count; ++i) {
            best = std::max(best, function_for(functions, i)(row(x, i)));
        }
        return best;
    });
    const MCEstimate rhs = estimate_scalar(options, stream.child(2), [&](Engine& engine) {
        const Matrix y = scaled.draw(engine);
        const Matrix g = scalar.draw(engine);
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < count; ++i) {
            best = std::max(best, function_for(functions, i)(row(y, i)) + g(i, 0));
        }
        return best;
    });
    return make_report("theorem1", Quantity::from(lhs), Quantity::from(rhs));
}

std::vector<InequalityReport> check_corollary1(const std::vector<Vector>& points, int d, const NormSpec& triple_norm,
                                               const MCOptions& options, const SeedStream& stream) {
    require_in_ball(points);
    require(triple_norm.dim() == d, ErrorCode::DimensionMismatch, "norm dimension differs from d");
    validate_dominated_by_euclidean(triple_norm, stream.child(0));

    const MCEstimate norm_of_x = estimate_scalar(options, stream.child(1), [&](Engine& engine) {
        return norm_eval(triple_norm, engine.normal_vector(d));
    });
    const MCEstimate max_g = expected_max_g(points, options, stream.child(2));

    const FamilySampler sphere(build_sphere_family(points, d));
    const auto extremes = estimate_joint(2, options, stream.child(3), [&](Engine& engine, std::span<double> out) {
        const Matrix x = sphere.draw(engine);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const double v = norm_eval(triple_norm, row(x, i));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out[0] = lo;
        out[1] = hi;
    });

    double min_len = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        min_len = std::min(min_len, p.norm());
    }
    const Quantity e_norm = Quantity::from(norm_of_x);
    const Quantity e_max_g = Quantity::from(max_g);
    const Quantity e_min = Quantity::from(extremes[0]);
    const Quantity e_max = Quantity::from(extremes[1]);

    return {
        make_report("corollary1.lower", combine(min_len, e_norm, -1.0, e_max_g), e_min),
        make_report("corollary1.middle", e_min, e_max),
        make_report("corollary1.upper", e_max, combine(1.0, e_norm, 1.0, e_max_g)),
    };
}

std::vector<InequalityReport> check_corollary2(const std::vector<Vector>& points, int d, const LipschitzFn& function,
                                               const MCOptions& options, const SeedStream& stream) {
    require_on_sphere(points);
    require_one_lipschitz(function, d);

    const MCEstimate mu = estimate_scalar(options, stream.child(1),
                                          [&](Engine& engine) { return function(engine.normal_vector(d)); });
    const FamilySampler sphere(build_sphere_family(points, d));
    const MCEstimate lhs = estimate_scalar(options, stream.child(2), [&](Engine& engine) {
        const Matrix x = sphere.draw(engine);
        double best = 0.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            best = std::max(best, std::abs(function(row(x, i)) - mu.mean));
        }
        return best;
    });
    const MCEstimate abs_dev = estimate_scalar(options, stream.child(3), [&](Engine& engine) {
        return std::abs(function(engine.normal_vector(d)) - mu.mean);
    });
    const MCEstimate max_g = expected_max_g(points, options, stream.child(4));

    const Quantity middle = combine(1.0, Quantity::from(abs_dev), 1.0, Quantity::from(max_g));
    const Quantity upper = combine(1.0, Quantity::exact_value(1.0), 1.0, Quantity::from(max_g));
    // Both sides of the first link move by at most |μ̂ − μ| when μ is perturbed.
    InequalityReport first =
        make_report("corollary2.first", Quantity::from(lhs), middle, kSlackSigmas * 2.0 * mu.std_error);
    InequalityReport second = make_report("corollary2.second", middle, upper, kSlackSigmas * mu.std_error);
    first.note = second.note = "mu estimated as " + std::to_string(mu.mean);
    return {first, second};
}

Vector finite_difference_gradient(const LipschitzFn& function, const Vector& x, double h) {
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double up = function(probe);
        probe[i] = x[i] - h;
        const double down = function(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

InequalityReport check_poincare(const LipschitzFn& function, int d, const MCOptions& options,
                                const SeedStream& stream, GradientMode gradient) {
    require(function.dim() == d, ErrorCode::DimensionMismatch, "function dimension differs from d");
    std::vector<double> raw;
    const auto estimates = estimate_joint(
        2, options, stream.child(1),
        [&](Engine& engine, std::span<double> out) {
            const Vector x = engine.normal_vector(d);
            out[0] = function(x);
            const Vector g =
                gradient == GradientMode::Analytic ? function.gradient(x) : finite_difference_gradient(function, x);
            require(g.allFinite(), ErrorCode::GradientUnavailable, "gradient is not finite");
            out[1] = g.squaredNorm();
        },
        &raw);

    // Unbiased sample variance; its standard error is that of the mean of the
    // squared deviations.
    const std::size_t samples = options.samples;
    const double mean = estimates[0].mean;
    std::vector<double> sq(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double dev = raw[2 * i] - mean;
        sq[i] = dev * dev;
    }
    const MCEstimate sq_summary = summarize(sq, options.confidence);
    const auto n = static_cast<double>(samples);
    Quantity variance{sq_summary.mean * n / (n - 1.0), sq_summary.std_error, samples, false};
    return make_report("poincare", variance, Quantity::from(estimates[1]));
}

// --- Gordon–Chevet ---------------------------------------------------------

GordonChevetResult check_gordon_chevet(const RandomOperatorSpec& spec, const MCOptions& options,
                                       const SeedStream& stream) {
    spec.validate();
    GordonChevetResult result;
    GordonChevetTerms& t = result.terms;

    const ExtremizationResult inf_result =
        sphere_extremize(spec.v_matrix, spec.domain_norm, NormSpec::l2(spec.n()), ExtremeMode::Min);
    t.inf_term = inf_result.value;
    t.eps2_domain = epsilon2_domain(spec.v_matrix, spec.domain_norm);
    t.eps2_range = epsilon2_range(spec.u_matrix, spec.range_norm);

    t.range_gaussian = estimate_scalar(options, stream.child(1), [&](Engine& engine) {
        return norm_eval(spec.range_norm, spec.u_matrix * engine.normal_vector(spec.d()));
    });
    t.domain_dual_gaussian = estimate_scalar(options, stream.child(2), [&](Engine& engine) {
        return dual_norm_eval(spec.domain_norm, spec.v_matrix.transpose() * engine.normal_vector(spec.n()));
    });

    std::atomic<bool> all_certified{true};
    const auto extremes = estimate_joint(2, options, stream.child(3), [&](Engine& engine, std::span<double> out) {
        const Matrix op = realize_with_core(spec, engine.normal_matrix(spec.n(), spec.d()));
        ExtremizeOptions ext;
        ext.stream = SeedStream{engine(), engine(), 0};
        const auto lo = sphere_extremize(op, spec.domain_norm, spec.range_norm, ExtremeMode::Min, ext);
        const auto hi = sphere_extremize(op, spec.domain_norm, spec.range_norm, ExtremeMode::Max, ext);
        if (!lo.certified) {
            all_certified.store(false);
        }
        out[0] = lo.value;
        out[1] = hi.value;
    });
    t.expected_min = extremes[0];
    t.expected_max = extremes[1];
    t.min_certified = all_certified.load() && inf_result.certified;

    const Quantity range_q = Quantity::from(t.range_gaussian);
    const Quantity dual_q = Quantity::from(t.domain_dual_gaussian);
    InequalityReport lower = make_report("gordon_chevet.lower", combine(t.inf_term, range_q, -t.eps2_range, dual_q),
                                         Quantity::from(t.expected_min));
    if (!spec.domain_norm.is_l2() && !t.min_certified && lower.verdict == Verdict::Holds) {
        lower.verdict = Verdict::Inconclusive;
        lower.note = "minimum not certified by an exact oracle";
    }
    result.reports.push_back(lower);
    result.reports.push_back(
        make_report("gordon_chevet.middle", Quantity::from(t.expected_min), Quantity::from(t.expected_max)));
    result.reports.push_back(make_report("gordon_chevet.upper", Quantity::from(t.expected_max),
                                         combine(t.eps2_domain, range_q, t.eps2_range, dual_q)));
    return result;
}

}  // namespace gcomp
