#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gcomp/family.hpp"
#include "gcomp/montecarlo.hpp"
#include "gcomp/norms.hpp"
#include "gcomp/operators.hpp"

namespace gcomp {

/// Slack multiplier applied to the combined standard error of a report.
inline constexpr double kSlackSigmas = 4.0;

/// One side of an inequality: either a Monte Carlo estimate or an exact value
/// (exact values carry zero standard error and zero samples).
struct Quantity {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    bool exact = true;

    static Quantity exact_value(double v) { return {v, 0.0, 0, true}; }
    static Quantity from(const MCEstimate& e) { return {e.mean, e.std_error, e.samples, false}; }
};

/// a·x + b·y for independent x, y.
[[nodiscard]] Quantity combine(double a, const Quantity& x, double b, const Quantity& y);

enum class Verdict { Holds, Violated, Inconclusive };

[[nodiscard]] std::string to_string(Verdict v);

/// Statistical verdict on lhs ≤ rhs.
struct InequalityReport {
    std::string name;
    Quantity lhs;
    Quantity rhs;
    double margin = 0.0;           // rhs.mean − lhs.mean
    double slack_allowance = 0.0;  // 4·combined std_error (+ any folded-in terms)
    Verdict verdict = Verdict::Holds;
    std::string note;
};

/// Builds the report; holds iff margin ≥ −slack. `extra_slack` is added to
/// the 4σ allowance.
[[nodiscard]] InequalityReport make_report(std::string name, const Quantity& lhs, const Quantity& rhs,
                                           double extra_slack = 0.0);

struct SlepianConditionReport {
    double dist_equal_max_gap = 0.0;
    std::pair<int, int> worst_pair{0, 0};
    double worst_excess = 0.0;
    bool satisfied = false;
};

/// M_{t,s} = E Y_t⊗Y_s − E X_t⊗X_s.
[[nodiscard]] Matrix mij(const IndexedGaussianFamily& famX, const IndexedGaussianFamily& famY, int t, int s);

/// ‖M_{t,s}‖ − ½E|g_t − g_s|².
[[nodiscard]] double pair_excess(const IndexedGaussianFamily& famX, const IndexedGaussianFamily& famY,
                                 const IndexedGaussianFamily& famG, int t, int s);

/// Exact check of dist(X_t) = dist(Y_t) and ‖M_{t,s}‖ ≤ ½E|g_t − g_s|² over
/// all pairs t < s (tolerance 1e-9).
[[nodiscard]] SlepianConditionReport verify_slepian_conditions(const IndexedGaussianFamily& famX,
                                                               const IndexedGaussianFamily& famY,
                                                               const IndexedGaussianFamily& famG);

/// E max_{x∈A} F_x(X_x) ≤ E max_{x∈A} {F_x(‖x‖₂X) + g_x}, A ⊂ B₂ⁿ.
/// `functions` has one entry per point, or a single entry used for all.
[[nodiscard]] InequalityReport check_theorem1(const std::vector<Vector>& points, int d,
                                              const std::vector<LipschitzFn>& functions, const MCOptions& options,
                                              const SeedStream& stream);

/// The three-link chain
///   min‖x‖₂·E|||X||| − E max g_x ≤ E min |||X_x||| ≤ E max |||X_x||| ≤ E|||X||| + E max g_x.
[[nodiscard]] std::vector<InequalityReport> check_corollary1(const std::vector<Vector>& points, int d,
                                                             const NormSpec& triple_norm, const MCOptions& options,
                                                             const SeedStream& stream);

/// E max|F(X_x) − μ| ≤ E|F(X) − μ| + E max g_x ≤ 1 + E max g_x, A ⊂ S^{n−1}.
/// μ is estimated first; twice its 4σ band is added to the first report's slack.
[[nodiscard]] std::vector<InequalityReport> check_corollary2(const std::vector<Vector>& points, int d,
                                                             const LipschitzFn& function, const MCOptions& options,
                                                             const SeedStream& stream);

enum class GradientMode { Analytic, FiniteDifference };

/// Var f(X) ≤ E‖∇f(X)‖₂² for canonical X in R^d.
[[nodiscard]] InequalityReport check_poincare(const LipschitzFn& function, int d, const MCOptions& options,
                                              const SeedStream& stream,
                                              GradientMode gradient = GradientMode::Analytic);

/// Central finite-difference gradient, step h.
[[nodiscard]] Vector finite_difference_gradient(const LipschitzFn& function, const Vector& x, double h = 1e-5);

/// All Gordon–Chevet ingredients, kept for reporting.
struct GordonChevetTerms {
    double inf_term = 0.0;          // inf_{‖x‖_E=1} ‖v x‖₂
    double eps2_domain = 0.0;       // ε₂(x*)
    double eps2_range = 0.0;        // ε₂(f)
    MCEstimate range_gaussian;      // E‖Σ h_k f_k‖_F
    MCEstimate domain_dual_gaussian;  // E‖Σ g_i x*_i‖_{E*}
    MCEstimate expected_min;        // E min ‖T_ω x‖
    MCEstimate expected_max;        // E max ‖T_ω x‖
    bool min_certified = true;
};

struct GordonChevetResult {
    GordonChevetTerms terms;
    std::vector<InequalityReport> reports;  // lower, middle, upper
};

[[nodiscard]] GordonChevetResult check_gordon_chevet(const RandomOperatorSpec& spec, const MCOptions& options,
                                                     const SeedStream& stream);

}  // namespace gcomp
