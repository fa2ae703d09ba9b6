// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gcomp/config.hpp"
#include "gcomp/dvoretzky.hpp"
#include "gcomp/error.hpp"
#include "gcomp/inequalities.hpp"
#include "gcomp/interpolation.hpp"
#include "gcomp/operators.hpp"
#include "gcomp/report.hpp"

using namespace gcomp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) {
            detail = why;
        }
        pass = false;
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// 1. Euclidean Gordon–Chevet against chi means.
Outcome criterion1() {
    Outcome o;
    std::string info;
    for (const auto& [n, d] : std::vector<std::pair<int, int>>{{2, 50}, {5, 50}, {3, 20}}) {
        const auto start = Clock::now();
        const RandomOperatorSpec spec{Matrix::Identity(n, n), Matrix::Identity(d, d), NormSpec::l2(n), NormSpec::l2(d)};
        const auto res = check_gordon_chevet(spec, MCOptions{10000}, SeedStream{static_cast<std::uint64_t>(100 + n), 0, 0});
        const double elapsed = seconds_since(start);
        const auto& lo = res.terms.expected_min;
        const auto& hi = res.terms.expected_max;
        const double a_d = chi_mean(d);
        const double a_n = chi_mean(n);
        if (lo.mean < a_d - a_n - 4.0 * lo.std_error) {
            o.fail("(n,d)=(" + std::to_string(n) + "," + std::to_string(d) + ") E s_min below bound");
        }
        if (hi.mean > a_d + a_n + 4.0 * hi.std_error) {
            o.fail("(n,d)=(" + std::to_string(n) + "," + std::to_string(d) + ") E s_max above bound");
        }
        for (const auto& r : res.reports) {
            if (r.verdict == Verdict::Violated) {
                o.fail(r.name + " violated");
            }
        }
        if (elapsed >= 60.0) {
            o.fail("runtime " + fmt(elapsed) + " s");
        }
        info += " (" + std::to_string(n) + "," + std::to_string(d) + "): s_min=" + fmt(lo.mean) + " s_max=" +
                fmt(hi.mean) + " " + fmt(elapsed) + "s;";
    }
    if (o.pass) {
        o.detail = info;
    }
    return o;
}

// 2. Non-Euclidean domains with certified extremization.
Outcome criterion2() {
    Outcome o;
    int holds = 0;
    int total = 0;
    for (const auto& domain : {NormSpec::l1(3), NormSpec::linf(3)}) {
        for (int pair = 0; pair < 20; ++pair) {
            Engine e = SeedStream{2, 7, 0}.engine(static_cast<std::uint64_t>(pair));
            const RandomOperatorSpec spec{e.normal_matrix(3, 3), e.normal_matrix(4, 2), domain, NormSpec::l2(4)};
            const auto res = check_gordon_chevet(spec, MCOptions{10000}, SeedStream{200 + static_cast<std::uint64_t>(pair), 0, 0});
            if (!res.terms.min_certified) {
                o.fail(domain.describe() + " pair " + std::to_string(pair) + ": extremization not certified");
            }
            for (const auto& r : res.reports) {
                ++total;
                if (r.verdict == Verdict::Holds) {
                    ++holds;
                } else {
                    o.fail(domain.describe() + " pair " + std::to_string(pair) + ": " + r.name + " " +
                           to_string(r.verdict));
                }
            }
        }
    }
    if (o.pass) {
        o.detail = std::to_string(holds) + "/" + std::to_string(total) + " reports hold";
    }
    return o;
}

// 3. Comparison inequalities on random configurations.
Outcome criterion3() {
    Outcome o;
    int reports = 0;
    int violated = 0;
    Engine cfg_rng = SeedStream{3, 0, 0}.engine();
    const MCOptions opts{100000};
    for (int k = 0; k < 50; ++k) {
        const int n = 1 + static_cast<int>(cfg_rng() % 6);
        const int d = 1 + static_cast<int>(cfg_rng() % 20);
        const int count = 1 + static_cast<int>(cfg_rng() % 10);
        std::vector<Vector> ball;
        std::vector<Vector> sphere;
        for (int i = 0; i < count; ++i) {
            const Vector dir = cfg_rng.normal_vector(n).normalized();
            sphere.push_back(dir);
            ball.push_back(dir * cfg_rng.uniform());
        }
        const SeedStream s{300 + static_cast<std::uint64_t>(k), 0, 0};
        std::vector<InequalityReport> all;
        std::vector<LipschitzFn> fns;
        switch (k % 3) {
            case 0: fns.push_back(LipschitzFn::norm(NormSpec::l2(d))); break;
            case 1: fns.push_back(LipschitzFn::norm(NormSpec::linf(d))); break;
            default:
                for (int i = 0; i < count; ++i) {
                    fns.push_back(LipschitzFn::linear(cfg_rng.normal_vector(d).normalized()));
                }
        }
        all.push_back(check_theorem1(ball, d, fns, opts, s.child(1)));
        const NormSpec triple = k % 2 == 0 ? NormSpec::l2(d) : NormSpec::linf(d);
        for (auto& r : check_corollary1(ball, d, triple, opts, s.child(2))) {
            all.push_back(r);
        }
        for (auto& r : check_corollary2(sphere, d, LipschitzFn::norm(NormSpec::l2(d)), opts, s.child(3))) {
            all.push_back(r);
        }
        for (const auto& r : all) {
            ++reports;
            if (r.verdict == Verdict::Violated) {
                ++violated;
                o.fail("config " + std::to_string(k) + ": " + r.name + " violated (margin " + fmt(r.margin) + ")");
            }
        }
    }
    // Equality cases: a single unit point.
    int equality_checked = 0;
    for (int k = 0; k < 5; ++k) {
        const int n = 2 + k;
        const int d = 3 + 3 * k;
        const std::vector<Vector> one{Vector::Unit(n, k % n)};
        const SeedStream s{350 + static_cast<std::uint64_t>(k), 0, 0};
        std::vector<InequalityReport> eq;
        eq.push_back(check_theorem1(one, d, {LipschitzFn::norm(NormSpec::l2(d))}, opts, s.child(1)));
        for (auto& r : check_corollary1(one, d, NormSpec::l2(d), opts, s.child(2))) {
            eq.push_back(r);
        }
        eq.push_back(check_corollary2(one, d, LipschitzFn::norm(NormSpec::l2(d)), opts, s.child(3))[0]);
        for (const auto& r : eq) {
            ++equality_checked;
            if (std::abs(r.margin) > 4.0 * r.slack_allowance) {
                o.fail("equality case " + r.name + ": |margin| " + fmt(std::abs(r.margin)) + " > 4*slack " +
                       fmt(4.0 * r.slack_allowance));
            }
        }
    }
    if (o.pass) {
        o.detail = std::to_string(reports) + " reports, " + std::to_string(violated) + " violated; " +
                   std::to_string(equality_checked) + " equality cases within 4*slack";
    }
    return o;
}

// 4. Exact Slepian hypotheses on the comparison triple.
Outcome criterion4() {
    Outcome o;
    Engine e = SeedStream{4, 0, 0}.engine();
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        const int n = 1 + static_cast<int>(e() % 8);
        const int count = 1 + static_cast<int>(e() % 12);
        const int d = 1 + static_cast<int>(e() % 4);
        std::vector<Vector> pts;
        for (int i = 0; i < count; ++i) {
            pts.push_back(e.normal_vector(n).normalized() * e.uniform());
        }
        const auto rep = verify_slepian_conditions(build_sphere_family(pts, d), build_scaled_family(pts, d),
                                                   build_sphere_family(pts, 1));
        double expected = count == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
        for (int i = 0; i < count; ++i) {
            for (int j = i + 1; j < count; ++j) {
                const double gap = pts[static_cast<std::size_t>(i)].norm() - pts[static_cast<std::size_t>(j)].norm();
                expected = std::max(expected, -0.5 * gap * gap);
            }
        }
        if (!rep.satisfied || rep.worst_excess > 0.0) {
            o.fail("set " + std::to_string(k) + ": worst_excess " + fmt(rep.worst_excess));
        }
        if (std::abs(rep.worst_excess - expected) > 1e-9) {
            o.fail("set " + std::to_string(k) + ": excess differs from -(|a|-|b|)^2/2");
        }
        worst = std::max(worst, rep.worst_excess);
    }
    if (o.pass) {
        o.detail = "1000 sets satisfied, max worst_excess " + fmt(worst);
    }
    return o;
}

// 5. Monotone interpolation curve.
Outcome criterion5() {
    Outcome o;
    const auto start = Clock::now();
    const std::vector<Vector> pts{Vector::Unit(2, 0), Vector::Unit(2, 1)};
    const InterpolationConfig cfg{build_sphere_family(pts, 2), build_scaled_family(pts, 2), build_sphere_family(pts, 1),
                                  {LipschitzFn::norm(NormSpec::l2(2))}, uniform_theta_grid(9), 20.0};
    const MCOptions opts{100000};
    const HCurve curve = h_curve(cfg, opts, SeedStream{5, 0, 0});
    const EndpointEstimates ends = endpoint_estimates(cfg, opts, SeedStream{55, 0, 0});
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < curve.increments.size(); ++k) {
        const auto& inc = curve.increments[k];
        if (inc.mean < -4.0 * inc.std_error) {
            o.fail("increment " + std::to_string(k) + " = " + fmt(inc.mean));
        }
        min_ratio = std::min(min_ratio, inc.mean / inc.std_error);
    }
    const auto& h0 = curve.values.front();
    const auto& h1 = curve.values.back();
    if (std::abs(h0.mean - ends.start.mean) > 4.0 * std::hypot(h0.std_error, ends.start.std_error)) {
        o.fail("h(0) differs from direct estimate");
    }
    if (std::abs(h1.mean - ends.end.mean) > 4.0 * std::hypot(h1.std_error, ends.end.std_error)) {
        o.fail("h(pi/2) differs from direct estimate");
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 120.0) {
        o.fail("runtime " + fmt(elapsed) + " s");
    }
    if (o.pass) {
        o.detail = "8 increments, min increment/stderr " + fmt(min_ratio) + "; endpoints match; " + fmt(elapsed) + "s";
    }
    return o;
}

// 6. Closed-form smoothed-max identities.
Outcome criterion6() {
    Outcome o;
    Engine e = SeedStream{6, 0, 0}.engine();
    double worst_identity = 0.0;
    double worst_fd = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const int n = 1 + static_cast<int>(e() % 8);
        const Vector alpha = 3.0 * e.normal_vector(n);
        const double beta = 0.1 + 10.0 * e.uniform();
        const double t = 2.0 * e.normal();
        const double g = smoothed_max(alpha, beta);
        // Condition 1: shift equivariance.
        worst_identity = std::max(worst_identity,
                                  std::abs(smoothed_max((alpha.array() + t).matrix(), beta) - (g + t)) /
                                      std::max(1.0, std::abs(g) + std::abs(t)));
        const Matrix h = smoothed_max_hessian(alpha, beta);
        for (int i = 0; i < n; ++i) {
            worst_identity = std::max(worst_identity, std::abs(h.row(i).sum()));  // zero row sums
            for (int j = 0; j < n; ++j) {
                if (i != j) {
                    worst_identity = std::max(worst_identity, h(i, j));  // nonpositive off-diagonal
                }
            }
        }
        if (k < 1000) {
            const double step = 1e-4;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const Vector ei = step * Vector::Unit(n, i);
                    const Vector ej = step * Vector::Unit(n, j);
                    const double fd = (smoothed_max(alpha + ei + ej, beta) - smoothed_max(alpha + ei - ej, beta) -
                                       smoothed_max(alpha - ei + ej, beta) + smoothed_max(alpha - ei - ej, beta)) /
                                      (4.0 * step * step);
                    worst_fd = std::max(worst_fd, std::abs(fd - h(i, j)));
                }
            }
        }
    }
    if (worst_identity > 1e-12) {
        o.fail("identity residual " + fmt(worst_identity));
    }
    if (worst_fd > 1e-6) {
        o.fail("finite-difference Hessian error " + fmt(worst_fd));
    }
    if (o.pass) {
        o.detail = "identity residual " + fmt(worst_identity) + ", Hessian FD error " + fmt(worst_fd);
    }
    return o;
}

// 7. Poincaré saturation and the chi(2) variance.
Outcome criterion7() {
    Outcome o;
    Engine e = SeedStream{7, 0, 0}.engine();
    for (int k = 0; k < 5; ++k) {
        const int d = 1 + k;
        const auto r = check_poincare(LipschitzFn::linear(e.normal_vector(d).normalized()), d, MCOptions{100000},
                                      SeedStream{700 + static_cast<std::uint64_t>(k), 0, 0});
        if (std::abs(r.lhs.mean - r.rhs.mean) > 4.0 * r.slack_allowance) {
            o.fail("linear d=" + std::to_string(d) + " not saturated");
        }
    }
    const auto r = check_poincare(LipschitzFn::norm(NormSpec::l2(2)), 2, MCOptions{100000}, SeedStream{77, 0, 0});
    const double target = 2.0 - std::numbers::pi / 2.0;
    if (std::abs(r.lhs.mean - target) > 4.0 * r.lhs.std_error) {
        o.fail("Var|X| = " + fmt(r.lhs.mean) + " vs " + fmt(target));
    }
    if (r.verdict != Verdict::Holds) {
        o.fail("norm verdict " + to_string(r.verdict));
    }
    if (o.pass) {
        o.detail = "linear saturated; Var|X|=" + fmt(r.lhs.mean) + " (target " + fmt(target) + ")";
    }
    return o;
}

// 8. Dvoretzky arithmetic and section search.
Outcome criterion8() {
    Outcome o;
    if (dvoretzky_dimension(0.5, 20.0, 1.0) != 80) {
        o.fail("t=10 does not give n=80");
    }
    const double b = failure_bound(0.5, 20.0, 1.0, 80);
    if (!(b < 1.0) || std::abs(b - 0.9944) > 5e-5) {
        o.fail("t=10 bound " + fmt(b));
    }
    for (int k = 0; k <= 1000000; ++k) {
        const double t = 2.0 + 1e-6 + (98.0 - 1e-6) * k / 1000000.0;
        const double bound = failure_bound(t, 1.0, 1.0, dvoretzky_dimension(t, 1.0, 1.0));
        if (!(bound < 1.0)) {
            o.fail("bound " + fmt(bound) + " at t=" + fmt(t));
            break;
        }
    }
    const auto start = Clock::now();
    std::vector<int> attempts;
    int unverified = 0;
    int dim = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SectionSearchOptions opts;
        const auto cert = find_section(LipschitzFn::norm(NormSpec::l2(400)), 0.5, opts, SeedStream{800 + seed, 0, 0});
        attempts.push_back(cert.attempts_used);
        dim = cert.section_dim;
        if (!cert.verified) {
            ++unverified;
        }
    }
    const double elapsed = seconds_since(start) / 20.0;
    std::sort(attempts.begin(), attempts.end());
    const double median = 0.5 * (attempts[9] + attempts[10]);
    if (unverified > 0) {
        o.fail(std::to_string(unverified) + " seeds without a verified section");
    }
    if (!(median < 5.0)) {
        o.fail("median attempts " + fmt(median));
    }
    if (elapsed >= 60.0) {
        o.fail("runtime " + fmt(elapsed) + " s per search");
    }
    if (o.pass) {
        o.detail = "n(t=10)=80, bound=" + fmt(b) + "; sweep ok; N=400 sections n=" + std::to_string(dim) +
                   ", median attempts " + fmt(median) + ", " + fmt(elapsed) + "s per search";
    }
    return o;
}

// 9. Heuristic against a fine net, and ε₂ closed forms against brute force.
Outcome criterion9() {
    Outcome o;
    Engine e = SeedStream{9, 0, 0}.engine();
    const std::vector<double> ps{1.0, 2.0, kInfinity};
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int m = 1 + static_cast<int>(e() % 3);
        const int rows = 1 + static_cast<int>(e() % 4);
        const NormSpec dom = NormSpec::lp(ps[e() % 3], m);
        const NormSpec rng = NormSpec::lp(ps[e() % 3], rows);
        const Matrix t = e.normal_matrix(rows, m);
        for (auto mode : {ExtremeMode::Min, ExtremeMode::Max}) {
            ExtremizeOptions heur;
            heur.method = ExtremizeMethod::Heuristic;
            heur.stream = SeedStream{900 + static_cast<std::uint64_t>(k), 0, 0};
            ExtremizeOptions net;
            net.method = ExtremizeMethod::NetOracle;
            net.net_tolerance = 1e-4;
            const double a = sphere_extremize(t, dom, rng, mode, heur).value;
            const double b = sphere_extremize(t, dom, rng, mode, net).value;
            worst = std::max(worst, std::abs(a - b));
            if (std::abs(a - b) > 1e-3) {
                o.fail("operator " + std::to_string(k) + " " + dom.describe() + "->" + rng.describe() + " " +
                       to_string(mode) + ": " + fmt(a) + " vs " + fmt(b));
            }
        }
    }
    double worst_eps = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int n = 1 + static_cast<int>(e() % 5);
        const int m = 1 + static_cast<int>(e() % 6);
        const Matrix v = e.normal_matrix(n, m);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(v.transpose() * v);
        double sign_best = 0.0;
        for (int mask = 0; mask < (1 << m); ++mask) {
            Vector s(m);
            for (int i = 0; i < m; ++i) {
                s[i] = (mask >> i) & 1 ? 1.0 : -1.0;
            }
            sign_best = std::max(sign_best, (v * s).norm());
        }
        double col_best = 0.0;
        for (int j = 0; j < m; ++j) {
            col_best = std::max(col_best, v.col(j).norm());
        }
        worst_eps = std::max({worst_eps,
                              std::abs(epsilon2_domain(v, NormSpec::l2(m)) -
                                       std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()))),
                              std::abs(epsilon2_domain(v, NormSpec::l1(m)) - col_best),
                              std::abs(epsilon2_domain(v, NormSpec::linf(m)) - sign_best)});
        const Matrix u = e.normal_matrix(m, n);
        double row_best = 0.0;
        for (int i = 0; i < m; ++i) {
            row_best = std::max(row_best, u.row(i).norm());
        }
        double dual_sign = 0.0;
        for (int mask = 0; mask < (1 << m); ++mask) {
            Vector s(m);
            for (int i = 0; i < m; ++i) {
                s[i] = (mask >> i) & 1 ? 1.0 : -1.0;
            }
            dual_sign = std::max(dual_sign, (u.transpose() * s).norm());
        }
        Eigen::SelfAdjointEigenSolver<Matrix> eig_u(u.transpose() * u);
        worst_eps = std::max({worst_eps,
                              std::abs(epsilon2_range(u, NormSpec::l2(m)) -
                                       std::sqrt(std::max(0.0, eig_u.eigenvalues().maxCoeff()))),
                              std::abs(epsilon2_range(u, NormSpec::linf(m)) - row_best),
                              std::abs(epsilon2_range(u, NormSpec::l1(m)) - dual_sign)});
    }
    if (worst_eps > 1e-9) {
        o.fail("eps2 closed form error " + fmt(worst_eps));
    }
    if (o.pass) {
        o.detail = "max |heuristic-net| " + fmt(worst) + ", max eps2 error " + fmt(worst_eps);
    }
    return o;
}

// 10. Byte-identical reports across runs and worker counts.
std::string strip_wall_time(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.find("\"wall_time\"") != std::string::npos) {
            // wall_time is the last member, so the comma before it goes too.
            if (out.size() >= 2 && out[out.size() - 2] == ',') {
                out.erase(out.size() - 2, 1);
            }
            continue;
        }
        out += line;
        out += '\n';
    }
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10() {
    Outcome o;
    const std::vector<std::pair<std::string, std::string>> runs{
        {"gordon_chevet", R"({"seed": 7, "samples": 10000, "n": 2, "d": 50})"},
        {"gordon_chevet", R"({"seed": 11, "samples": 10000, "v_matrix": [[1, 0.5, 0], [0, 1, 0.2], [0.3, 0, 1]],
                             "u_matrix": [[1, 0], [0, 1], [1, 1], [0.5, -1]], "domain_norm": "l1"})"},
        {"theorem1", R"({"seed": 1, "points": [[1, 0], [0, 1], [0.6, 0.8]], "d": 4})"},
        {"corollary1", R"({"seed": 2, "points": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "d": 10, "norm": "linf"})"},
        {"corollary2", R"({"seed": 3, "points": [[1, 0], [0, 1]], "d": 5})"},
        {"poincare", R"({"seed": 4, "d": 2})"},
        {"slepian_check", R"({"points": [[1, 0], [0, 0.5], [0.3, 0.3]], "d": 2})"},
        {"h_curve", R"({"seed": 5, "points": [[1, 0], [0, 1]], "d": 2})"},
        {"dvoretzky", R"({"seed": 6, "N": 400, "epsilon": 0.5})"},
    };
    const auto dir = std::filesystem::temp_directory_path() / ("gcomp_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    int compared = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto& [experiment, text] = runs[k];
        // In-process: literal byte equality with the timing field left out.
        const ExperimentConfig cfg = parse_config_text(text, experiment);
        RunOptions base;
        base.include_wall_time = false;
        const std::string ref = run_experiment(cfg, base).dump();
        RunOptions eight = base;
        eight.exec.workers = 8;
        if (run_experiment(cfg, base).dump() != ref || run_experiment(cfg, eight).dump() != ref) {
            o.fail(experiment + ": in-process reports differ");
        }
        // Through the CLI, repeated at 1 and 8 workers, and from the echoed config.
        const auto cfg_path = dir / (std::to_string(k) + ".json");
        std::ofstream(cfg_path) << text;
        std::vector<std::string> outputs;
        for (const char* workers : {"1", "1", "8"}) {
            const auto out = dir / (std::to_string(k) + "_" + std::to_string(outputs.size()) + ".out");
            const std::string cmd = std::string(VERIFY_BINARY) + " " + experiment + " --config " + cfg_path.string() +
                                    " --workers " + workers + " --out " + out.string() + " 2>/dev/null";
            const int status = std::system(cmd.c_str());
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
                o.fail(experiment + ": CLI exit status " + std::to_string(WEXITSTATUS(status)));
            }
            outputs.push_back(strip_wall_time(slurp(out)));
        }
        const Json doc = Json::parse(outputs.front());
        const auto echo_path = dir / (std::to_string(k) + "_echo.json");
        std::ofstream(echo_path) << dump_json(doc["config"]);
        const auto echo_out = dir / (std::to_string(k) + "_echo.out");
        const std::string cmd = std::string(VERIFY_BINARY) + " " + experiment + " --config " + echo_path.string() +
                                " --workers 8 --out " + echo_out.string() + " 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) {
            o.fail(experiment + ": echoed config did not rerun cleanly");
        }
        outputs.push_back(strip_wall_time(slurp(echo_out)));
        for (const auto& out : outputs) {
            ++compared;
            if (out != outputs.front() || out.empty()) {
                o.fail(experiment + ": CLI reports differ");
            }
        }
        if (strip_wall_time(ref) != outputs.front()) {
            o.fail(experiment + ": CLI report differs from in-process report");
        }
    }
    std::filesystem::remove_all(dir);
    if (o.pass) {
        o.detail = std::to_string(runs.size()) + " experiments, " + std::to_string(compared) +
                   " CLI reports identical (wall_time excluded), in-process identical at 1/8 workers";
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    // Optional arguments select criteria by number.
    std::vector<std::size_t> only;
    for (int i = 1; i < argc; ++i) {
        only.push_back(static_cast<std::size_t>(std::stoul(argv[i])));
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"gordon_chevet_euclidean", criterion1}, {"gordon_chevet_non_euclidean", criterion2},
        {"theorem1_corollaries", criterion3},    {"slepian_hypotheses", criterion4},
        {"interpolation_monotone", criterion5},  {"smoothed_max_identities", criterion6},
        {"poincare", criterion7},                {"dvoretzky", criterion8},
        {"oracle_equivalence", criterion9},      {"reproducibility", criterion10},
    };
    int failed = 0;
    std::size_t ran = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!only.empty() && std::find(only.begin(), only.end(), i + 1) == only.end()) {
            continue;
        }
        ++ran;
        const auto start = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " " << criteria[i].first << " ("
                  << fmt(seconds_since(start)) << "s): " << o.detail << std::endl;
    }
    std::cout << (ran - static_cast<std::size_t>(failed)) << "/" << ran
              << " acceptance criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
