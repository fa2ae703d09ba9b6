#include "gcomp/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "gcomp/error.hpp"

namespace gcomp {

namespace {

constexpr int kMaxSignEnumeration = 20;

void require_supported(const NormSpec& spec, const char* role) {
    require(spec.is_l1() || spec.is_l2() || spec.is_linf(), ErrorCode::UnsupportedNorm,
            std::string(role) + " norm " + spec.describe() + " is not one of l1, l2, linf");
}

double plain_norm(const Vector& y, double p) {
    if (p == 1.0) {
        return y.lpNorm<1>();
    }
    if (p == 2.0) {
        return y.norm();
    }
    return y.size() == 0 ? 0.0 : y.lpNorm<Eigen::Infinity>();
}

/// max over s ∈ {±1}^k of ‖M·s‖₂ (M has k columns), with the maximizing s.
/// Walks a Gray code so each step is one column update.
double max_over_signs(const Matrix& m, Vector* best_signs) {
    const Eigen::Index k = m.cols();
    require(k <= kMaxSignEnumeration, ErrorCode::DimensionTooLargeForExact,
            "sign enumeration over 2^" + std::to_string(k) + " vertices exceeds 2^20");
    Vector signs = Vector::Ones(k);
    Vector image = m * signs;
    double best = image.norm();
    Vector best_s = signs;
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t step = 1; step < total; ++step) {
        const int flip = std::countr_zero(step);
        signs[flip] = -signs[flip];
        image += 2.0 * signs[flip] * m.col(flip);
        const double value = image.norm();
        if (value > best) {
            best = value;
            best_s = signs;
        }
    }
    if (best_signs != nullptr) {
        *best_signs = best_s;
    }
    return best;
}

bool lex_less(const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

/// Choose the lexicographically smaller of ±x.
Vector canonical_sign(const Vector& x) {
    const Vector neg = -x;
    return lex_less(neg, x) ? neg : x;
}

/// Problem in unweighted coordinates: ‖R·y‖_{pF} over ‖y‖_{pE} = 1, where
/// R = diag(w_F)·T·diag(w_E)⁻¹ and x = y ./ w_E.
struct ReducedProblem {
    Matrix R;
    double domain_p;
    double range_p;
    ExtremeMode mode;

    [[nodiscard]] Eigen::Index m() const { return R.cols(); }
    [[nodiscard]] double value(const Vector& y) const { return plain_norm(R * y, range_p); }
    [[nodiscard]] Vector normalize(const Vector& y) const { return y / plain_norm(y, domain_p); }
    [[nodiscard]] bool better(double a, double b) const { return mode == ExtremeMode::Max ? a > b : a < b; }
};

struct Candidate {
    double value;
    Vector point;
};

/// Keep the better candidate; equal values resolve to the lexicographically
/// smaller point.
void offer(const ReducedProblem& problem, std::optional<Candidate>& best, double value, const Vector& point) {
    if (!best || problem.better(value, best->value) || (value == best->value && lex_less(point, best->point))) {
        best = Candidate{value, point};
    }
}

// --- exact routes ----------------------------------------------------------

Candidate svd_route(const ReducedProblem& problem) {
    Eigen::JacobiSVD<Matrix> svd(problem.R, Eigen::ComputeFullV);
    const Vector sv = svd.singularValues();
    const Eigen::Index m = problem.m();
    if (problem.mode == ExtremeMode::Max) {
        return {sv[0], canonical_sign(svd.matrixV().col(0))};
    }
    const double value = m > sv.size() ? 0.0 : sv[m - 1];
    return {value, canonical_sign(svd.matrixV().col(m - 1))};
}

Candidate l1_vertices(const ReducedProblem& problem) {
    std::optional<Candidate> best;
    for (Eigen::Index i = 0; i < problem.m(); ++i) {
        for (double s : {-1.0, 1.0}) {
            Vector y = Vector::Zero(problem.m());
            y[i] = s;
            offer(problem, best, problem.value(y), y);
        }
    }
    return *best;
}

Candidate linf_vertices(const ReducedProblem& problem) {
    const Eigen::Index m = problem.m();
    require(m <= kMaxSignEnumeration, ErrorCode::DimensionTooLargeForExact, "too many cube vertices");
    std::optional<Candidate> best;
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        Vector y(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            y[i] = ((mask >> i) & 1U) != 0 ? 1.0 : -1.0;
        }
        offer(problem, best, problem.value(y), y);
    }
    return *best;
}

Candidate max_row_route(const ReducedProblem& problem) {
    std::optional<Candidate> best;
    for (Eigen::Index i = 0; i < problem.R.rows(); ++i) {
        const double len = problem.R.row(i).norm();
        if (len == 0.0) {
            continue;
        }
        const Vector y = canonical_sign(problem.R.row(i).transpose() / len);
        offer(problem, best, problem.value(y), y);
    }
    return *best;
}

Candidate max_dual_sign_route(const ReducedProblem& problem) {
    Vector signs;
    const Matrix rt = problem.R.transpose();
    max_over_signs(rt, &signs);
    const Vector direction = rt * signs;
    const Vector y = canonical_sign(direction / direction.norm());
    return {problem.value(y), y};
}

/// Exact min of ‖R y‖₂ over the ℓ₁ sphere. Each candidate fixes a support S
/// with signs and solves the KKT system of min ‖Σ sᵢyᵢrᵢ‖² s.t. Σyᵢ = 1;
/// rank-deficient supports are skipped because an optimum then also exists
/// on a smaller support.
Candidate l1_min_route(const ReducedProblem& problem) {
    const Eigen::Index m = problem.m();
    std::optional<Candidate> best;
    std::vector<int> pattern(static_cast<std::size_t>(m), 0);  // -1, 0, +1
    std::uint64_t total = 1;
    for (Eigen::Index i = 0; i < m; ++i) {
        total *= 3;
    }
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        std::vector<Eigen::Index> support;
        for (Eigen::Index i = 0; i < m; ++i) {
            pattern[static_cast<std::size_t>(i)] = static_cast<int>(c % 3) - 1;
            c /= 3;
            if (pattern[static_cast<std::size_t>(i)] != 0) {
                support.push_back(i);
            }
        }
        if (support.empty()) {
            continue;
        }
        const auto k = static_cast<Eigen::Index>(support.size());
        Matrix b(problem.R.rows(), k);
        for (Eigen::Index j = 0; j < k; ++j) {
            b.col(j) = pattern[static_cast<std::size_t>(support[j])] * problem.R.col(support[j]);
        }
        Matrix kkt = Matrix::Zero(k + 1, k + 1);
        kkt.topLeftCorner(k, k) = 2.0 * b.transpose() * b;
        kkt.block(0, k, k, 1).setOnes();
        kkt.block(k, 0, 1, k).setOnes();
        Vector rhs = Vector::Zero(k + 1);
        rhs[k] = 1.0;
        Eigen::FullPivLU<Matrix> lu(kkt);
        if (lu.rank() < k + 1) {
            continue;
        }
        Vector sol = lu.solve(rhs).head(k);
        if (sol.minCoeff() < -1e-10) {
            continue;
        }
        sol = sol.cwiseMax(0.0);
        sol /= sol.sum();
        Vector y = Vector::Zero(m);
        for (Eigen::Index j = 0; j < k; ++j) {
            y[support[j]] = pattern[static_cast<std::size_t>(support[j])] * sol[j];
        }
        offer(problem, best, problem.value(y), y);
    }
    return *best;
}

/// Exact min of ‖R y‖₂ over the ℓ∞ sphere: every coordinate is pinned at ±1
/// or free (at least one pinned); free coordinates solve a least-squares
/// problem and must stay inside [-1, 1].
Candidate linf_min_route(const ReducedProblem& problem) {
    const Eigen::Index m = problem.m();
    std::optional<Candidate> best;
    std::uint64_t total = 1;
    for (Eigen::Index i = 0; i < m; ++i) {
        total *= 3;
    }
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        Vector y = Vector::Zero(m);
        std::vector<Eigen::Index> free_coords;
        for (Eigen::Index i = 0; i < m; ++i) {
            const int state = static_cast<int>(c % 3) - 1;
            c /= 3;
            if (state == 0) {
                free_coords.push_back(i);
            } else {
                y[i] = state;
            }
        }
        const auto k = static_cast<Eigen::Index>(free_coords.size());
        if (k == m) {
            continue;
        }
        if (k > 0) {
            Matrix b(problem.R.rows(), k);
            for (Eigen::Index j = 0; j < k; ++j) {
                b.col(j) = problem.R.col(free_coords[j]);
            }
            Eigen::ColPivHouseholderQR<Matrix> qr(b);
            if (qr.rank() < k) {
                continue;
            }
            const Vector z = qr.solve(-(problem.R * y));
            if (z.cwiseAbs().maxCoeff() > 1.0 + 1e-10) {
                continue;
            }
            for (Eigen::Index j = 0; j < k; ++j) {
                y[free_coords[j]] = std::clamp(z[j], -1.0, 1.0);
            }
        }
        offer(problem, best, problem.value(y), y);
    }
    return *best;
}

// --- net oracle ------------------------------------------------------------

double range_operator_bound(const Matrix& r, double range_p) {
    if (range_p == 2.0) {
        return r.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(r).singularValues()[0];
    }
    if (range_p == kInfinity) {
        return r.rowwise().norm().maxCoeff();
    }
    return r.rowwise().norm().sum();
}

double plain_euclidean_lipschitz(double p, Eigen::Index m) {
    return p == 1.0 ? std::sqrt(static_cast<double>(m)) : 1.0;
}

double plain_euclidean_radius(double p, Eigen::Index m) {
    return p == kInfinity ? std::sqrt(static_cast<double>(m)) : 1.0;
}

struct NetResult {
    Candidate best;
    bool certified;
};

/// Branch-and-bound over the surface of [-1,1]^m, radially projected onto the
/// domain sphere. h(c) = ‖Rc‖/‖c‖_E is Lipschitz on the cube surface with
/// constant ‖R‖_{2→F}(1 + ρ_E ν_E) since ‖c‖_E ≥ 1 there; cells whose bound
/// cannot beat the incumbent by more than `tolerance` are discarded.
NetResult net_oracle(const ReducedProblem& problem, double tolerance) {
    const Eigen::Index m = problem.m();
    require(m <= 3, ErrorCode::DimensionTooLargeForExact, "net oracle supports domain dimension ≤ 3");
    if (m == 1) {
        return {l1_vertices(problem), true};
    }
    const double lipschitz = range_operator_bound(problem.R, problem.range_p) *
                             (1.0 + plain_euclidean_radius(problem.domain_p, m) *
                                        plain_euclidean_lipschitz(problem.domain_p, m));
    const Eigen::Index free_dims = m - 1;
    const double diameter_factor = std::sqrt(static_cast<double>(free_dims));
    const double sense = problem.mode == ExtremeMode::Max ? -1.0 : 1.0;  // minimize sense·h

    struct Cell {
        double bound;
        int face;
        double half;
        Vector center;  // free coordinates
    };
    auto cmp = [](const Cell& a, const Cell& b) { return a.bound > b.bound; };
    std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> queue(cmp);
    std::optional<Candidate> best;

    auto embed = [&](int face, const Vector& free) {
        const Eigen::Index fixed = face / 2;
        Vector c(m);
        Eigen::Index j = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            c[i] = i == fixed ? (face % 2 == 0 ? -1.0 : 1.0) : free[j++];
        }
        return c;
    };
    auto push = [&](int face, double half, const Vector& center) {
        const Vector y = problem.normalize(embed(face, center));
        const double value = problem.value(y);
        offer(problem, best, value, y);
        queue.push({sense * value - lipschitz * half * diameter_factor, face, half, center});
    };

    constexpr int kInitialGrid = 8;
    const double initial_half = 1.0 / kInitialGrid;
    for (int face = 0; face < 2 * m; ++face) {
        std::vector<int> idx(static_cast<std::size_t>(free_dims), 0);
        while (true) {
            Vector center(free_dims);
            for (Eigen::Index j = 0; j < free_dims; ++j) {
                center[j] = -1.0 + (2 * idx[static_cast<std::size_t>(j)] + 1) * initial_half;
            }
            push(face, initial_half, center);
            Eigen::Index j = 0;
            while (j < free_dims && ++idx[static_cast<std::size_t>(j)] == kInitialGrid) {
                idx[static_cast<std::size_t>(j)] = 0;
                ++j;
            }
            if (j == free_dims) {
                break;
            }
        }
    }

    constexpr std::size_t kMaxEvaluations = 4'000'000;
    std::size_t evaluations = 0;
    bool certified = true;
    while (!queue.empty()) {
        const Cell cell = queue.top();
        if (cell.bound >= sense * best->value - tolerance) {
            break;
        }
        queue.pop();
        if (evaluations > kMaxEvaluations) {
            certified = false;
            break;
        }
        const double half = 0.5 * cell.half;
        const auto children = std::uint64_t{1} << free_dims;
        for (std::uint64_t mask = 0; mask < children; ++mask) {
            Vector center = cell.center;
            for (Eigen::Index j = 0; j < free_dims; ++j) {
                center[j] += ((mask >> j) & 1U) != 0 ? half : -half;
            }
            push(cell.face, half, center);
            ++evaluations;
        }
    }
    return {*best, certified};
}

// --- heuristic -------------------------------------------------------------

Vector value_subgradient(const ReducedProblem& problem, const Vector& y) {
    const Vector image = problem.R * y;
    return problem.R.transpose() * subgradient(NormSpec::lp(problem.range_p, static_cast<int>(image.size())), image);
}

struct LocalResult {
    Candidate best;
    bool converged;
};

LocalResult local_search(const ReducedProblem& problem, Vector y, int iterations) {
    const double direction = problem.mode == ExtremeMode::Max ? 1.0 : -1.0;
    y = problem.normalize(y);
    Candidate best{problem.value(y), y};

    auto step = [&](const Vector& current, double size) -> std::optional<Vector> {
        const Vector g = value_subgradient(problem, current);
        const double len = g.norm();
        if (len == 0.0) {
            return std::nullopt;
        }
        const Vector moved = current + direction * size * g / len;
        if (plain_norm(moved, problem.domain_p) == 0.0) {
            return std::nullopt;
        }
        return problem.normalize(moved);
    };

    // Projected subgradient with step 1/√k, keeping the best iterate.
    for (int k = 1; k <= iterations; ++k) {
        const auto next = step(y, 1.0 / std::sqrt(static_cast<double>(k)));
        if (!next) {
            break;
        }
        y = *next;
        const double value = problem.value(y);
        if (problem.better(value, best.value)) {
            best = {value, y};
        }
    }

    // Polish from the best iterate with geometrically shrinking steps.
    y = best.point;
    double size = 0.05;
    for (int k = 0; k < 400; ++k, size *= 0.95) {
        const auto next = step(y, size);
        if (!next) {
            break;
        }
        y = *next;
        const double value = problem.value(y);
        if (problem.better(value, best.value)) {
            best = {value, y};
        }
    }

    // Pattern search along coordinate and pairwise-diagonal directions.
    const Eigen::Index m = problem.m();
    std::vector<Vector> directions;
    for (Eigen::Index i = 0; i < m; ++i) {
        directions.push_back(Vector::Unit(m, i));
        for (Eigen::Index j = i + 1; j < m; ++j) {
            directions.push_back((Vector::Unit(m, i) + Vector::Unit(m, j)) / std::sqrt(2.0));
            directions.push_back((Vector::Unit(m, i) - Vector::Unit(m, j)) / std::sqrt(2.0));
        }
    }
    double delta = 1e-2;
    int budget = 20000;
    while (delta > 1e-11 && budget > 0) {
        bool improved = false;
        for (const auto& dir : directions) {
            for (double s : {1.0, -1.0}) {
                --budget;
                const Vector trial_raw = best.point + s * delta * dir;
                if (plain_norm(trial_raw, problem.domain_p) == 0.0) {
                    continue;
                }
                const Vector trial = problem.normalize(trial_raw);
                const double value = problem.value(trial);
                if (problem.better(value, best.value)) {
                    best = {value, trial};
                    improved = true;
                }
            }
        }
        if (!improved) {
            delta *= 0.5;
        }
    }
    return {best, delta <= 1e-11};
}

struct HeuristicResult {
    Candidate best;
    bool converged;
};

HeuristicResult heuristic_route(const ReducedProblem& problem, const ExtremizeOptions& options) {
    require(options.starts >= 1 && options.iterations >= 1, ErrorCode::InvalidArgument,
            "heuristic needs at least one start and one iteration");
    const auto starts = static_cast<std::size_t>(options.starts);
    std::vector<LocalResult> results(starts, LocalResult{{0.0, Vector()}, true});
    parallel_for(starts, options.workers, [&](std::size_t k) {
        Engine engine = options.stream.engine(k);
        Vector y = engine.normal_vector(problem.m());
        while (y.norm() == 0.0) {
            y = engine.normal_vector(problem.m());
        }
        results[k] = local_search(problem, y, options.iterations);
    });
    std::optional<Candidate> best;
    bool converged = true;
    for (const auto& r : results) {
        offer(problem, best, r.best.value, r.best.point);
    }
    for (const auto& r : results) {
        if (r.best.value == best->value) {
            converged = converged && r.converged;
        }
    }
    return {*best, converged};
}

}  // namespace

std::string to_string(ExtremeMode mode) {
    return mode == ExtremeMode::Max ? "max" : "min";
}

void RandomOperatorSpec::validate() const {
    require(v_matrix.rows() > 0 && v_matrix.cols() > 0 && u_matrix.rows() > 0 && u_matrix.cols() > 0,
            ErrorCode::DimensionMismatch, "operator factors must be non-empty");
    require(domain_norm.dim() == m(), ErrorCode::DimensionMismatch, "domain norm dimension differs from v columns");
    require(range_norm.dim() == D(), ErrorCode::DimensionMismatch, "range norm dimension differs from u rows");
    require(v_matrix.allFinite() && u_matrix.allFinite(), ErrorCode::NonFiniteEntries, "operator has non-finite entries");
}

double epsilon2_domain(const Matrix& v_matrix, const NormSpec& domain_norm) {
    require_supported(domain_norm, "domain");
    require(v_matrix.cols() == domain_norm.dim(), ErrorCode::DimensionMismatch,
            "v_matrix columns differ from the domain dimension");
    const Matrix reduced = v_matrix * domain_norm.weights().cwiseInverse().asDiagonal();
    if (reduced.size() == 0) {
        return 0.0;
    }
    if (domain_norm.is_l2()) {
        return spectral_norm(reduced);
    }
    if (domain_norm.is_l1()) {
        return reduced.colwise().norm().maxCoeff();
    }
    return max_over_signs(reduced, nullptr);
}

double epsilon2_range(const Matrix& u_matrix, const NormSpec& range_norm) {
    require_supported(range_norm, "range");
    require(u_matrix.rows() == range_norm.dim(), ErrorCode::DimensionMismatch,
            "u_matrix rows differ from the range dimension");
    const Matrix reduced = range_norm.weights().asDiagonal() * u_matrix;
    if (reduced.size() == 0) {
        return 0.0;
    }
    if (range_norm.is_l2()) {
        return spectral_norm(reduced);
    }
    if (range_norm.is_linf()) {
        return reduced.rowwise().norm().maxCoeff();
    }
    return max_over_signs(reduced.transpose(), nullptr);
}

double spectral_norm(const Matrix& m) {
    require(m.allFinite(), ErrorCode::NonFiniteEntries, "matrix has non-finite entries");
    if (m.size() == 0) {
        return 0.0;
    }
    return Eigen::JacobiSVD<Matrix>(m).singularValues()[0];
}

Matrix realize_with_core(const RandomOperatorSpec& spec, const Matrix& core) {
    require(core.rows() == spec.n() && core.cols() == spec.d(), ErrorCode::DimensionMismatch,
            "Gaussian core must be n×d");
    return spec.u_matrix * core.transpose() * spec.v_matrix;
}

Matrix realize(const RandomOperatorSpec& spec, const SeedStream& stream) {
    spec.validate();
    Engine engine = stream.engine();
    return realize_with_core(spec, engine.normal_matrix(spec.n(), spec.d()));
}

ExtremizationResult sphere_extremize(const Matrix& T, const NormSpec& domain_norm, const NormSpec& range_norm,
                                     ExtremeMode mode, const ExtremizeOptions& options) {
    require_supported(domain_norm, "domain");
    require_supported(range_norm, "range");
    require(T.cols() == domain_norm.dim() && T.rows() == range_norm.dim(), ErrorCode::DimensionMismatch,
            "operator shape does not match the norm dimensions");
    require(T.allFinite(), ErrorCode::NonFiniteEntries, "operator has non-finite entries");

    const Vector inv_w = domain_norm.weights().cwiseInverse();
    ReducedProblem problem{range_norm.weights().asDiagonal() * T * inv_w.asDiagonal(), domain_norm.p(),
                           range_norm.p(), mode};
    const Eigen::Index m = problem.m();

    Candidate found{0.0, Vector::Unit(m, 0)};
    bool certified = true;
    bool converged = true;
    std::string route;

    const bool l2_pair = problem.domain_p == 2.0 && problem.range_p == 2.0;
    if (options.method == ExtremizeMethod::Heuristic) {
        const auto h = heuristic_route(problem, options);
        found = h.best;
        certified = false;
        converged = h.converged;
        route = "heuristic";
    } else if (options.method == ExtremizeMethod::NetOracle) {
        const auto net = net_oracle(problem, options.net_tolerance);
        found = net.best;
        certified = net.certified;
        route = "net_oracle";
    } else if (problem.R.isZero(0.0)) {
        route = "zero_operator";
    } else if (l2_pair) {
        found = svd_route(problem);
        route = "svd";
    } else if (mode == ExtremeMode::Max && problem.domain_p == 1.0) {
        found = l1_vertices(problem);
        route = "vertices";
    } else if (mode == ExtremeMode::Max && problem.domain_p == kInfinity && m <= kMaxSignEnumeration) {
        found = linf_vertices(problem);
        route = "vertices";
    } else if (mode == ExtremeMode::Max && problem.domain_p == 2.0 && problem.range_p == kInfinity) {
        found = max_row_route(problem);
        route = "dual_vertices";
    } else if (mode == ExtremeMode::Max && problem.domain_p == 2.0 && problem.range_p == 1.0 &&
               problem.R.rows() <= kMaxSignEnumeration) {
        found = max_dual_sign_route(problem);
        route = "dual_vertices";
    } else if (mode == ExtremeMode::Min && problem.range_p == 2.0 && problem.domain_p == 1.0 && m <= 12) {
        found = l1_min_route(problem);
        route = "facet_qp";
    } else if (mode == ExtremeMode::Min && problem.range_p == 2.0 && problem.domain_p == kInfinity && m <= 10) {
        found = linf_min_route(problem);
        route = "facet_qp";
    } else if (m <= 3) {
        const auto net = net_oracle(problem, options.net_tolerance);
        found = net.best;
        certified = net.certified;
        route = "net_oracle";
    } else {
        const auto h = heuristic_route(problem, options);
        found = h.best;
        certified = false;
        converged = h.converged;
        route = "heuristic";
    }

    ExtremizationResult result;
    Vector x = inv_w.cwiseProduct(found.point);
    x /= norm_eval(domain_norm, x);
    result.argpoint = x;
    result.value = route == "zero_operator" ? 0.0 : norm_eval(range_norm, T * x);
    result.mode = mode;
    result.certified = certified;
    result.converged = converged;
    result.route = route;
    return result;
}

}  // namespace gcomp
