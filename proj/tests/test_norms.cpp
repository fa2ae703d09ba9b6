#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gcomp/error.hpp"
#include "gcomp/norms.hpp"

using namespace gcomp;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const double x : xs) {
        v[i++] = x;
    }
    return v;
}

std::vector<NormSpec> sample_norms(int dim, Engine& e) {
    Vector w(dim);
    for (int i = 0; i < dim; ++i) {
        w[i] = 0.2 + e.uniform();
    }
    return {NormSpec::l1(dim),
            NormSpec::l2(dim),
            NormSpec::linf(dim),
            NormSpec::lp(3.0, dim),
            NormSpec::lp(1.5, dim),
            NormSpec::weighted_lp(1.0, w),
            NormSpec::weighted_lp(2.0, w),
            NormSpec::weighted_lp(kInfinity, w),
            NormSpec::euclidean_scaled(0.5, dim)};
}

}  // namespace

TEST(NormEval, Examples) {
    EXPECT_DOUBLE_EQ(norm_eval(NormSpec::l2(2), vec({3, 4})), 5.0);
    EXPECT_DOUBLE_EQ(norm_eval(NormSpec::linf(2), vec({3, -4})), 4.0);
    EXPECT_DOUBLE_EQ(norm_eval(NormSpec::l1(3), vec({1, 1, 1})), 3.0);
    EXPECT_THROW((void)norm_eval(NormSpec::l1(3), vec({1, 1})), Error);
}

TEST(DualNormEval, Examples) {
    EXPECT_DOUBLE_EQ(dual_norm_eval(NormSpec::l1(2), vec({3, -4})), 4.0);
    EXPECT_DOUBLE_EQ(dual_norm_eval(NormSpec::l2(2), vec({3, 4})), 5.0);
    EXPECT_DOUBLE_EQ(dual_norm_eval(NormSpec::linf(2), vec({1, 1})), 2.0);
    EXPECT_TRUE(NormSpec::l1(2).dual().is_linf());
}

TEST(Subgradient, Examples) {
    EXPECT_TRUE(subgradient(NormSpec::l2(2), vec({3, 4})).isApprox(vec({0.6, 0.8})));
    EXPECT_EQ(subgradient(NormSpec::l1(2), vec({1, -2})), vec({1, -1}));
    EXPECT_EQ(subgradient(NormSpec::l2(2), vec({0, 0})), vec({0, 0}));
    // ℓ∞ kink: the smallest index wins.
    EXPECT_EQ(subgradient(NormSpec::linf(3), vec({2, -2, 1})), vec({1, 0, 0}));
    EXPECT_EQ(subgradient(NormSpec::l1(3), vec({0, 2, 0})), vec({0, 1, 0}));
}

TEST(LipschitzEval, Examples) {
    const auto lin = LipschitzFn::linear(vec({1, 0}));
    EXPECT_DOUBLE_EQ(lipschitz_eval(lin, vec({2, 5})), 2.0);
    EXPECT_DOUBLE_EQ(lin.lipschitz_constant(), 1.0);

    const auto centered = LipschitzFn::centered_abs(LipschitzFn::norm(NormSpec::l2(2)), 1.2533);
    EXPECT_DOUBLE_EQ(lipschitz_eval(centered, vec({0, 0})), 1.2533);

    const auto scaled = LipschitzFn::norm_with_constant(NormSpec::l2(2), 3.0);
    EXPECT_DOUBLE_EQ(lipschitz_eval(scaled, vec({1, 0})), 3.0);
    EXPECT_DOUBLE_EQ(scaled.lipschitz_constant(), 3.0);
    EXPECT_TRUE(scaled.is_euclidean_norm());
}

TEST(EuclideanLipschitz, ClosedForms) {
    EXPECT_NEAR(NormSpec::l1(4).euclidean_lipschitz(), 2.0, 1e-15);
    EXPECT_NEAR(NormSpec::linf(4).euclidean_lipschitz(), 1.0, 1e-15);
    EXPECT_NEAR(NormSpec::l2(4).euclidean_lipschitz(), 1.0, 1e-15);
    EXPECT_NEAR(NormSpec::l1(4).euclidean_radius(), 1.0, 1e-15);
    EXPECT_NEAR(NormSpec::linf(4).euclidean_radius(), 2.0, 1e-15);
}

TEST(NormProperties, HomogeneityTriangleDuality) {
    Engine e(31);
    for (int dim : {1, 2, 3, 5}) {
        for (const auto& spec : sample_norms(dim, e)) {
            for (int k = 0; k < 500; ++k) {
                const Vector x = e.normal_vector(dim);
                const Vector y = e.normal_vector(dim);
                const double c = 3.0 * e.normal();
                const double nx = norm_eval(spec, x);
                EXPECT_NEAR(norm_eval(spec, c * x), std::abs(c) * nx, 1e-12 * (1.0 + std::abs(c) * nx));
                EXPECT_LE(norm_eval(spec, x + y), nx + norm_eval(spec, y) + 1e-12);
                EXPECT_LE(std::abs(x.dot(y)), nx * dual_norm_eval(spec, y) + 1e-12);
                EXPECT_NEAR(norm_eval(spec.dual(), y), dual_norm_eval(spec, y), 1e-12 * (1.0 + norm_eval(spec.dual(), y)));
            }
        }
    }
}

TEST(NormProperties, SubgradientContract) {
    Engine e(32);
    for (int dim : {1, 2, 4, 6}) {
        for (const auto& spec : sample_norms(dim, e)) {
            for (int k = 0; k < 500; ++k) {
                const Vector v = e.normal_vector(dim);
                const Vector g = subgradient(spec, v);
                EXPECT_NEAR(g.dot(v), norm_eval(spec, v), 1e-10 * (1.0 + norm_eval(spec, v))) << spec.describe();
                EXPECT_LE(g.norm(), spec.euclidean_lipschitz() + 1e-10) << spec.describe();
                EXPECT_LE(dual_norm_eval(spec, g), 1.0 + 1e-10) << spec.describe();
            }
        }
    }
}

TEST(LipschitzProperties, EmpiricalRatioBounded) {
    Engine e(33);
    const int dim = 4;
    std::vector<LipschitzFn> fns;
    for (const auto& spec : sample_norms(dim, e)) {
        fns.push_back(LipschitzFn::norm(spec, 0.7));
        fns.push_back(LipschitzFn::negated_norm(spec));
        fns.push_back(LipschitzFn::centered_abs(LipschitzFn::norm(spec), 1.1));
    }
    fns.push_back(LipschitzFn::linear(e.normal_vector(dim)));
    fns.push_back(LipschitzFn::distance_to_point(e.normal_vector(dim)));
    for (const auto& f : fns) {
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const Vector x = e.normal_vector(dim);
            const Vector y = (k % 2 == 0) ? Vector(x + 1e-3 * e.normal_vector(dim)) : e.normal_vector(dim);
            const double d = (x - y).norm();
            if (d > 0.0) {
                worst = std::max(worst, std::abs(f(x) - f(y)) / d);
            }
        }
        EXPECT_LE(worst, f.lipschitz_constant() + 1e-9) << f.describe();
    }
}

TEST(LipschitzProperties, GradientMatchesFiniteDifferences) {
    Engine e(34);
    const auto f = LipschitzFn::norm(NormSpec::lp(3.0, 3), 2.0);
    for (int k = 0; k < 50; ++k) {
        const Vector x = e.normal_vector(3);
        const Vector g = f.gradient(x);
        for (int i = 0; i < 3; ++i) {
            const Vector h = 1e-6 * Vector::Unit(3, i);
            EXPECT_NEAR(g[i], (f(x + h) - f(x - h)) / 2e-6, 1e-5);
        }
    }
}

TEST(NormDomination, EuclideanDominatedNormsPass) {
    EXPECT_NO_THROW(validate_dominated_by_euclidean(NormSpec::linf(5), SeedStream{1, 0, 0}));
    EXPECT_NO_THROW(validate_dominated_by_euclidean(NormSpec::l2(5), SeedStream{1, 0, 0}));
    EXPECT_NO_THROW(validate_dominated_by_euclidean(NormSpec::euclidean_scaled(1.0 / std::sqrt(2.0), 5), SeedStream{1, 0, 0}));
    try {
        validate_dominated_by_euclidean(NormSpec::l1(3), SeedStream{1, 0, 0});
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::NormDominationViolation);
    }
}

TEST(NormSpec, InvalidInputsRejected) {
    EXPECT_THROW((void)NormSpec::lp(0.5, 2), Error);
    EXPECT_THROW((void)NormSpec::lp(2.0, 0), Error);
    EXPECT_THROW((void)NormSpec::weighted_lp(2.0, vec({1, -1})), Error);
}
