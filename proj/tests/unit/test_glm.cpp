#include "enroll/error.hpp"
#include "enroll/glm/linalg.hpp"
#include "enroll/glm/model.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace enroll;
using namespace enroll::glm;
using tabular::DesignMatrix;

namespace {

DesignMatrix intercept_only(std::size_t positives, std::size_t negatives)
{
    std::vector<std::vector<double>> rows(positives + negatives);
    std::vector<double> y(positives + negatives, 0.0);
    std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(positives), 1.0);
    return DesignMatrix::from_rows(rows, y);
}

} // namespace

TEST(Sigmoid, SymmetryAndSaturation)
{
    EXPECT_EQ(sigmoid(0.0), 0.5);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const double z = (rng.uniform() - 0.5) * 80;
        EXPECT_NEAR(sigmoid(-z), 1.0 - sigmoid(z), 1e-15);
    }
    const double big = sigmoid(800.0);
    EXPECT_GT(big, 1.0 - 1e-12);
    EXPECT_LE(big, 1.0);
    EXPECT_FALSE(std::isnan(sigmoid(-800.0)));
    EXPECT_GE(sigmoid(-800.0), 0.0);
}

TEST(Objective, ZeroWeightsGiveNLn2)
{
    Rng rng(2);
    const auto dm = fixture::random_design(rng, 57, 3);
    const std::vector<double> zero(4, 0.0);
    EXPECT_NEAR(penalized_nll(zero, dm, 0.0), 57 * std::log(2.0), 1e-10);
    EXPECT_EQ(penalized_nll(zero, dm, 3.0), penalized_nll(zero, dm, 0.0));
}

TEST(Objective, SeparableFitLeavesMostlyPenalty)
{
    // x = +-1 separates the classes; at large weight the data term vanishes
    const auto dm = DesignMatrix::from_rows({ { -1 }, { -1 }, { 1 }, { 1 } }, { 0, 0, 1, 1 });
    const std::vector<double> w { 0.0, 40.0 };
    const double ridge = 0.01;
    const double penalty = 0.5 * ridge * 40.0 * 40.0;
    // 4 rows at the 1e-12 probability clamp
    EXPECT_NEAR(penalized_nll(w, dm, ridge), penalty, 1e-10);
}

TEST(Objective, DimensionMismatch)
{
    Rng rng(3);
    const auto dm = fixture::random_design(rng, 10, 2);
    const std::vector<double> w(5, 0.0);
    EXPECT_THROW(penalized_nll(w, dm, 0.0), Error);
    EXPECT_THROW(gradient(w, dm, 0.0), Error);
    EXPECT_THROW(hessian(w, dm, 0.0), Error);
}

TEST(Gradient, SymmetricBalancedDataHasZeroInterceptComponent)
{
    const auto dm = DesignMatrix::from_rows({ { -1 }, { 1 }, { -1 }, { 1 } }, { 0, 0, 1, 1 });
    const auto g = gradient(std::vector<double>(2, 0.0), dm, 0.5);
    EXPECT_EQ(g[0], 0.0);
}

TEST(Gradient, ResidualFreeRowLeavesOnlyPenalty)
{
    // single row with p = y is unreachable exactly; with y = 1 and huge z the
    // residual underflows to zero
    const auto dm = DesignMatrix::from_rows({ { 2.0 } }, { 1.0 });
    const std::vector<double> w { 400.0, 300.0 };
    const auto g = gradient(w, dm, 0.1);
    EXPECT_DOUBLE_EQ(g[0], 0.0);
    EXPECT_DOUBLE_EQ(g[1], 0.1 * 300.0);
}

TEST(Gradient, MatchesFiniteDifferences)
{
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + rng.below(196), d = 1 + rng.below(8);
        const auto dm = fixture::random_design(rng, n, d);
        std::vector<double> w(d + 1);
        for (auto& x : w)
            x = fixture::gaussianish(rng) * 0.7;
        const double ridge = rng.uniform() < 0.3 ? 0.0 : rng.uniform() * 2;
        const auto fd = oracle::fd_gradient(
            [&](const std::vector<double>& v) { return static_cast<double>(oracle::nll(v, dm, ridge)); }, w);
        EXPECT_LT(oracle::relative_error(gradient(w, dm, ridge), fd), 1e-6) << "trial " << trial;
    }
}

TEST(Hessian, ZeroWeightsQuarterGram)
{
    Rng rng(5);
    const auto dm = fixture::random_design(rng, 31, 3);
    const double ridge = 0.7;
    const auto h = hessian(std::vector<double>(4, 0.0), dm, ridge);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
            double s = 0;
            for (std::size_t i = 0; i < dm.rows(); ++i)
                s += dm.at(i, j) * dm.at(i, k);
            const double expect = 0.25 * s + (j == k && j > 0 ? ridge : 0.0);
            EXPECT_NEAR(h[j * 4 + k], expect, 1e-12);
        }
}

TEST(Hessian, SymmetricAndMatchesFiniteDifferencesOfGradient)
{
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + rng.below(196), d = 1 + rng.below(8);
        const auto dm = fixture::random_design(rng, n, d);
        std::vector<double> w(d + 1);
        for (auto& x : w)
            x = fixture::gaussianish(rng) * 0.7;
        const double ridge = rng.uniform() * 2;
        const auto h = hessian(w, dm, ridge);
        for (std::size_t j = 0; j <= d; ++j)
            for (std::size_t k = 0; k <= d; ++k)
                ASSERT_EQ(h[j * (d + 1) + k], h[k * (d + 1) + j]);
        const auto fd = oracle::fd_jacobian([&](const std::vector<double>& v) { return gradient(v, dm, ridge); }, w);
        EXPECT_LT(oracle::relative_error(h, fd), 1e-5) << "trial " << trial;
    }
}

TEST(Cholesky, SolvesAndDetectsIndefinite)
{
    const std::vector<double> a { 4, 2, 2, 3 };
    const auto l = cholesky(a, 2);
    ASSERT_TRUE(l.has_value());
    const auto x = cholesky_solve(*l, 2, std::vector<double> { 2, 1 });
    EXPECT_NEAR(4 * x[0] + 2 * x[1], 2, 1e-14);
    EXPECT_NEAR(2 * x[0] + 3 * x[1], 1, 1e-14);
    EXPECT_FALSE(cholesky(std::vector<double> { 1, 2, 2, 1 }, 2).has_value());
    EXPECT_FALSE(cholesky(std::vector<double> { 1, 1, 1, 1 }, 2).has_value());
}

TEST(Fit, InterceptOnlyRecoversLogOdds)
{
    FitConfig cfg;
    cfg.ridge = 0.0;
    const auto m = fit(intercept_only(75, 25), cfg);
    EXPECT_TRUE(m.converged());
    EXPECT_NEAR(m.weights()[0], std::log(3.0), 1e-6);
}

TEST(Fit, SeparableWithRidgeConvergesToFiniteOptimum)
{
    const auto dm = DesignMatrix::from_rows({ { -2 }, { -1 }, { 1 }, { 2 } }, { 0, 0, 1, 1 });
    FitConfig cfg;
    cfg.ridge = 0.1;
    const auto m = fit(dm, cfg);
    EXPECT_TRUE(m.converged());
    for (double w : m.weights())
        EXPECT_TRUE(std::isfinite(w));
    // grid search oracle: nothing on a coarse grid beats the fitted loss
    const double at_fit = static_cast<double>(oracle::nll(m.weights(), dm, 0.1));
    EXPECT_LT(at_fit, static_cast<double>(oracle::nll({ 0.0, 0.0 }, dm, 0.1)));
    for (double b0 = -3; b0 <= 3; b0 += 0.25)
        for (double b1 = 0; b1 <= 15; b1 += 0.25)
            EXPECT_GE(static_cast<double>(oracle::nll({ b0, b1 }, dm, 0.1)), at_fit - 1e-12);
}

TEST(Fit, AgreesWithGradientDescentAndRecoversTruth)
{
    Rng rng(7);
    const std::vector<double> beta { -1.0, 0.8, -0.5 };
    const auto dm = fixture::random_design(rng, 10000, 2, beta);
    FitConfig cfg;
    cfg.ridge = 0.0;
    const auto m = fit(dm, cfg);
    ASSERT_TRUE(m.converged());
    const auto gd = oracle::gradient_descent_fit(dm, 0.0, 4000);
    const auto se = oracle::standard_errors(m.weights(), dm);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(m.weights()[j], gd[j], 1e-4);
        EXPECT_LT(std::abs(m.weights()[j] - beta[j]), 3 * se[j]) << "coefficient " << j;
    }
}

TEST(Fit, DegenerateLabelsNeedRidge)
{
    const auto dm = intercept_only(10, 0);
    FitConfig cfg;
    cfg.ridge = 0.0;
    try {
        fit(dm, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateLabels);
    }
    cfg.ridge = 1.0;
    const auto model = fit(dm, cfg);
    EXPECT_FALSE(model.converged());
    EXPECT_GT(model.weights()[0], 10.0);
}

TEST(Fit, CollinearFeaturesSingularWithoutRidgeButFineWithIt)
{
    Rng rng(8);
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 100; ++i) {
        const double x = fixture::gaussianish(rng);
        rows.push_back({ x, x });
        y.push_back(rng.uniform() < 1 / (1 + std::exp(-x)) ? 1.0 : 0.0);
    }
    const auto dm = DesignMatrix::from_rows(rows, y);
    FitConfig cfg;
    cfg.ridge = 0.0;
    try {
        fit(dm, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
    }
    cfg.ridge = 0.5;
    const auto m = fit(dm, cfg);
    EXPECT_TRUE(m.converged());
    EXPECT_NEAR(m.weights()[1], m.weights()[2], 1e-8);
}

TEST(Fit, DeterministicAndLossNonIncreasing)
{
    Rng rng(9);
    const auto dm = fixture::random_design(rng, 300, 5, { 0.3, 1.0, -1.0, 0.5, 0.0, 2.0 });
    const auto a = fit(dm);
    const auto b = fit(dm);
    EXPECT_EQ(a, b);
    EXPECT_LE(a.final_loss(), penalized_nll(std::vector<double>(6, 0.0), dm, FitConfig {}.ridge));
    // gradient at the optimum is tiny
    EXPECT_LT(oracle::norm(gradient(a.weights(), dm, FitConfig {}.ridge)), 1e-6);
}

TEST(Fit, IterationCapReportsNonConvergence)
{
    Rng rng(10);
    const auto dm = fixture::random_design(rng, 200, 3, { 0.0, 1.0, 1.0, 1.0 });
    FitConfig cfg;
    cfg.max_iterations = 1;
    const auto m = fit(dm, cfg);
    EXPECT_FALSE(m.converged());
    EXPECT_EQ(m.iterations_used(), 1);
}

TEST(Fit, ConfigValidation)
{
    const auto dm = intercept_only(3, 3);
    for (auto mutate : std::vector<std::function<void(FitConfig&)>> {
             [](FitConfig& c) { c.ridge = -1; },
             [](FitConfig& c) { c.max_iterations = 0; },
             [](FitConfig& c) { c.tolerance = 0; },
             [](FitConfig& c) { c.fallback_step_halvings = -1; },
         }) {
        FitConfig cfg;
        mutate(cfg);
        EXPECT_THROW(fit(dm, cfg), Error);
    }
}

TEST(Predict, ZeroWeightsMonotonicityAndDuplicates)
{
    const Model zero({ 0.0, 0.0 }, { "x" }, 0.0, 0.5, true, 1, 0.0);
    const auto dm = DesignMatrix::from_rows({ { 1 }, { 2 }, { 2 } }, { 0, 0, 1 });
    for (double p : predict_proba(zero, dm))
        EXPECT_EQ(p, 0.5);
    const Model pos({ -1.0, 0.7 }, { "x" }, 0.0, 0.5, true, 1, 0.0);
    const auto p = predict_proba(pos, dm);
    EXPECT_LT(p[0], p[1]);
    EXPECT_EQ(p[1], p[2]);
}

TEST(Predict, ThresholdBoundaries)
{
    const Model zero({ 0.0, 0.0 }, { "x" }, 0.0, 0.5, true, 1, 0.0);
    const auto dm = DesignMatrix::from_rows({ { 1 }, { 2 } }, { 0, 1 });
    EXPECT_EQ(predict_label(zero, dm), (std::vector<int> { 1, 1 })); // p = 0.5 >= 0.5
    const Model skew({ -3.0, 1.0 }, { "x" }, 0.0, 0.0, true, 1, 0.0);
    EXPECT_EQ(predict_label(skew, dm), (std::vector<int> { 1, 1 }));
    EXPECT_EQ(predict_label(skew.with_threshold(1.0), dm), (std::vector<int> { 0, 0 }));
    EXPECT_EQ(predict_label(skew.with_threshold(std::nextafter(1.0, 0.0)), dm), (std::vector<int> { 0, 0 }));
    EXPECT_THROW(skew.with_threshold(1.5), Error);
}

TEST(Predict, FeatureCountMismatch)
{
    const Model m({ 0.0, 1.0, 2.0 }, { "a", "b" }, 0.0, 0.5, true, 1, 0.0);
    const auto dm = DesignMatrix::from_rows({ { 1 } }, { 0 });
    EXPECT_THROW(predict_proba(m, dm), Error);
}

TEST(ModelFile, RoundTripsBitExactly)
{
    Rng rng(11);
    const auto dm = fixture::random_design(rng, 120, 4, { 0.1, 0.4, -0.3, 0.2, 0.9 });
    const auto m = fit(dm).with_threshold(0.37).with_scaling({ 0, 1.5, 0, 0.25 }, { 1, 2.0 / 3.0, 1, 0.1 });
    const auto back = Model::from_document(kv::Document::parse(m.to_document().serialize()));
    EXPECT_EQ(back, m);
    EXPECT_EQ(predict_proba(back, dm), predict_proba(m, dm));
}

TEST(ModelFile, RejectsForeignDocuments)
{
    EXPECT_THROW(Model::from_document(kv::Document::parse("format = something-else\n")), Error);
    EXPECT_THROW(Model({ 0.0, std::nan("") }, { "x" }, 0.0, 0.5, true, 1, 0.0), Error);
    EXPECT_THROW(Model({ 0.0 }, { "x" }, 0.0, 0.5, true, 1, 0.0), Error);
}
