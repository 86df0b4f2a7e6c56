#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spectral_gap/families.hpp"
#include "spectral_gap/perturbation.hpp"

using namespace spectral_gap;

namespace {
constexpr double kPi = oracle::kPi;
const BoundaryPair kAllBc[4] = {BoundaryPair::NN(), BoundaryPair::DD(), BoundaryPair::DN(), BoundaryPair::ND()};

double fd_derivative(const Potential1D& v, BoundaryPair bc, std::size_t k, double tau) {
    SolveOptions so;
    so.target_tol = 1e-10;
    return oracle::centered_difference(
        [&](double t) { return solve(scale_shift_potential(v, t, 0.0), v.domain(), bc, k, so)[k - 1]; }, tau);
}
} // namespace

TEST(HfDerivative, ConstantPotentialGivesTheConstant) {
    auto v = make_named_potential("const", {2.5}, IntervalDomain(-1.0, 3.0));
    for (auto bc : kAllBc)
        for (std::size_t k : {1, 2, 3})
            for (double tau : {-1.0, 0.0, 0.7}) EXPECT_NEAR(hf_derivative(v, v.domain(), bc, k, tau).derivative, 2.5, 1e-10);
}

TEST(HfDerivative, SquareOnZeroPiDirichletGround) {
    auto v = make_named_potential("poly", {0.0, 0.0, 1.0}, IntervalDomain(0.0, kPi));
    double quad = oracle::integrate([](double x) { return x * x * (2 / kPi) * std::sin(x) * std::sin(x); }, 0.0, kPi);
    EXPECT_NEAR(quad, kPi * kPi / 3 - 0.5, 1e-12);
    auto r = hf_derivative(v, v.domain(), BoundaryPair::DD(), 1, 0.0);
    EXPECT_NEAR(r.derivative, quad, 1e-7);
    EXPECT_NEAR(r.eigenvalue, 1.0, 1e-6);
}

TEST(HfDerivative, NeumannAtZeroIsTheMean) {
    // psi_1 = 1/sqrt(L) for V = 0, so the derivative at tau = 0 is the mean of V.
    IntervalDomain I(0.0, 2.0);
    auto v = make_named_potential("exp", {1.0, 1.0}, I);
    double mean = oracle::integrate([](double x) { return std::exp(x); }, 0.0, 2.0) / 2.0;
    EXPECT_NEAR(hf_derivative(v, I, BoundaryPair::NN(), 1, 0.0).derivative, mean, 1e-7);
}

TEST(HfDerivative, MatchesFiniteDifferenceAtTauPointSeven) {
    IntervalDomain I(-1.0, 1.0);
    auto v = make_named_potential("gauss", {3.0, -3.0 * std::exp(-1.0)}, I);
    for (auto bc : kAllBc)
        for (std::size_t k = 1; k <= 3; ++k) {
            double hf = hf_derivative(v, I, bc, k, 0.7).derivative;
            EXPECT_NEAR(hf, fd_derivative(v, bc, k, 0.7), 1e-5 * (1 + v.sup_norm())) << to_string(bc) << k;
        }
}

TEST(HfDerivative, RandomFamilyAgainstFiniteDifference) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        auto v = families::smooth_trig(families::kDefaultSeed, 50 + i, IntervalDomain(0.0, 1.0));
        for (double tau : {-1.0, -0.5, 0.0, 0.5, 1.0})
            for (std::size_t k = 1; k <= 4; ++k) {
                auto bc = kAllBc[(i + k) % 4];
                double hf = hf_derivative(v, v.domain(), bc, k, tau).derivative;
                double fd = fd_derivative(v, bc, k, tau);
                worst = std::max(worst, std::abs(hf - fd) / std::max(1.0, std::abs(fd)));
            }
    }
    EXPECT_LE(worst, 1e-4);
}

TEST(HfDerivative, RefusesDegenerateEigenvalue) {
    // Two decoupled identical wells are not available in 1D, but a very high
    // symmetric barrier makes the two lowest Dirichlet levels nearly equal.
    auto v = make_named_potential("symmetric_step", {4000.0}, IntervalDomain(0.0, 4.0));
    EXPECT_THROW(hf_derivative(v, v.domain(), BoundaryPair::DD(), 1, 1.0), SolverError);
    EXPECT_THROW(hf_derivative(v, v.domain(), BoundaryPair::DD(), 0, 1.0), std::invalid_argument);
}

TEST(InitialSlope, SquarePotentialGivesMinusInverseKSquared) {
    auto v = make_named_potential("poly", {0.0, 0.0, 1.0}, IntervalDomain(0.0, kPi));
    for (std::size_t k = 1; k <= 4; ++k) {
        auto s = prop31_initial_slope(v, k);
        EXPECT_NEAR(s.slope, -1.0 / (k * k), 1e-10);
        EXPECT_NEAR(s.first_form, s.slope, 1e-8);
        EXPECT_EQ(s.second_derivative_source, "analytic");
    }
}

TEST(InitialSlope, MatchesDerivativeOfTheGap) {
    // d/dtau (lambda_k - mu_{k+1}) at 0 from the eigenvalue derivatives.
    IntervalDomain I(0.0, 2.0);
    auto v = make_named_potential("exp", {1.0, 0.8}, I);
    for (std::size_t k = 1; k <= 3; ++k) {
        double d = hf_derivative(v, I, BoundaryPair::DD(), k, 0.0).derivative -
                   hf_derivative(v, I, BoundaryPair::NN(), k + 1, 0.0).derivative;
        EXPECT_NEAR(prop31_initial_slope(v, k).slope, d, 1e-6) << k;
    }
}

TEST(InitialSlope, ConvexNonConstantIsNegative) {
    auto v = make_named_potential("exp", {1.0, 1.0}, IntervalDomain(0.0, kPi));
    for (std::size_t k = 1; k <= 5; ++k) EXPECT_LT(prop31_initial_slope(v, k).slope, 0.0);
}

TEST(InitialSlope, ConstantIsZero) {
    auto v = make_named_potential("const", {4.0}, IntervalDomain(0.0, 1.0));
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_NEAR(prop31_initial_slope(v, k).slope, 0.0, 1e-12);
}

TEST(InitialSlope, TabulatedUsesKinksAndAgrees) {
    auto v = make_tabulated({0.0, 0.25, 0.5, 0.75, 1.0}, {1.0, 0.2, 0.0, 0.3, 1.5});
    auto s = prop31_initial_slope(v, 2);
    EXPECT_EQ(s.second_derivative_source, "tabulated-kinks");
    EXPECT_NEAR(s.slope, s.first_form, 1e-8 * (1 + v.sup_norm()));
    EXPECT_LT(s.slope, 0.0);
}

TEST(InitialSlope, FiniteDifferenceFallback) {
    auto v = make_function_potential([](double x) { return std::cosh(x); }, IntervalDomain(0.0, 2.0));
    auto s = prop31_initial_slope(v, 1);
    EXPECT_EQ(s.second_derivative_source, "finite-difference");
    EXPECT_LT(s.slope, 0.0);
}

TEST(InitialSlope, PiecewiseConstantRejected) {
    auto v = make_named_potential("step", {1.0}, IntervalDomain(0.0, 2.0));
    EXPECT_THROW(prop31_initial_slope(v, 1), std::invalid_argument);
}

TEST(Flow, ExpOnZeroPiChangesSignAtZero) {
    auto v = make_named_potential("exp", {1.0, 1.0}, IntervalDomain(0.0, kPi));
    auto c = trace_flow(v, v.domain(), 3, -0.05, 0.05, 10);
    ASSERT_FALSE(c.truncated);
    ASSERT_EQ(c.points.size(), 11u);
    for (const auto& p : c.points) {
        for (std::size_t k = 0; k < 3; ++k) {
            if (p.tau > 1e-12) EXPECT_LT(p.gap[k], 0.0) << "tau=" << p.tau;  // lambda_k < mu_{k+1}
            if (p.tau < -1e-12) EXPECT_GT(p.gap[k], 0.0) << "tau=" << p.tau; // mu_{k+1} < lambda_k
        }
    }
    ASSERT_EQ(c.crossings.size(), 3u);
    for (const auto& x : c.crossings) EXPECT_NEAR(x.tau, 0.0, 1e-6);
}

TEST(Flow, ZeroPotentialHasZeroGaps) {
    auto v = make_named_potential("const", {0.0}, IntervalDomain(0.0, 1.0));
    auto c = trace_flow(v, v.domain(), 3, -1.0, 1.0, 8);
    for (const auto& p : c.points)
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(p.gap[k], 0.0, 1e-8);
}

TEST(Flow, GapVanishesAtTauZeroAndTrivialComparisonHolds) {
    auto v = families::smooth_trig(families::kDefaultSeed, 11, IntervalDomain(-1.0, 2.0));
    auto c = trace_flow(v, v.domain(), 3, -2.0, 2.0, 8);
    for (const auto& p : c.points) {
        ASSERT_EQ(p.mu.size(), 4u);
        ASSERT_EQ(p.lambda.size(), 3u);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_LE(p.mu[k], p.lambda[k] + 1e-7);
            if (std::abs(p.tau) < 1e-15) EXPECT_NEAR(p.gap[k], 0.0, 1e-8);
        }
    }
    for (std::size_t i = 1; i < c.points.size(); ++i) EXPECT_GT(c.points[i].tau, c.points[i - 1].tau);
}

TEST(Flow, DeterministicWithAndWithoutThreads) {
    auto v = make_named_potential("gauss", {3.0, 0.0}, IntervalDomain(-1.0, 1.0));
    FlowOptions par, seq;
    seq.parallel = false;
    auto a = trace_flow(v, v.domain(), 2, -1.0, 1.0, 8, par);
    auto b = trace_flow(v, v.domain(), 2, -1.0, 1.0, 8, seq);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].gap, b.points[i].gap);
}

TEST(Flow, RejectsFewSteps) {
    auto v = make_named_potential("const", {0.0}, IntervalDomain(0.0, 1.0));
    EXPECT_THROW(trace_flow(v, v.domain(), 2, -1.0, 1.0, 7), std::invalid_argument);
}
