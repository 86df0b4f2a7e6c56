#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "spectral_gap/fem2d.hpp"
#include "spectral_gap/verify2d.hpp"

using namespace spectral_gap;

namespace {
constexpr double kPi = oracle::kPi;
const ConvexPolygonDomain kPiSquare = ConvexPolygonDomain::rectangle(0, 0, kPi, kPi);

} // namespace

TEST(Mesh, FanAndRefinementCounts) {
    auto sq = ConvexPolygonDomain::unit_square();
    auto m0 = mesh_polygon(sq, 0);
    EXPECT_EQ(m0.triangles.size(), 4u);
    EXPECT_EQ(m0.nodes.size(), 5u);
    EXPECT_EQ(m0.boundary_nodes.size(), 4u);
    auto m2 = mesh_polygon(sq, 2);
    EXPECT_EQ(m2.triangles.size(), 64u);
    EXPECT_EQ(m2.nodes.size(), 41u);
    EXPECT_EQ(m2.boundary_nodes.size(), 16u);
    double area = 0;
    for (std::size_t t = 0; t < m2.triangles.size(); ++t) area += m2.triangle_area(t);
    EXPECT_NEAR(area, 1.0, 1e-14);
}

TEST(Mesh, HexagonEqualAreas) {
    auto hex = ConvexPolygonDomain::regular(6, 1.0);
    auto m = mesh_polygon(hex, 1);
    ASSERT_EQ(m.triangles.size(), 24u);
    for (std::size_t t = 0; t < m.triangles.size(); ++t) EXPECT_NEAR(m.triangle_area(t), hex.area() / 24, 1e-14);
}

TEST(Mesh, RefusesAboveCap) {
    EXPECT_THROW(mesh_polygon(ConvexPolygonDomain::unit_square(), 6), std::invalid_argument);
    EXPECT_THROW(mesh_polygon(ConvexPolygonDomain::unit_square(), -1), std::invalid_argument);
}

TEST(Mesh, OffExport) {
    std::ostringstream os;
    write_off(os, mesh_polygon(ConvexPolygonDomain::unit_square(), 0));
    EXPECT_EQ(os.str().rfind("OFF\n5 4 0\n", 0), 0u);
    std::size_t lines = 0;
    for (char ch : os.str()) lines += ch == '\n';
    EXPECT_EQ(lines, 2u + 5u + 4u);
}

TEST(Assembly, ReferenceTriangleStiffness) {
    auto k = p1_stiffness({0, 0}, {1, 0}, {0, 1});
    const double want[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(k[i][j], want[i][j], 1e-15);
}

TEST(Assembly, ConstantPotentialMassIsScaledMass) {
    auto v = make_named_potential("const", {3.0}, ConvexPolygonDomain::unit_square());
    auto p = assemble2d(mesh_polygon(v.domain(), 1), v, Bc2D::Neumann);
    Eigen::MatrixXd diff = Eigen::MatrixXd(p.potential_mass) - 3.0 * Eigen::MatrixXd(p.mass);
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-14);
    // Mass sums to the area; stiffness annihilates constants.
    EXPECT_NEAR(Eigen::MatrixXd(p.mass).sum(), 1.0, 1e-14);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p.dimension()));
    EXPECT_LT((p.stiffness * ones).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Assembly, DirichletDropsBoundaryNodes) {
    auto v = make_named_potential("const", {0.0}, ConvexPolygonDomain::unit_square());
    auto m = mesh_polygon(v.domain(), 2);
    auto p = assemble2d(m, v, Bc2D::Dirichlet);
    EXPECT_EQ(p.dimension(), m.nodes.size() - m.boundary_nodes.size());
}

TEST(Fem, NeumannZeroModeForZeroPotential) {
    auto v = make_named_potential("const", {0.0}, ConvexPolygonDomain::regular(5, 1.0));
    auto r = fem_eigenvalues(v, Bc2D::Neumann, 3, 3);
    EXPECT_NEAR(r[0], 0.0, 1e-10);
    EXPECT_GT(r[1], 0.1);
}

TEST(Fem, SquareAgainstTensorSpectrum) {
    for (auto bc : {Bc2D::Neumann, Bc2D::Dirichlet}) {
        auto v = make_named_potential("const", {0.0}, kPiSquare);
        auto s = solve2d(v, bc, 6, 4);
        auto exact = square_tensor_spectrum(0.0, 6, bc);
        for (std::size_t k = 0; k < 6; ++k)
            EXPECT_NEAR(s.spectrum[k], exact[k], 0.01 * std::max(1.0, exact[k])) << to_string(bc) << k;
    }
}

TEST(Fem, ObservedOrderNearTwo) {
    auto v = make_named_potential("const", {0.0}, kPiSquare);
    double e[3];
    for (int l = 2; l <= 4; ++l) e[l - 2] = fem_eigenvalues(v, Bc2D::Dirichlet, 1, l)[0] - 2.0;
    double order = std::log2((e[0] - e[1]) / (e[1] - e[2]));
    EXPECT_NEAR(order, 2.0, 0.2);
}

TEST(Fem, GalerkinMonotoneUnderRefinement) {
    // Nested P1 spaces; exact for constant V, where the potential term needs no quadrature.
    auto v = make_named_potential("const", {2.0}, ConvexPolygonDomain::regular(6, 1.0));
    for (auto bc : {Bc2D::Neumann, Bc2D::Dirichlet}) {
        auto a = fem_eigenvalues(v, bc, 5, 2), b = fem_eigenvalues(v, bc, 5, 3);
        for (std::size_t k = 0; k < 5; ++k) EXPECT_LE(b[k], a[k] + 1e-10) << to_string(bc) << k;
    }
}

TEST(Fem, UpperBoundsOfTheExactSpectrum) {
    auto v = make_named_potential("const", {1.5}, kPiSquare);
    for (auto bc : {Bc2D::Neumann, Bc2D::Dirichlet}) {
        auto r = fem_eigenvalues(v, bc, 8, 3);
        auto exact = square_tensor_spectrum(1.5, 8, bc);
        for (std::size_t k = 0; k < 8; ++k) EXPECT_GE(r[k], exact[k] - 1e-10);
    }
}

TEST(Tensor, ShiftAndNeumannDirichletGap) {
    auto n0 = square_tensor_spectrum(0.0, 40, Bc2D::Neumann);
    auto n3 = square_tensor_spectrum(3.0, 40, Bc2D::Neumann);
    for (std::size_t k = 0; k < 40; ++k) EXPECT_DOUBLE_EQ(n3[k], n0[k] + 3.0);
    auto d0 = square_tensor_spectrum(0.0, 40, Bc2D::Dirichlet);
    // lambda_k - mu_{k+2} >= 1 on the square for V = 0.
    auto n42 = square_tensor_spectrum(0.0, 42, Bc2D::Neumann);
    for (std::size_t k = 0; k < 40; ++k) EXPECT_GE(d0[k] - n42[k + 2], 1.0) << k;
    EXPECT_EQ(n0[0], 0.0);
    EXPECT_EQ(n0[1], 1.0);
    EXPECT_EQ(n0[2], 1.0);
    EXPECT_EQ(d0[0], 2.0);
    EXPECT_EQ(d0[1], 5.0);
    EXPECT_EQ(d0[2], 5.0);
}

TEST(Tensor, MultiplicityGroups) {
    auto d = square_tensor_spectrum(0.0, 6, Bc2D::Dirichlet); // 2 5 5 8 10 10
    auto g = group_multiplicities(d.eigenvalues, 1e-8);
    ASSERT_EQ(g.size(), 4u);
    EXPECT_EQ(g[1].first, 5.0);
    EXPECT_EQ(g[1].second, 2);
    EXPECT_EQ(g[3].second, 2);
}

TEST(Tensor, SeparableSums) {
    SpectrumResult x, y;
    x.eigenvalues = {0.0, 1.0, 4.0};
    x.error_estimate = {0.0, 1e-9, 1e-9};
    y = x;
    auto s = separable_spectrum(x, y, 3);
    EXPECT_EQ(s.eigenvalues, (std::vector<double>{0.0, 1.0, 1.0}));
    EXPECT_THROW(separable_spectrum(x, y, 4), std::invalid_argument);
}

TEST(Thm42, HexagonZeroPotentialUsesShiftTwo) {
    auto v = make_named_potential("const", {0.0}, ConvexPolygonDomain::regular(6, 1.0));
    auto reps = check_thm42(v, 4, 3);
    ASSERT_EQ(reps.size(), 4u);
    for (const auto& r : reps) {
        EXPECT_EQ(r.details.at("r"), 2.0);
        EXPECT_NE(r.verdict, Verdict::Violated) << r.lhs_label;
        EXPECT_LE(r.details.at("raw_mu"), r.details.at("raw_lambda"));
    }
    EXPECT_EQ(reps[0].lhs_label, "mu3");
    EXPECT_EQ(reps[0].rhs_label, "lambda1");
}

TEST(Thm42, GradientDirectionUsesShiftOne) {
    auto v = make_named_potential("sin_x", {1.0}, kPiSquare);
    auto reps = check_thm42(v, 3, 3);
    ASSERT_EQ(reps.size(), 3u);
    for (const auto& r : reps) {
        EXPECT_EQ(r.details.at("r"), 1.0);
        EXPECT_NE(r.verdict, Verdict::Violated);
    }
}

TEST(Thm42, InapplicableWithoutDirection) {
    auto v = make_named_potential("radial_concave", {1.0}, ConvexPolygonDomain::rectangle(-1, -1, 1, 1));
    auto reps = check_thm42(v, 3, 3);
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_EQ(reps[0].verdict, Verdict::Inapplicable);
}

TEST(Thm4445, ConstantIsNotStrict) {
    auto v = make_named_potential("const", {0.0}, ConvexPolygonDomain::rectangle(-1, -1, 1, 1));
    auto reps = check_thm44_45(v, 3);
    ASSERT_EQ(reps.size(), 2u);
    for (const auto& r : reps) {
        EXPECT_EQ(r.expectation, Expectation::LessEqual);
        EXPECT_NE(r.verdict, Verdict::Violated);
        EXPECT_NE(r.verdict, Verdict::HoldsStrictly);
    }
}

TEST(Thm4445, ConcaveQuadraticDoublySymmetric) {
    auto v = make_named_potential("quadratic", {-1.0, 0.0, -1.0}, ConvexPolygonDomain::rectangle(-1, -1, 1, 1));
    EXPECT_TRUE(doubly_symmetric(v));
    auto reps = check_thm44_45(v, 3);
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_EQ(reps[0].theorem_id, "T4.4");
    EXPECT_EQ(reps[1].theorem_id, "T4.5");
    for (const auto& r : reps) {
        EXPECT_EQ(r.verdict, Verdict::HoldsStrictly) << r.theorem_id;
        EXPECT_EQ(r.details.at("same_sign"), 1.0);
    }
}

TEST(Thm4445, NonSymmetricSkipsThirdLevel) {
    auto v = make_named_potential("exp", {-1.0, 1.0}, ConvexPolygonDomain::unit_square());
    auto reps = check_thm44_45(v, 3);
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_NE(reps[0].verdict, Verdict::Violated);
    EXPECT_EQ(reps[1].verdict, Verdict::Inapplicable);
}

TEST(Thm4445, ConvexIsInapplicable) {
    auto v = make_named_potential("quadratic", {1.0, 0.0, 1.0}, ConvexPolygonDomain::unit_square());
    auto reps = check_thm44_45(v, 3);
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_EQ(reps[0].verdict, Verdict::Inapplicable);
}
