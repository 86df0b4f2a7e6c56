// End-to-end acceptance run: ten criteria, one PASS/FAIL line each.
//
//   acceptance          run all criteria
//   acceptance N ...    run only the listed criteria (1-10)
//
// Exit status is 0 iff every selected criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spectral_gap/eig1d.hpp"
#include "spectral_gap/families.hpp"
#include "spectral_gap/fem2d.hpp"
#include "spectral_gap/perturbation.hpp"
#include "spectral_gap/step_analytic.hpp"
#include "spectral_gap/verify1d.hpp"
#include "spectral_gap/verify2d.hpp"

using namespace spectral_gap;

namespace {

constexpr double kPi = oracle::kPi;

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) note << "; ";
            note << what;
            pass = false;
        }
    }
};

std::string g(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", x);
    return b;
}

// 1. Step-potential table, analytic digits and FD within 1e-3.
void table1(Outcome& o) {
    int analytic_ok = 0, fd_ok = 0;
    std::vector<std::string> bad;
    for (const auto& c : step::table1_analytic()) {
        if (c.match) ++analytic_ok;
        else bad.push_back(c.quantity + "(c=" + g(c.c) + "): " + step::round_to(c.computed, c.digits) + " vs " + c.published);
        auto v = make_named_potential("step", {c.c}, IntervalDomain(0.0, 2.0));
        double fd = c.quantity == "sqrt_mu2" ? std::sqrt(solve(v, v.domain(), BoundaryPair::NN(), 2)[1])
                                             : std::sqrt(solve(v, v.domain(), BoundaryPair::DD(), 1)[0]);
        if (std::abs(fd - std::stod(c.published)) <= 1e-3) ++fd_ok;
    }
    o.note << "analytic " << analytic_ok << "/12 cells, fd " << fd_ok << "/12 within 1e-3";
    for (const auto& b : bad) o.note << "; " << b;
    o.pass = analytic_ok == 12 && fd_ok == 12;
}

// 2. mu_{k+1}(0) = k^2 pi^2 / L^2 = lambda_k(0) on three intervals.
void laplacian_identity(Outcome& o) {
    const IntervalDomain ints[3] = {{0.0, kPi}, {0.0, 1.0}, {-2.0, 3.0}};
    double worst_pair = 0.0, worst_exact = 0.0;
    for (auto I : ints) {
        auto zero = make_named_potential("const", {0.0}, I);
        SolveOptions so;
        so.target_tol = 1e-10;
        auto mu = solve(zero, I, BoundaryPair::NN(), 7, so);
        auto la = solve(zero, I, BoundaryPair::DD(), 6, so);
        for (std::size_t k = 1; k <= 6; ++k) {
            worst_pair = std::max(worst_pair, std::abs(mu[k] - la[k - 1]));
            worst_exact = std::max(worst_exact, std::abs(la[k - 1] - k * k * kPi * kPi / (I.length() * I.length())));
        }
    }
    o.note << "max |mu_{k+1}-lambda_k| = " << g(worst_pair) << ", max |lambda_k - k^2pi^2/L^2| = " << g(worst_exact);
    o.require(worst_pair <= 1e-8, "pair identity above 1e-8");
    o.require(worst_exact <= 1e-6, "closed form above 1e-6");
}

// 3. Expectation-of-V derivative vs centered difference of eigenvalues.
void hellmann_feynman(Outcome& o) {
    const IntervalDomain sym(-1.0, 1.0), pi(0.0, kPi);
    std::vector<std::pair<std::string, Potential1D>> pots = {
        {"gauss", make_named_potential("gauss", {3.0, -3.0 * std::exp(-1.0)}, sym)},
        {"exp", make_named_potential("exp", {1.0, 1.0}, pi)},
        {"x^2", make_named_potential("poly", {0.0, 0.0, 1.0}, pi)},
        {"cos", make_named_potential("cos", {2.0, 3.0}, sym)},
        {"trig#0", families::smooth_trig(families::kDefaultSeed, 0, IntervalDomain(0.0, 2.0))},
    };
    const BoundaryPair bcs[4] = {BoundaryPair::NN(), BoundaryPair::DD(), BoundaryPair::DN(), BoundaryPair::ND()};
    const double tau = 0.7, delta = 1e-4;
    double worst = 0.0;
    int cases = 0;
    for (const auto& [name, v] : pots)
        for (auto bc : bcs)
            for (std::size_t k = 1; k <= 3; ++k) {
                auto hf = hf_derivative(v, v.domain(), bc, k, tau);
                SolveOptions so;
                so.target_tol = 1e-10;
                auto lam = [&](double t) { return solve(scale_shift_potential(v, t, 0.0), v.domain(), bc, k, so)[k - 1]; };
                double fd = oracle::centered_difference(lam, tau, delta);
                double rel = std::abs(hf.derivative - fd) / std::max(1.0, std::abs(fd));
                worst = std::max(worst, rel);
                ++cases;
            }
    o.note << cases << " cases, max relative difference " << g(worst);
    o.require(worst <= 1e-4, "relative difference above 1e-4");
}

// 4. Initial slope of lambda_k - mu_{k+1}.
void initial_slope(Outcome& o) {
    auto x2 = make_named_potential("poly", {0.0, 0.0, 1.0}, IntervalDomain(0.0, kPi));
    double worst = 0.0;
    for (std::size_t k = 1; k <= 4; ++k)
        worst = std::max(worst, std::abs(prop31_initial_slope(x2, k).slope + 1.0 / (k * k)));
    o.note << "x^2: max |slope + 1/k^2| = " << g(worst);
    o.require(worst <= 1e-6, "x^2 slope off by more than 1e-6");

    const IntervalDomain pi(0.0, kPi), sym(-1.0, 1.0);
    std::vector<Potential1D> convex = {
        make_named_potential("exp", {1.0, 1.0}, pi),
        make_named_potential("exp", {2.0, -1.0}, pi),
        make_named_potential("poly", {0.0, 0.0, 0.0, 0.0, 1.0}, sym),
        make_named_potential("poly", {1.0, 0.5, 3.0}, sym),
        make_tabulated({0.0, 0.25, 0.5, 0.75, 1.0}, {1.0, 0.2, 0.0, 0.3, 1.5}),
    };
    int negative = 0, total = 0;
    for (const auto& v : convex)
        for (std::size_t k = 1; k <= 5; ++k, ++total)
            if (prop31_initial_slope(v, k).slope < 0) ++negative;
    o.note << "; convex potentials: " << negative << "/" << total << " slopes negative";
    o.require(negative == total, "a convex potential produced a non-negative slope");
}

// 5. Symmetric potentials monotone on the right half.
void thm33_suite(Outcome& o) {
    const IntervalDomain sym(-1.0, 1.0);
    struct Case {
        std::string id;
        Potential1D v;
        bool expect_mu2_below; // mu2 < lambda1 vs lambda1 < mu2
    };
    std::vector<Case> cases = {
        {"fig1-V", make_named_potential("gauss", {3.0, -3.0 * std::exp(-1.0)}, sym), false},
        {"fig1-W", make_named_potential("gauss", {-3.0, 0.0}, sym), true},
        {"x^2", make_named_potential("poly", {0.0, 0.0, 1.0}, sym), false},
        {"-x^2", make_named_potential("poly", {0.0, 0.0, -1.0}, sym), true},
    };
    for (int i = 0; i < 10; ++i) {
        cases.push_back({"inc#" + std::to_string(i), families::symmetric_monotone_half(families::kDefaultSeed, i, 1.0, true), false});
        cases.push_back({"dec#" + std::to_string(i), families::symmetric_monotone_half(families::kDefaultSeed, i, 1.0, false), true});
    }
    int strict = 0, violated = 0;
    double min_ratio = INFINITY;
    for (const auto& c : cases) {
        auto r = check_thm33(c.v, sym);
        bool mu2_below = r.lhs_label == "mu2";
        bool ok = r.applicable && r.verdict == Verdict::HoldsStrictly && mu2_below == c.expect_mu2_below &&
                  r.margin > r.error_budget;
        if (r.verdict == Verdict::Violated) ++violated;
        if (ok) ++strict;
        else o.require(false, c.id + ": " + to_string(r.verdict));
        if (r.error_budget > 0) min_ratio = std::min(min_ratio, r.margin / r.error_budget);
    }
    o.note << (o.pass ? "" : "; ") << strict << "/" << cases.size() << " strict, " << violated
           << " violated, min margin/budget " << g(min_ratio);
    o.require(violated == 0, "violated verdicts present");
}

// 6. psi/phi monotone with a single crossing.
void quotient(Outcome& o) {
    int good = 0, run = 0;
    for (int i = 0; i < 20; ++i) {
        auto v = families::non_increasing(families::kDefaultSeed, i, 1.0);
        auto q = quotient_diagnostic(v, v.domain(), 1.0);
        if (q.skipped) {
            o.require(false, "#" + std::to_string(i) + " skipped: " + q.reason);
            continue;
        }
        ++run;
        if (q.strictly_decreasing && q.crossings == 1) ++good;
        else o.require(false, "#" + std::to_string(i) + ": increases=" + std::to_string(q.increases) +
                                  " crossings=" + std::to_string(q.crossings));
    }
    o.note << (o.pass ? "" : "; ") << good << "/" << run << " monotone with one crossing";
    o.require(run == 20, "fewer than 20 potentials in the precondition regime");
}

// 7. Square (0,pi)^2 with V = 0.
void square(Outcome& o) {
    const double neu[10] = {0, 1, 1, 2, 4, 4, 5, 5, 8, 9};
    const double dir[10] = {2, 5, 5, 8, 10, 10, 13, 13, 17, 17};
    auto tn = square_tensor_spectrum(0.0, 10, Bc2D::Neumann);
    auto td = square_tensor_spectrum(0.0, 10, Bc2D::Dirichlet);
    bool exact = true;
    for (int i = 0; i < 10; ++i) exact = exact && tn[i] == neu[i] && td[i] == dir[i];
    o.require(exact, "tensor spectra differ from the listed values");

    auto gn = square_tensor_spectrum(0.0, 42, Bc2D::Neumann);
    auto gd = square_tensor_spectrum(0.0, 40, Bc2D::Dirichlet);
    double min_gap = INFINITY;
    for (std::size_t k = 1; k <= 40; ++k) min_gap = std::min(min_gap, gd[k - 1] - gn[k + 1]);
    o.require(min_gap >= 1.0, "lambda_k - mu_{k+2} < 1");

    auto sq = make_named_potential("const", {0.0}, ConvexPolygonDomain::rectangle(0, 0, kPi, kPi));
    auto fn = fem_eigenvalues(sq, Bc2D::Neumann, 8, 5);
    auto fd = fem_eigenvalues(sq, Bc2D::Dirichlet, 8, 5);
    auto en = square_tensor_spectrum(0.0, 8, Bc2D::Neumann);
    auto ed = square_tensor_spectrum(0.0, 8, Bc2D::Dirichlet);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        worst = std::max(worst, std::abs(fd[i] - ed[i]) / ed[i]);
        worst = std::max(worst, en[i] == 0 ? std::abs(fn[i]) : std::abs(fn[i] - en[i]) / en[i]);
    }
    o.note << "tensor exact: " << (exact ? "yes" : "no") << ", min lambda_k - mu_{k+2} (k<=40) = " << g(min_gap)
           << ", FEM level 5 max relative error " << g(worst);
    o.require(worst <= 0.01, "FEM level 5 off by more than 1%");
}

// 8. Index shift by one for e^{x+y}; x-only potential vs tensor oracle.
void thm42(Outcome& o) {
    auto v = make_named_potential("exp", {1.0, 1.0}, ConvexPolygonDomain::unit_square());
    auto reps = check_thm42(v, 4, 5);
    double min_margin = INFINITY;
    for (const auto& r : reps) {
        o.require(r.applicable && r.margin > -r.error_budget && r.verdict != Verdict::Violated,
                  r.lhs_label + " vs " + r.rhs_label + " " + to_string(r.verdict));
        min_margin = std::min(min_margin, r.margin);
    }
    o.require(reps.size() == 4, "expected four rows");
    o.note << "e^{x+y}: min margin " << g(min_margin);

    // V = sin x on (0,pi)^2: levels are 1D Schrödinger levels in x plus n^2 in y.
    auto sx = make_named_potential("sin_x", {1.0}, ConvexPolygonDomain::rectangle(0, 0, kPi, kPi));
    double worst = 0.0;
    for (auto bc : {Bc2D::Neumann, Bc2D::Dirichlet}) {
        const bool dir = bc == Bc2D::Dirichlet;
        oracle::Shooting s{[](double x) { return std::sin(x); }, 0.0, kPi, dir, dir};
        std::vector<double> xl, yl;
        for (int j = 0; j < 6; ++j) xl.push_back(s.eigenvalue(j, 0.0, 1.0));
        for (int n = dir ? 1 : 0; n <= 6; ++n) yl.push_back(n * n);
        auto exact = oracle::tensor_sums(xl, yl, 6);
        auto fem = solve2d(sx, bc, 6, 5);
        for (std::size_t i = 0; i < 6; ++i) {
            double err = std::abs(fem.spectrum[i] - exact[i]);
            double budget = 10.0 * fem.spectrum.error_estimate[i] + 1e-9;
            worst = std::max(worst, err / budget);
        }
    }
    o.note << "; sin x vs tensor oracle: max error/budget " << g(worst);
    o.require(worst <= 1.0, "x-only potential outside the combined error");
}

// 9. Concave radial potential on a centered square.
void thm44_45(Outcome& o) {
    auto v = make_named_potential("radial_concave", {1.0}, ConvexPolygonDomain::rectangle(-1, -1, 1, 1));
    auto reps = check_thm44_45(v, 4);
    for (const auto& r : reps) {
        double m1 = r.details.at("margin_level_4");
        double drift = r.details.at("margin_drift");
        o.require(r.verdict == Verdict::HoldsStrictly, r.theorem_id + " " + to_string(r.verdict));
        o.require((m1 > 0) && (r.margin > 0), r.theorem_id + " margin sign changes");
        o.require(drift <= 0.2, r.theorem_id + " drift " + g(drift));
        o.note << r.theorem_id << ": " << r.lhs_label << " < lambda1 margin " << g(r.margin) << " drift " << g(drift) << "  ";
    }
    o.require(reps.size() == 2, "expected two reports");
}

// 10. Property suites over seeded families.
void properties(Outcome& o) {
    const auto seed = families::kDefaultSeed;
    int cases = 0, failed = 0;
    auto check = [&](bool ok, const std::string& what) {
        ++cases;
        if (!ok) {
            ++failed;
            o.require(false, what);
        }
    };
    const BoundaryPair bcs[4] = {BoundaryPair::NN(), BoundaryPair::DD(), BoundaryPair::DN(), BoundaryPair::ND()};
    // Constant shift: solve(V + c) = solve(V) + c.
    for (int i = 0; i < 16; ++i) {
        auto v = families::smooth_trig(seed, i, IntervalDomain(0.0, 1.5));
        double c = -3.0 + 0.4 * i;
        auto bc = bcs[i % 4];
        auto a = solve(v, v.domain(), bc, 3);
        auto b = solve(scale_shift_potential(v, 1.0, c), v.domain(), bc, 3);
        double worst = 0.0;
        for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(b[k] - a[k] - c));
        check(worst <= 1e-10, "shift #" + std::to_string(i) + " off by " + g(worst));
    }
    // Potential monotonicity on identical grids.
    for (int i = 0; i < 16; ++i) {
        IntervalDomain I(0.0, 1.0);
        auto v = families::bounded_tabulated(seed, 100 + i, I, -2.0, 2.0);
        auto w = families::bounded_tabulated(seed, 200 + i, I, 0.0, 3.0);
        auto vw = make_function_potential([v, w](double x) { return std::max(v(x), v(x) + w(x)); }, I);
        auto bc = bcs[i % 4];
        auto a = lowest_eigenvalues(assemble(v, I, bc, 511), 5);
        auto b = lowest_eigenvalues(assemble(vw, I, bc, 511), 5);
        bool ok = true;
        for (int k = 0; k < 5; ++k) ok = ok && a[k] <= b[k] + 1e-12 * (1 + std::abs(b[k]));
        check(ok, "monotonicity #" + std::to_string(i));
    }
    // Galerkin refinement monotonicity (nested P1 spaces, constant V).
    {
        const ConvexPolygonDomain polys[3] = {ConvexPolygonDomain::unit_square(), ConvexPolygonDomain::regular(6, 1.0),
                                              ConvexPolygonDomain::rectangle(-1, 0, 1, 0.5)};
        int idx = 0;
        for (const auto& p : polys)
            for (double c : {0.0, 2.5})
                for (auto bc : {Bc2D::Neumann, Bc2D::Dirichlet}) {
                    auto v = make_named_potential("const", {c}, p);
                    auto l2 = fem_eigenvalues(v, bc, 4, 2);
                    auto l3 = fem_eigenvalues(v, bc, 4, 3);
                    bool ok = true;
                    for (int k = 0; k < 4; ++k) ok = ok && l3[k] <= l2[k] + 1e-10 * (1 + std::abs(l2[k]));
                    check(ok, "galerkin #" + std::to_string(idx++));
                }
    }
    // Even/odd decomposition of symmetric problems.
    for (int i = 0; i < 8; ++i) {
        bool inc = i % 2 == 0;
        auto v = families::symmetric_monotone_half(seed, 300 + i, 1.0, inc);
        auto half = v.restricted(IntervalDomain(0.0, 1.0));
        auto full_n = solve(v, v.domain(), BoundaryPair::NN(), 4);
        auto full_d = solve(v, v.domain(), BoundaryPair::DD(), 4);
        auto nn = solve(half, half.domain(), BoundaryPair::NN(), 2), dn = solve(half, half.domain(), BoundaryPair::DN(), 2);
        auto nd = solve(half, half.domain(), BoundaryPair::ND(), 2), dd = solve(half, half.domain(), BoundaryPair::DD(), 2);
        std::vector<double> un{nn[0], nn[1], dn[0], dn[1]}, ud{nd[0], nd[1], dd[0], dd[1]};
        std::sort(un.begin(), un.end());
        std::sort(ud.begin(), ud.end());
        double worst = 0.0;
        for (int k = 0; k < 4; ++k) {
            double bn = 10 * (full_n.error_estimate[k] + std::max(nn.max_error(), dn.max_error())) + 1e-9;
            double bd = 10 * (full_d.error_estimate[k] + std::max(nd.max_error(), dd.max_error())) + 1e-9;
            worst = std::max({worst, std::abs(full_n[k] - un[k]) / bn, std::abs(full_d[k] - ud[k]) / bd});
        }
        check(worst <= 1.0, "even/odd #" + std::to_string(i) + " error/budget " + g(worst));
    }
    o.note << (o.pass ? "" : "; ") << cases - failed << "/" << cases << " property cases hold";
    o.require(cases >= 50, "fewer than 50 cases");
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<void(Outcome&)> run;
};

} // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<Criterion> all = {
        {1, "step table reproduction", 10, table1},
        {2, "Laplacian index identity", 5, laplacian_identity},
        {3, "Hellmann-Feynman vs finite difference", 60, hellmann_feynman},
        {4, "initial gap slope", 60, initial_slope},
        {5, "symmetric monotone-half orderings", 120, thm33_suite},
        {6, "mixed eigenfunction quotient", 60, quotient},
        {7, "square spectra", 60, square},
        {8, "index shift for e^{x+y}", 120, thm42},
        {9, "concave potential, mu2 and mu3 below lambda1", 120, thm44_45},
        {10, "property suites", 120, properties},
    };
    std::vector<int> pick;
    for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : all) {
        if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) continue;
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) o.require(false, "runtime " + g(secs) + " s over " + g(c.budget_s) + " s");
        std::printf("%s  criterion %2d  %-46s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                    o.note.str().c_str());
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
