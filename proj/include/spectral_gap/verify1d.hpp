#pragma once

// Hypothesis checks and Neumann/Dirichlet/mixed eigenvalue comparisons on
// intervals. Each check reads the potential's structural flags, computes the
// spectra it needs and returns an InequalityReport.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "spectral_gap/eig1d.hpp"
#include "spectral_gap/potential.hpp"
#include "spectral_gap/report.hpp"
#include "spectral_gap/step_analytic.hpp"

namespace spectral_gap {

struct CheckOptions {
    double tol = 1e-9;
    bool confirm = true; // re-run strict/violated verdicts at doubled resolution
};

namespace detail {

inline Potential1D on_domain(const Potential1D& v, IntervalDomain dom) {
    if (dom.a == v.domain().a && dom.b == v.domain().b) return v;
    return v.restricted(dom);
}

/// Spectra for a check at one resolution level (0: default, 1: doubled).
inline SpectrumResult spectrum_at(const Potential1D& v, IntervalDomain dom, BoundaryPair bc, std::size_t count,
                                  double tol, int level) {
    SolveOptions so;
    so.target_tol = tol;
    if (level > 0) {
        so.initial_n = 2 * default_initial_n(v, count) + 1;
        so.target_tol = std::max(1e-10, 0.5 * tol);
    }
    return solve(v, dom, bc, count, so);
}

inline void fill_margin(InequalityReport& r, double lhs, double lhs_err, double rhs, double rhs_err) {
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.error_budget = 10.0 * (lhs_err + rhs_err);
    r.verdict = classify(r.margin, r.error_budget, r.expectation);
}

/// Re-runs `compute(level=1)` and checks that a strict / violated verdict
/// survives with half the budget.
template <class Compute>
void confirm_verdict(InequalityReport& r, Compute&& compute) {
    if (r.verdict != Verdict::HoldsStrictly && r.verdict != Verdict::Violated) return;
    InequalityReport again = compute(1);
    Verdict v2 = classify(again.margin, 0.5 * again.error_budget, r.expectation);
    r.reproduced = (v2 == r.verdict);
    r.details["confirm_margin"] = again.margin;
    r.details["confirm_budget"] = again.error_budget;
}

} // namespace detail

/// lambda_1^DN vs lambda_1^ND, predicted by the monotonicity of V on `dom`.
inline InequalityReport check_lemma32(const Potential1D& v0, IntervalDomain dom, CheckOptions opt = {}) {
    auto v = detail::on_domain(v0, dom);
    const auto& m = v.meta();
    InequalityReport r;
    r.lhs_label = "lambda1_DN";
    r.rhs_label = "lambda1_ND";
    if (m.is_constant || m.monotone_whole == Monotone::Constant) {
        r.theorem_id = "L3.2i";
        r.expectation = Expectation::Equal;
        r.reason = "constant potential: equality expected";
    } else if (m.monotone_whole == Monotone::NonIncreasing) {
        r.theorem_id = "L3.2i";
        r.expectation = Expectation::Less;
        r.reason = "non-increasing and non-constant";
    } else if (m.monotone_whole == Monotone::NonDecreasing) {
        r.theorem_id = "L3.2ii";
        r.expectation = Expectation::Less;
        r.lhs_label = "lambda1_ND";
        r.rhs_label = "lambda1_DN";
        r.reason = "non-decreasing and non-constant";
    } else {
        return inapplicable_report("L3.2i", "monotonicity of V on the interval is " + to_string(m.monotone_whole));
    }
    r.applicable = true;
    const bool dn_left = r.lhs_label == "lambda1_DN";

    auto compute = [&](int level) {
        InequalityReport q = r;
        auto dn = detail::spectrum_at(v, dom, BoundaryPair::DN(), 1, opt.tol, level);
        auto nd = detail::spectrum_at(v, dom, BoundaryPair::ND(), 1, opt.tol, level);
        if (dn_left)
            detail::fill_margin(q, dn[0], dn.error_estimate[0], nd[0], nd.error_estimate[0]);
        else
            detail::fill_margin(q, nd[0], nd.error_estimate[0], dn[0], dn.error_estimate[0]);
        return q;
    };
    r = compute(0);
    if (opt.confirm) detail::confirm_verdict(r, compute);
    return r;
}

/// mu_2 vs lambda_1 on an interval symmetric about its midpoint, predicted by
/// the monotonicity of V on the right half (or by convexity, which implies it).
/// Cross-checked against the mixed problems on the right half.
inline InequalityReport check_thm33(const Potential1D& v0, IntervalDomain dom, CheckOptions opt = {}) {
    auto v = detail::on_domain(v0, dom);
    const auto& m = v.meta();
    if (m.symmetric != Tri::Yes)
        return inapplicable_report("T3.3i", "V is not symmetric about the interval midpoint");

    InequalityReport r;
    bool mu_left = true; // lhs = mu2
    if (m.is_constant) {
        r.theorem_id = "T3.3i";
        r.expectation = Expectation::Equal;
        r.reason = "constant potential: equality expected";
    } else if (m.convexity == Convexity::Convex) {
        r.theorem_id = "C3.4i";
        mu_left = false;
        r.reason = "symmetric, convex and non-constant";
    } else if (m.convexity == Convexity::Concave) {
        r.theorem_id = "C3.4ii";
        r.reason = "symmetric, concave and non-constant";
    } else if (m.monotone_right_half == Monotone::NonIncreasing) {
        r.theorem_id = "T3.3i";
        r.reason = "symmetric, non-increasing and non-constant on the right half";
    } else if (m.monotone_right_half == Monotone::NonDecreasing) {
        r.theorem_id = "T3.3ii";
        mu_left = false;
        r.reason = "symmetric, non-decreasing and non-constant on the right half";
    } else {
        return inapplicable_report("T3.3i", "monotonicity on the right half is " + to_string(m.monotone_right_half));
    }
    r.applicable = true;
    r.lhs_label = mu_left ? "mu2" : "lambda1";
    r.rhs_label = mu_left ? "lambda1" : "mu2";
    const IntervalDomain half(dom.midpoint(), dom.b);
    auto vh = v.restricted(half);

    auto compute = [&](int level) {
        InequalityReport q = r;
        auto nn = detail::spectrum_at(v, dom, BoundaryPair::NN(), 2, opt.tol, level);
        auto dd = detail::spectrum_at(v, dom, BoundaryPair::DD(), 1, opt.tol, level);
        double mu2 = nn[1], e_mu = nn.error_estimate[1];
        double l1 = dd[0], e_l = dd.error_estimate[0];
        if (mu_left)
            detail::fill_margin(q, mu2, e_mu, l1, e_l);
        else
            detail::fill_margin(q, l1, e_l, mu2, e_mu);

        auto dn = detail::spectrum_at(vh, half, BoundaryPair::DN(), 1, opt.tol, level);
        auto nd = detail::spectrum_at(vh, half, BoundaryPair::ND(), 1, opt.tol, level);
        q.details["mu2"] = mu2;
        q.details["lambda1"] = l1;
        q.details["half_lambda1_DN"] = dn[0];
        q.details["half_lambda1_ND"] = nd[0];
        double b1 = 10.0 * (e_mu + dn.error_estimate[0]);
        double b2 = 10.0 * (e_l + nd.error_estimate[0]);
        bool agree = std::abs(mu2 - dn[0]) <= b1 + 1e-12 && std::abs(l1 - nd[0]) <= b2 + 1e-12;
        q.details["routes_agree"] = agree ? 1.0 : 0.0;
        // Verdict along the mixed route must match the direct one.
        InequalityReport alt = q;
        if (mu_left)
            detail::fill_margin(alt, dn[0], dn.error_estimate[0], nd[0], nd.error_estimate[0]);
        else
            detail::fill_margin(alt, nd[0], nd.error_estimate[0], dn[0], dn.error_estimate[0]);
        q.details["mixed_route_margin"] = alt.margin;
        q.details["routes_same_verdict"] = alt.verdict == q.verdict ? 1.0 : 0.0;
        return q;
    };
    r = compute(0);
    if (opt.confirm) detail::confirm_verdict(r, compute);
    return r;
}

/// lambda_2 vs mu_3 for a potential symmetric about the midpoint and, on the
/// right half, about the midpoint of that half. The identities
///   mu_3 = mu_2(V; right half),  lambda_2 = lambda_1(V; right half)
/// are verified whenever V is symmetric about the midpoint.
inline InequalityReport check_higher_remark(const Potential1D& v0, IntervalDomain dom, CheckOptions opt = {}) {
    auto v = detail::on_domain(v0, dom);
    if (v.meta().symmetric != Tri::Yes)
        return inapplicable_report("R3.5-higher", "V is not symmetric about the interval midpoint");
    const IntervalDomain half(dom.midpoint(), dom.b);
    auto vh = v.restricted(half);
    const auto& mh = vh.meta();

    InequalityReport r;
    r.theorem_id = "R3.5-higher";
    bool lam_left = true; // lhs = lambda2
    bool predicted = true;
    if (v.meta().is_constant) {
        r.expectation = Expectation::Equal;
        r.reason = "constant potential: equality expected";
    } else if (mh.symmetric != Tri::Yes) {
        predicted = false;
        r.reason = "V is not symmetric about the midpoint of the right half; ordering measured only";
    } else if (mh.monotone_right_half == Monotone::NonDecreasing) {
        r.reason = "doubly symmetric, non-decreasing on the right quarter";
    } else if (mh.monotone_right_half == Monotone::NonIncreasing) {
        lam_left = false;
        r.reason = "doubly symmetric, non-increasing on the right quarter";
    } else {
        predicted = false;
        r.reason = "monotonicity on the right quarter is " + to_string(mh.monotone_right_half);
    }
    r.lhs_label = lam_left ? "lambda2" : "mu3";
    r.rhs_label = lam_left ? "mu3" : "lambda2";

    auto compute = [&](int level) {
        InequalityReport q = r;
        auto nn = detail::spectrum_at(v, dom, BoundaryPair::NN(), 3, opt.tol, level);
        auto dd = detail::spectrum_at(v, dom, BoundaryPair::DD(), 2, opt.tol, level);
        auto hn = detail::spectrum_at(vh, half, BoundaryPair::NN(), 2, opt.tol, level);
        auto hd = detail::spectrum_at(vh, half, BoundaryPair::DD(), 1, opt.tol, level);
        double mu3 = nn[2], l2 = dd[1];
        if (lam_left)
            detail::fill_margin(q, l2, dd.error_estimate[1], mu3, nn.error_estimate[2]);
        else
            detail::fill_margin(q, mu3, nn.error_estimate[2], l2, dd.error_estimate[1]);
        q.details["mu3"] = mu3;
        q.details["lambda2"] = l2;
        q.details["half_mu2"] = hn[1];
        q.details["half_lambda1"] = hd[0];
        bool ok = std::abs(mu3 - hn[1]) <= 10.0 * (nn.error_estimate[2] + hn.error_estimate[1]) + 1e-12 &&
                  std::abs(l2 - hd[0]) <= 10.0 * (dd.error_estimate[1] + hd.error_estimate[0]) + 1e-12;
        q.details["identities_hold"] = ok ? 1.0 : 0.0;
        return q;
    };
    r = compute(0);
    if (!predicted) {
        // No structural prediction: keep the measured numbers, no verdict.
        r.applicable = false;
        r.details["measured_margin_mu3_minus_lambda2"] = r.details["mu3"] - r.details["lambda2"];
        r.verdict = Verdict::Inapplicable;
        return r;
    }
    r.applicable = true;
    if (opt.confirm) detail::confirm_verdict(r, compute);
    return r;
}

struct QuotientDiagnostic {
    bool skipped = false;
    std::string reason;
    double lambda_dn = 0.0, lambda_nd = 0.0;
    bool strictly_decreasing = false;
    std::size_t checked_nodes = 0;
    std::size_t increases = 0;     // node pairs where psi/phi does not decrease
    double max_increase = 0.0;     // largest relative non-decrease
    int crossings = 0;             // sign changes of phi^2 - psi^2
    double x0 = 0.0;               // interpolated crossing
    std::vector<double> x, ratio;  // interior nodes used and psi/phi there
};

/// psi/phi for the lowest DN (phi) and ND (psi) eigenfunctions of tau V on
/// `dom`, away from the 5 nodes nearest each end.
inline QuotientDiagnostic quotient_diagnostic(const Potential1D& v0, IntervalDomain dom, double tau,
                                              std::size_t n = 2047) {
    auto v = scale_shift_potential(detail::on_domain(v0, dom), tau, 0.0);
    QuotientDiagnostic q;
    auto sdn = assemble(v, dom, BoundaryPair::DN(), n);
    auto snd = assemble(v, dom, BoundaryPair::ND(), n);
    auto ldn = lowest_eigenvalues(sdn, 1);
    auto lnd = lowest_eigenvalues(snd, 1);
    q.lambda_dn = ldn[0];
    q.lambda_nd = lnd[0];
    if (q.lambda_dn > q.lambda_nd + 1e-12 * (1.0 + std::abs(q.lambda_nd))) {
        q.skipped = true;
        q.reason = "precondition lambda1_DN <= lambda1_ND fails";
        return q;
    }
    auto phi = eigenfunction(sdn, ldn[0]).function_values;
    auto psi = eigenfunction(snd, lnd[0]).function_values;
    const std::size_t total = n + 2;
    const std::size_t skip = 5;
    double prev_ratio = 0.0, prev_d = 0.0, prev_x = 0.0;
    bool first = true;
    for (std::size_t j = skip; j + skip < total; ++j) {
        double xj = sdn.nodes[j];
        double r = psi[j] / phi[j];
        double d = phi[j] * phi[j] - psi[j] * psi[j];
        q.x.push_back(xj);
        q.ratio.push_back(r);
        if (!first) {
            if (!(r < prev_ratio)) {
                ++q.increases;
                q.max_increase = std::max(q.max_increase, (r - prev_ratio) / std::max(1e-300, std::abs(prev_ratio)));
            }
            if ((d > 0) != (prev_d > 0) && d != 0.0) {
                ++q.crossings;
                q.x0 = prev_x + (xj - prev_x) * prev_d / (prev_d - d);
            }
        }
        if (d != 0.0 || first) {
            prev_d = d;
            prev_x = xj;
        }
        prev_ratio = r;
        first = false;
    }
    q.checked_nodes = q.x.size();
    q.strictly_decreasing = q.increases == 0;
    return q;
}

struct SymmetricExtension {
    double c = 0.0;
    SpectrumResult direct_neumann, direct_dirichlet;       // on (-2, 2)
    SpectrumResult assembled_neumann, assembled_dirichlet; // from the half-interval problems
    double mu2_half = 0.0, lambda1_half = 0.0;             // analytic, on (0, 2)
    bool assembly_agrees = false;
    InequalityReport ordering; // lambda2 vs mu3 of the reflected potential
};

/// The step potential reflected to (-2, 2): c on (-1, 1), 0 elsewhere.
/// Spectra computed directly and by even/odd assembly from (0, 2); the
/// lambda2 / mu3 ordering is decided with the analytic half-interval values.
inline SymmetricExtension symmetric_extension_spectra(double c, std::size_t K, double tol = 1e-9) {
    if (!(c > 0)) throw std::invalid_argument("step height c must be positive");
    if (K < 3) K = 3;
    SymmetricExtension out;
    out.c = c;
    const IntervalDomain full(-2.0, 2.0), half(0.0, 2.0);
    auto vt = make_named_potential("symmetric_step", {c}, full);
    auto vh = make_named_potential("step", {c}, half);
    SolveOptions so;
    so.target_tol = tol;
    out.direct_neumann = solve(vt, full, BoundaryPair::NN(), K, so);
    out.direct_dirichlet = solve(vt, full, BoundaryPair::DD(), K, so);
    auto nn = solve(vh, half, BoundaryPair::NN(), K, so);
    auto dn = solve(vh, half, BoundaryPair::DN(), K, so);
    auto nd = solve(vh, half, BoundaryPair::ND(), K, so);
    auto dd = solve(vh, half, BoundaryPair::DD(), K, so);

    auto merge = [K](const SpectrumResult& even, const SpectrumResult& odd, const std::string& bc) {
        std::vector<std::pair<double, double>> all;
        for (std::size_t i = 0; i < even.size(); ++i) all.emplace_back(even[i], even.error_estimate[i]);
        for (std::size_t i = 0; i < odd.size(); ++i) all.emplace_back(odd[i], odd.error_estimate[i]);
        std::sort(all.begin(), all.end());
        SpectrumResult r;
        r.count_requested = K;
        r.bc = bc;
        r.discretization = even.discretization;
        for (std::size_t i = 0; i < K; ++i) {
            r.eigenvalues.push_back(all[i].first);
            r.error_estimate.push_back(all[i].second);
        }
        return r;
    };
    // Even modes: Neumann at the symmetry point; odd modes: Dirichlet there.
    out.assembled_neumann = merge(nn, dn, "NN");
    out.assembled_dirichlet = merge(nd, dd, "DD");

    out.assembly_agrees = true;
    for (std::size_t i = 0; i < K; ++i) {
        double bn = 10.0 * (out.direct_neumann.error_estimate[i] + out.assembled_neumann.error_estimate[i]) + 1e-12;
        double bd = 10.0 * (out.direct_dirichlet.error_estimate[i] + out.assembled_dirichlet.error_estimate[i]) + 1e-12;
        if (std::abs(out.direct_neumann[i] - out.assembled_neumann[i]) > bn) out.assembly_agrees = false;
        if (std::abs(out.direct_dirichlet[i] - out.assembled_dirichlet[i]) > bd) out.assembly_agrees = false;
    }

    auto an = step::step_spectrum(c, Boundary::Neumann, 2);
    auto ad = step::step_spectrum(c, Boundary::Dirichlet, 1);
    out.mu2_half = an[1];
    out.lambda1_half = ad[0];

    InequalityReport& r = out.ordering;
    r.theorem_id = "R3.5-higher";
    char label[64];
    std::snprintf(label, sizeof label, "reflected step c=%g", c);
    r.subject = label;
    r.applicable = false;
    r.reason = "no structural prediction; ordering of lambda2 and mu3 measured (analytic half-interval values)";
    r.lhs_label = "lambda2";
    r.rhs_label = "mu3";
    r.lhs = out.lambda1_half;
    r.rhs = out.mu2_half;
    r.margin = r.rhs - r.lhs;
    r.error_budget = 10.0 * (ad.error_estimate[0] + an.error_estimate[1]);
    r.verdict = Verdict::Inapplicable;
    r.details["fd_lambda2"] = out.direct_dirichlet[1];
    r.details["fd_mu3"] = out.direct_neumann[2];
    r.details["ordering"] = r.margin > r.error_budget ? 1.0 : (r.margin < -r.error_budget ? -1.0 : 0.0);
    return out;
}

} // namespace spectral_gap
