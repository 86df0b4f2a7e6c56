#pragma once

// Neumann/Dirichlet comparisons on convex polygons: index shift by the
// dimension of a direction along which V is constant, and the concave case.

#include <cmath>
#include <string>
#include <vector>

#include "spectral_gap/fem2d.hpp"
#include "spectral_gap/report.hpp"

namespace spectral_gap {

/// mu_{k+r} <= lambda_k for k = 1..K, with r = 2 for constant V and r = 1
/// when V has a gradient-orthogonal direction.
inline std::vector<InequalityReport> check_thm42(const Potential2D& v, std::size_t count, int level = 5) {
    const auto& m = v.meta();
    std::size_t r = 0;
    std::string why;
    if (m.is_constant) {
        r = 2;
        why = "constant potential (r = 2)";
    } else if (m.gradient_orthogonal) {
        r = 1;
        why = "gradient orthogonal to a fixed direction (r = 1)";
    } else {
        return {inapplicable_report("T4.2", "no gradient-orthogonal direction declared and V not constant")};
    }
    auto dir = solve2d(v, Bc2D::Dirichlet, count, level);
    auto neu = solve2d(v, Bc2D::Neumann, count + r, level);
    std::vector<InequalityReport> out;
    for (std::size_t k = 1; k <= count; ++k) {
        InequalityReport q;
        q.theorem_id = "T4.2";
        q.subject = v.name();
        q.applicable = true;
        q.reason = why;
        q.expectation = Expectation::LessEqual;
        q.lhs_label = "mu" + std::to_string(k + r);
        q.rhs_label = "lambda" + std::to_string(k);
        q.lhs = neu.spectrum[k + r - 1];
        q.rhs = dir.spectrum[k - 1];
        q.margin = q.rhs - q.lhs;
        q.error_budget = 10.0 * (neu.spectrum.error_estimate[k + r - 1] + dir.spectrum.error_estimate[k - 1]);
        q.verdict = classify(q.margin, q.error_budget, q.expectation);
        q.details["k"] = static_cast<double>(k);
        q.details["r"] = static_cast<double>(r);
        q.details["mesh_level"] = level;
        q.details["raw_mu"] = neu.fine[k + r - 1];
        q.details["raw_lambda"] = dir.fine[k - 1];
        out.push_back(std::move(q));
    }
    return out;
}

/// Whether the polygon and V are both symmetric about each coordinate axis.
inline bool doubly_symmetric(const Potential2D& v) {
    return v.domain().symmetric_about_axis(0) && v.domain().symmetric_about_axis(1) && v.meta().axis_symmetric[0] &&
           v.meta().axis_symmetric[1];
}

/// mu_2 <= lambda_1 for concave V (strict if the Hessian is negative definite
/// somewhere), and mu_3 <= lambda_1 when additionally doubly symmetric.
/// Margins are taken at `level` and `level + 1`; strictness needs both.
inline std::vector<InequalityReport> check_thm44_45(const Potential2D& v, int level = 4) {
    if (!v.meta().concave) return {inapplicable_report("T4.4", "V is not declared concave")};
    const bool sym = doubly_symmetric(v);
    const bool strict = v.hessian_negative_definite_somewhere();
    const std::size_t nk = sym ? 3 : 2;

    std::vector<SpectrumResult> neu, dir;
    for (int l = level - 1; l <= level + 1; ++l) {
        neu.push_back(fem_eigenvalues(v, Bc2D::Neumann, nk, l));
        dir.push_back(fem_eigenvalues(v, Bc2D::Dirichlet, 1, l));
    }
    FemSpectrum n1 = extrapolate(neu[0], neu[1]), n2 = extrapolate(neu[1], neu[2]);
    FemSpectrum d1 = extrapolate(dir[0], dir[1]), d2 = extrapolate(dir[1], dir[2]);

    auto make = [&](const std::string& id, std::size_t idx) {
        InequalityReport q;
        q.theorem_id = id;
        q.subject = v.name();
        q.applicable = true;
        q.expectation = strict ? Expectation::Less : Expectation::LessEqual;
        q.reason = std::string("concave") + (sym ? ", doubly symmetric" : "") +
                   (strict ? ", Hessian negative definite on a sample point" : ", Hessian not negative definite");
        q.lhs_label = "mu" + std::to_string(idx + 1);
        q.rhs_label = "lambda1";
        // Report the finer level; the coarser one gates strictness.
        q.lhs = n2.spectrum[idx];
        q.rhs = d2.spectrum[0];
        q.margin = q.rhs - q.lhs;
        q.error_budget = 10.0 * (n2.spectrum.error_estimate[idx] + d2.spectrum.error_estimate[0]);
        const double m1 = d1.spectrum[0] - n1.spectrum[idx];
        const double b1 = 10.0 * (n1.spectrum.error_estimate[idx] + d1.spectrum.error_estimate[0]);
        Verdict v1 = classify(m1, b1, q.expectation);
        Verdict v2 = classify(q.margin, q.error_budget, q.expectation);
        if (v1 == Verdict::Violated || v2 == Verdict::Violated)
            q.verdict = Verdict::Violated;
        else if (strict && v1 == Verdict::HoldsStrictly && v2 == Verdict::HoldsStrictly)
            q.verdict = Verdict::HoldsStrictly;
        else
            q.verdict = Verdict::HoldsWithinTolerance;
        q.details["margin_level_" + std::to_string(level)] = m1;
        q.details["margin_level_" + std::to_string(level + 1)] = q.margin;
        q.details["budget_level_" + std::to_string(level)] = b1;
        q.details["margin_drift"] = std::abs(q.margin - m1) / std::max(std::abs(q.margin), 1e-300);
        q.details["same_sign"] = (m1 > 0) == (q.margin > 0) ? 1.0 : 0.0;
        return q;
    };
    std::vector<InequalityReport> out;
    out.push_back(make("T4.4", 1));
    if (sym) out.push_back(make("T4.5", 2));
    else {
        auto r = inapplicable_report("T4.5", "polygon or potential not symmetric about both axes");
        r.subject = v.name();
        out.push_back(r);
    }
    return out;
}

} // namespace spectral_gap
