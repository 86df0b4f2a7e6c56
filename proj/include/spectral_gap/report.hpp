#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>

namespace spectral_gap {

enum class Verdict { HoldsStrictly, HoldsWithinTolerance, Violated, Inapplicable };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::HoldsStrictly: return "holds strictly";
    case Verdict::HoldsWithinTolerance: return "holds within tolerance";
    case Verdict::Violated: return "violated";
    case Verdict::Inapplicable: return "inapplicable";
    }
    return "?";
}

/// What the check predicts: lhs < rhs, lhs <= rhs, or lhs == rhs.
enum class Expectation { Less, LessEqual, Equal };

inline std::string to_string(Expectation e) {
    switch (e) {
    case Expectation::Less: return "<";
    case Expectation::LessEqual: return "<=";
    case Expectation::Equal: return "=";
    }
    return "?";
}

struct InequalityReport {
    std::string theorem_id;
    std::string subject; // potential / domain label for merged output
    bool applicable = false;
    std::string reason;
    Expectation expectation = Expectation::Less;
    std::string lhs_label, rhs_label;
    double lhs = 0.0, rhs = 0.0;
    double margin = 0.0; // rhs - lhs
    double error_budget = 0.0;
    Verdict verdict = Verdict::Inapplicable;
    /// Result of the re-run at doubled resolution with half the budget
    /// (set for strict / violated verdicts only).
    std::optional<bool> reproduced;
    std::map<std::string, double> details;
};

/// Verdict from margin and budget. For Less/LessEqual a negative margin
/// beyond the budget is a violation. For Equal any |margin| beyond the
/// budget is a violation.
inline Verdict classify(double margin, double budget, Expectation e) {
    if (e == Expectation::Equal) return std::abs(margin) <= budget ? Verdict::HoldsWithinTolerance : Verdict::Violated;
    if (margin < -budget) return Verdict::Violated;
    if (margin > budget) return Verdict::HoldsStrictly;
    return Verdict::HoldsWithinTolerance;
}

inline InequalityReport inapplicable_report(std::string id, std::string reason) {
    InequalityReport r;
    r.theorem_id = std::move(id);
    r.applicable = false;
    r.reason = std::move(reason);
    r.verdict = Verdict::Inapplicable;
    return r;
}

} // namespace spectral_gap
