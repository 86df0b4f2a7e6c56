#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spectral_gap {

/// Closed interval [a, b] with a < b.
struct IntervalDomain {
    double a = 0.0;
    double b = 1.0;

    IntervalDomain() = default;
    IntervalDomain(double lo, double hi) : a(lo), b(hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            throw std::invalid_argument("IntervalDomain: need finite a < b");
    }

    static IntervalDomain symmetric(double r) { return {-r, r}; }

    double length() const noexcept { return b - a; }
    double midpoint() const noexcept { return 0.5 * (a + b); }
    bool contains(double x) const noexcept { return x >= a && x <= b; }

    friend bool operator==(const IntervalDomain&, const IntervalDomain&) = default;
};

enum class Boundary { Dirichlet, Neumann };

struct BoundaryPair {
    Boundary left = Boundary::Dirichlet;
    Boundary right = Boundary::Dirichlet;

    static constexpr BoundaryPair DD() { return {Boundary::Dirichlet, Boundary::Dirichlet}; }
    static constexpr BoundaryPair NN() { return {Boundary::Neumann, Boundary::Neumann}; }
    static constexpr BoundaryPair DN() { return {Boundary::Dirichlet, Boundary::Neumann}; }
    static constexpr BoundaryPair ND() { return {Boundary::Neumann, Boundary::Dirichlet}; }

    friend constexpr bool operator==(const BoundaryPair&, const BoundaryPair&) = default;
};

inline std::string to_string(BoundaryPair bc) {
    std::string s;
    s += bc.left == Boundary::Dirichlet ? 'D' : 'N';
    s += bc.right == Boundary::Dirichlet ? 'D' : 'N';
    return s;
}

inline BoundaryPair parse_boundary_pair(std::string_view s) {
    if (s == "DD") return BoundaryPair::DD();
    if (s == "NN") return BoundaryPair::NN();
    if (s == "DN") return BoundaryPair::DN();
    if (s == "ND") return BoundaryPair::ND();
    throw std::invalid_argument("unknown boundary pair '" + std::string(s) + "' (expected DD, NN, DN or ND)");
}

inline std::string to_string(Boundary b) { return b == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

/// Tri-state flag used for declared potential structure.
enum class Tri { Unknown, No, Yes };

enum class Monotone { Unknown, None, Constant, NonIncreasing, NonDecreasing };
enum class Convexity { Unknown, Neither, Constant, Convex, Concave };

inline std::string to_string(Tri t) {
    switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
    }
}
inline std::string to_string(Monotone m) {
    switch (m) {
    case Monotone::None: return "none";
    case Monotone::Constant: return "constant";
    case Monotone::NonIncreasing: return "non-increasing";
    case Monotone::NonDecreasing: return "non-decreasing";
    default: return "unknown";
    }
}
inline std::string to_string(Convexity c) {
    switch (c) {
    case Convexity::Neither: return "neither";
    case Convexity::Constant: return "constant";
    case Convexity::Convex: return "convex";
    case Convexity::Concave: return "concave";
    default: return "unknown";
    }
}

/// How the eigenvalues were produced.
struct Discretization {
    std::string method;        // "fd", "analytic", "fem-p1", "tensor"
    std::size_t grid_size = 0; // interior nodes (1D) or unknowns (2D) at the finest level
    int mesh_level = -1;
    int extrapolation_order = 0;
};

struct SpectrumResult {
    std::vector<double> eigenvalues;
    std::vector<double> error_estimate;
    std::size_t count_requested = 0;
    std::string bc;
    Discretization discretization;
    /// Set when the lowest eigenvalue is not separated from the second one
    /// by more than the cluster tolerance.
    bool lowest_near_degenerate = false;

    double operator[](std::size_t i) const { return eigenvalues.at(i); }
    std::size_t size() const noexcept { return eigenvalues.size(); }
    double max_error() const {
        double m = 0.0;
        for (double e : error_estimate) m = std::max(m, e);
        return m;
    }
};

/// Groups of (value, multiplicity) for eigenvalues closer than `gap`.
inline std::vector<std::pair<double, int>> group_multiplicities(const std::vector<double>& sorted, double gap) {
    std::vector<std::pair<double, int>> out;
    for (double v : sorted) {
        if (!out.empty() && std::abs(v - out.back().first) < gap) {
            ++out.back().second;
        } else {
            out.emplace_back(v, 1);
        }
    }
    return out;
}

struct Eigenpair {
    double eigenvalue = 0.0;
    std::vector<double> nodes;           // coordinates of the grid nodes, boundary nodes included
    std::vector<double> function_values; // one value per entry of `nodes`
    std::vector<double> weights;         // quadrature weights on `nodes`
    double norm = 0.0;                   // discrete L2 norm after normalization
    double residual = 0.0;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when mesh refinement hits its ceiling before reaching the tolerance.
/// Carries the best estimate obtained.
class ConvergenceError : public SolverError {
public:
    ConvergenceError(const std::string& what, SpectrumResult best)
        : SolverError(what), best_(std::move(best)) {}
    const SpectrumResult& best() const noexcept { return best_; }

private:
    SpectrumResult best_;
};

} // namespace spectral_gap
