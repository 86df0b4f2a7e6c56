#pragma once

// Finite-difference solver for -u'' + V u = lambda u on an interval.
//
// Uniform grid x_j = a + j h, j = 0..n+1, h = L/(n+1). Dirichlet ends are
// eliminated; Neumann ends keep their node with half quadrature weight, which
// is the finite-volume form of the ghost-point reflection. The weighted
// problem A u = lambda W u is symmetrized as W^{-1/2} A W^{-1/2}.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "spectral_gap/potential.hpp"
#include "spectral_gap/tridiagonal.hpp"
#include "spectral_gap/types.hpp"

namespace spectral_gap {

struct TridiagonalSystem {
    SymTridiagonal matrix;      // symmetrized operator
    std::vector<double> nodes;  // all grid nodes, boundary included (n + 2 entries)
    std::vector<double> weights; // quadrature weight per unknown
    std::vector<double> potential; // potential value per unknown
    std::vector<unsigned char> links; // grid intervals attached to each unknown (1 at a Neumann end)
    std::size_t first_unknown = 0; // index into `nodes` of unknown 0
    std::size_t interior = 0;      // n
    double h = 0.0;
    IntervalDomain domain;
    BoundaryPair bc;

    std::size_t unknowns() const noexcept { return matrix.size(); }
};

/// Grid ceiling for `solve`, overridable via SPECTRAL_GAP_NMAX.
inline std::size_t grid_ceiling() {
    std::size_t nmax = std::size_t{1} << 18;
    if (const char* env = std::getenv("SPECTRAL_GAP_NMAX")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v >= 16) nmax = static_cast<std::size_t>(v);
    }
    return nmax;
}

/// Assembles the symmetrized tridiagonal system with `n` interior nodes.
/// Potential values are point samples, except for piecewise-constant
/// potentials which use exact control-volume averages.
inline TridiagonalSystem assemble(const Potential1D& v, IntervalDomain dom, BoundaryPair bc, std::size_t n) {
    if (n < 16) throw std::invalid_argument("assemble: need at least 16 interior nodes");
    TridiagonalSystem sys;
    sys.domain = dom;
    sys.bc = bc;
    sys.interior = n;
    sys.h = dom.length() / static_cast<double>(n + 1);
    const double h = sys.h;
    sys.nodes.resize(n + 2);
    for (std::size_t j = 0; j < n + 2; ++j) sys.nodes[j] = dom.a + h * static_cast<double>(j);
    sys.nodes.back() = dom.b;

    const bool left_n = bc.left == Boundary::Neumann;
    const bool right_n = bc.right == Boundary::Neumann;
    const std::size_t j0 = left_n ? 0 : 1;
    const std::size_t j1 = right_n ? n + 1 : n;
    sys.first_unknown = j0;
    const std::size_t m = j1 - j0 + 1;

    sys.weights.resize(m);
    sys.potential.resize(m);
    sys.links.resize(m);
    sys.matrix.diag.resize(m);
    sys.matrix.off.resize(m - 1);
    const bool pc = v.is_piecewise_constant();
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = j0 + i;
        bool end = (j == 0) || (j == n + 1);
        double w = end ? 0.5 * h : h;
        double x = sys.nodes[j];
        double val;
        if (pc) {
            double lo = std::max(dom.a, x - 0.5 * h);
            double hi = std::min(dom.b, x + 0.5 * h);
            val = v.average(lo, hi);
        } else {
            val = v(x);
        }
        if (!std::isfinite(val)) throw SolverError("potential evaluation failed at x = " + std::to_string(x));
        double links = end ? 1.0 : 2.0;
        sys.links[i] = end ? 1 : 2;
        sys.weights[i] = w;
        sys.potential[i] = val;
        sys.matrix.diag[i] = links / (h * w) + val;
    }
    for (std::size_t i = 0; i + 1 < m; ++i)
        sys.matrix.off[i] = -1.0 / (h * std::sqrt(sys.weights[i] * sys.weights[i + 1]));
    return sys;
}

/// Number of eigenvalues below `sigma`, from the inertia of A - sigma W.
///
/// The pivots are carried as h*Q_i = 1 + s_i with s_i updated directly
/// (s_i = s_{i-1}/(1+s_{i-1}) + h w_i (V_i - sigma)), so the O(1/h^2)
/// diagonal and off-diagonal terms never cancel in floating point. The
/// plain LDL^T recurrence loses about log10(n^3) digits on this matrix.
inline std::size_t sturm_count(const TridiagonalSystem& sys, double sigma) {
    const std::size_t m = sys.unknowns();
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t count = 0;
    double s_prev = 0.0, p_prev = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        double g = sys.h * sys.weights[i] * (sys.potential[i] - sigma);
        double s, p;
        if (i == 0) {
            s = sys.links[0] == 1 ? g : 1.0 + g;
            p = 1.0 + s;
        } else {
            double t = s_prev / p_prev;
            if (sys.links[i] == 2) {
                s = t + g;
                p = 1.0 + s;
            } else {
                p = t + g;
                s = p - 1.0;
            }
        }
        if (std::abs(p) < tiny) {
            p = -tiny;
            s = -1.0 - tiny;
        }
        if (p < 0) ++count;
        s_prev = s;
        p_prev = p;
    }
    return count;
}

/// K smallest eigenvalues of an assembled system by Sturm bisection.
inline SpectrumResult lowest_eigenvalues(const TridiagonalSystem& sys, std::size_t count) {
    if (count == 0) throw std::invalid_argument("lowest_eigenvalues: K must be positive");
    if (count > sys.unknowns() / 4)
        throw std::invalid_argument("lowest_eigenvalues: K exceeds n/4 accuracy guard");
    double vmin = *std::min_element(sys.potential.begin(), sys.potential.end());
    double vmax = 0.0;
    for (double v : sys.potential) vmax = std::max(vmax, std::abs(v));
    // The kinetic part is positive semi-definite, so min V bounds the spectrum below.
    const double lo = vmin - 1.0;
    const double hi = sys.matrix.gershgorin().second + 1.0;
    const double abs_tol = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + vmax);
    auto counter = [&sys](double x) { return sturm_count(sys, x); };

    SpectrumResult r;
    r.eigenvalues.resize(count);
    double lower = lo;
    for (std::size_t k = 0; k < count; ++k) {
        r.eigenvalues[k] = bisect_eigenvalue(counter, k, lower, hi, abs_tol);
        lower = std::max(lo, r.eigenvalues[k] - 1e-9 * (1.0 + std::abs(r.eigenvalues[k])));
        if (k > 0) r.eigenvalues[k] = std::max(r.eigenvalues[k], r.eigenvalues[k - 1]);
    }
    r.error_estimate.resize(count);
    for (std::size_t k = 0; k < count; ++k) r.error_estimate[k] = std::max(abs_tol, 1e-13 * std::abs(r.eigenvalues[k]));
    r.count_requested = count;
    r.bc = to_string(sys.bc);
    r.discretization = {"fd", sys.interior, -1, 0};
    if (count >= 2) r.lowest_near_degenerate = r.eigenvalues[1] - r.eigenvalues[0] < 1e-8;
    return r;
}

struct SolveOptions {
    double target_tol = 1e-9;
    std::optional<std::size_t> initial_n;
    std::optional<std::size_t> max_n;
};

/// Starting grid: n + 1 is a power of two so that breakpoints at dyadic
/// fractions of the interval stay on nodes at every refinement.
inline std::size_t default_initial_n(const Potential1D& v, std::size_t count) {
    std::size_t cells = v.is_piecewise_constant() ? 4096 : 256;
    while (cells < 16 * count) cells *= 2;
    return cells - 1;
}

/// Richardson step for an O(h^2) error model with h halved.
inline double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

/// Extrapolated eigenvalues: grids n, 2n+1, 4n+3, ... until two successive
/// extrapolated values differ by less than target_tol.
inline SpectrumResult solve(const Potential1D& v, IntervalDomain dom, BoundaryPair bc, std::size_t count,
                            SolveOptions opt = {}) {
    if (!(opt.target_tol >= 1e-10)) throw std::invalid_argument("solve: target_tol must be >= 1e-10");
    std::size_t n = opt.initial_n.value_or(default_initial_n(v, count));
    const std::size_t nmax = opt.max_n.value_or(grid_ceiling());
    // Three grids n, 2n + 1, 4n + 3 are needed for one error estimate; shrink
    // the start so they fit under the ceiling.
    if (4 * n + 3 > nmax) n = std::max<std::size_t>(16, (nmax - 3) / 4);

    auto coarse = lowest_eigenvalues(assemble(v, dom, bc, n), count);
    n = 2 * n + 1;
    auto fine = lowest_eigenvalues(assemble(v, dom, bc, n), count);
    std::vector<double> ext(count), prev(count);
    for (std::size_t k = 0; k < count; ++k) ext[k] = richardson(coarse.eigenvalues[k], fine.eigenvalues[k]);

    SpectrumResult best;
    best.count_requested = count;
    best.bc = to_string(bc);
    while (true) {
        prev = ext;
        coarse = std::move(fine);
        n = 2 * n + 1;
        fine = lowest_eigenvalues(assemble(v, dom, bc, n), count);
        double worst = 0.0;
        std::vector<double> err(count);
        for (std::size_t k = 0; k < count; ++k) {
            ext[k] = richardson(coarse.eigenvalues[k], fine.eigenvalues[k]);
            err[k] = std::abs(ext[k] - prev[k]);
            worst = std::max(worst, err[k]);
        }
        best.eigenvalues = ext;
        best.error_estimate = err;
        best.discretization = {"fd", n, -1, 2};
        if (count >= 2) best.lowest_near_degenerate = ext[1] - ext[0] < 1e-8;
        if (worst < opt.target_tol) return best;
        if (2 * n + 1 > nmax)
        {
            char msg[160];
            std::snprintf(msg, sizeof msg, "eig1d: no convergence to %g before n = %zu (last change %g)",
                          opt.target_tol, nmax, worst);
            throw ConvergenceError(msg, best);
        }
    }
}

/// Normalized eigenfunction for `eigenvalue` by inverse iteration.
/// `cluster` holds previously found unit vectors of the same degenerate cluster.
inline Eigenpair eigenfunction(const TridiagonalSystem& sys, double eigenvalue,
                               const std::vector<std::vector<double>>& cluster = {}) {
    // Precondition: eigenvalue within 1e-6 of the discrete spectrum.
    const double probe = 1e-6 * std::max(1.0, std::abs(eigenvalue));
    if (sys.matrix.sturm_count(eigenvalue + probe) == sys.matrix.sturm_count(eigenvalue - probe))
        throw std::invalid_argument("eigenfunction: value is not within 1e-6 of a discrete eigenvalue");

    auto ii = inverse_iteration(sys.matrix, eigenvalue, cluster);
    const double scale = std::max(1.0, sys.matrix.norm_bound());
    if (ii.residual > 1e-8 * scale)
        throw SolverError("eigenfunction: inverse iteration residual " + std::to_string(ii.residual) +
                          " above tolerance");

    Eigenpair p;
    p.eigenvalue = eigenvalue;
    p.nodes = sys.nodes;
    p.function_values.assign(sys.nodes.size(), 0.0);
    p.weights.assign(sys.nodes.size(), 0.0);
    for (std::size_t i = 0; i < sys.unknowns(); ++i) {
        std::size_t j = sys.first_unknown + i;
        p.function_values[j] = ii.vector[i] / std::sqrt(sys.weights[i]);
        p.weights[j] = sys.weights[i];
    }
    double norm2 = 0.0;
    for (std::size_t j = 0; j < p.nodes.size(); ++j) norm2 += p.weights[j] * p.function_values[j] * p.function_values[j];
    double nrm = std::sqrt(norm2);
    for (double& u : p.function_values) u /= nrm;
    auto first = std::find_if(p.function_values.begin(), p.function_values.end(),
                              [](double u) { return std::abs(u) > 1e-300; });
    if (first != p.function_values.end() && *first < 0)
        for (double& u : p.function_values) u = -u;
    norm2 = 0.0;
    for (std::size_t j = 0; j < p.nodes.size(); ++j) norm2 += p.weights[j] * p.function_values[j] * p.function_values[j];
    p.norm = std::sqrt(norm2);
    p.residual = ii.residual;
    return p;
}

/// Unit vectors of the symmetrized system for the K lowest eigenvalues
/// (clusters with gap < 1e-8 are orthogonalized among themselves).
inline std::vector<Eigenpair> eigenpairs(const TridiagonalSystem& sys, std::size_t count) {
    auto spec = lowest_eigenvalues(sys, count);
    std::vector<Eigenpair> out;
    std::vector<std::vector<double>> cluster;
    for (std::size_t k = 0; k < count; ++k) {
        if (k > 0 && spec.eigenvalues[k] - spec.eigenvalues[k - 1] >= 1e-8) cluster.clear();
        out.push_back(eigenfunction(sys, spec.eigenvalues[k], cluster));
        std::vector<double> unit(sys.unknowns());
        for (std::size_t i = 0; i < sys.unknowns(); ++i)
            unit[i] = out.back().function_values[sys.first_unknown + i] * std::sqrt(sys.weights[i]);
        cluster.push_back(std::move(unit));
    }
    return out;
}

/// Discrete quadratic form sum (u_{j+1}-u_j)^2/h + sum w_j V_j u_j^2.
inline double quadratic_form(const TridiagonalSystem& sys, const Eigenpair& p) {
    double s = 0.0;
    const auto& u = p.function_values;
    for (std::size_t j = 0; j + 1 < u.size(); ++j) s += (u[j + 1] - u[j]) * (u[j + 1] - u[j]) / sys.h;
    for (std::size_t i = 0; i < sys.unknowns(); ++i) {
        double uj = u[sys.first_unknown + i];
        s += sys.weights[i] * sys.potential[i] * uj * uj;
    }
    return s;
}

/// Weighted integral of g * u^2 over the unknown nodes, with g given per unknown.
inline double weighted_expectation(const TridiagonalSystem& sys, const Eigenpair& p, const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < sys.unknowns(); ++i) {
        double uj = p.function_values[sys.first_unknown + i];
        s += sys.weights[i] * g[i] * uj * uj;
    }
    return s;
}

/// Interior sign changes of a grid function (exact zeros skipped).
inline int sign_changes(const std::vector<double>& u, std::size_t skip_ends = 1) {
    int changes = 0;
    double last = 0.0;
    for (std::size_t j = skip_ends; j + skip_ends < u.size(); ++j) {
        if (u[j] == 0.0) continue;
        if (last != 0.0 && (u[j] > 0) != (last > 0)) ++changes;
        last = u[j];
    }
    return changes;
}

} // namespace spectral_gap
