#pragma once

// Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, and
// eigenvectors by inverse iteration. Used by both the 1D finite-difference
// solver and the 2D FEM path after Householder reduction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "spectral_gap/types.hpp"

namespace spectral_gap {

struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off; // size diag.size() - 1

    std::size_t size() const noexcept { return diag.size(); }

    /// Gershgorin enclosure of the spectrum.
    std::pair<double, double> gershgorin() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        const std::size_t n = diag.size();
        for (std::size_t i = 0; i < n; ++i) {
            double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
            lo = std::min(lo, diag[i] - r);
            hi = std::max(hi, diag[i] + r);
        }
        return {lo, hi};
    }

    double norm_bound() const {
        auto [lo, hi] = gershgorin();
        return std::max(std::abs(lo), std::abs(hi));
    }

    /// Number of eigenvalues strictly below `x` (inertia of T - xI via LDL^T).
    std::size_t sturm_count(double x) const {
        const std::size_t n = diag.size();
        const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, norm_bound());
        std::size_t count = 0;
        double q = diag[0] - x;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0) ++count;
        for (std::size_t i = 1; i < n; ++i) {
            q = diag[i] - x - off[i - 1] * off[i - 1] / q;
            if (std::abs(q) < pivmin) q = -pivmin;
            if (q < 0) ++count;
        }
        return count;
    }

    /// y = T x
    std::vector<double> apply(std::span<const double> x) const {
        const std::size_t n = diag.size();
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += off[i - 1] * x[i - 1];
            if (i + 1 < n) s += off[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }
};

struct BisectionOptions {
    double rel_tol = 1e-13;
    int max_iter = 200;
};

/// Eigenvalue number `k` (0-based, ascending) by bisection of [lo, hi] on a
/// counting function `count(x)` = number of eigenvalues below x.
template <class Count>
double bisect_eigenvalue(Count&& count, std::size_t k, double lo, double hi, double abs_tol,
                         BisectionOptions opt = {}) {
    for (int it = 0; it < opt.max_iter; ++it) {
        double width = hi - lo;
        if (width <= std::max(abs_tol, opt.rel_tol * std::max(std::abs(lo), std::abs(hi)))) return 0.5 * (lo + hi);
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) return mid;
        if (count(mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    throw SolverError("Sturm bisection did not converge after " + std::to_string(opt.max_iter) +
                      " iterations (eigenvalue index " + std::to_string(k) + ")");
}

inline double bisect_eigenvalue(const SymTridiagonal& t, std::size_t k, BisectionOptions opt = {}) {
    if (k >= t.size()) throw std::invalid_argument("eigenvalue index exceeds matrix dimension");
    auto [lo, hi] = t.gershgorin();
    const double pad = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    const double abs_tol = 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t.norm_bound());
    return bisect_eigenvalue([&t](double x) { return t.sturm_count(x); }, k, lo - pad, hi + pad, abs_tol, opt);
}

/// The K smallest eigenvalues, ascending.
inline std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count, BisectionOptions opt = {}) {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = bisect_eigenvalue(t, k, opt);
    // Bisection of separate indices is monotone in exact arithmetic; enforce it.
    for (std::size_t k = 1; k < count; ++k) out[k] = std::max(out[k], out[k - 1]);
    return out;
}

namespace detail {

/// Solves (T - sigma I) y = b with partial pivoting; tiny pivots are replaced
/// by a perturbation of size eps*|T| (standard for inverse iteration).
class ShiftedTridiagonalLU {
public:
    ShiftedTridiagonalLU(const SymTridiagonal& t, double sigma) : n_(t.size()) {
        d_.resize(n_);
        du_.assign(n_, 0.0);
        du2_.assign(n_, 0.0);
        dl_.assign(n_, 0.0);
        piv_.assign(n_, false);
        const double tiny = std::numeric_limits<double>::epsilon() * std::max(1.0, t.norm_bound());
        std::vector<double> sub(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            d_[i] = t.diag[i] - sigma;
            if (i + 1 < n_) {
                du_[i] = t.off[i];
                sub[i] = t.off[i];
            }
        }
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (std::abs(d_[i]) >= std::abs(sub[i])) {
                if (std::abs(d_[i]) < tiny) d_[i] = tiny;
                double l = sub[i] / d_[i];
                dl_[i] = l;
                d_[i + 1] -= l * du_[i];
            } else {
                // swap rows i and i+1
                piv_[i] = true;
                double l = d_[i] / sub[i];
                dl_[i] = l;
                d_[i] = sub[i];
                double tmp = d_[i + 1];
                d_[i + 1] = du_[i] - l * tmp;
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -l * du2_[i];
                }
                du_[i] = tmp;
            }
        }
        if (n_ > 0 && std::abs(d_[n_ - 1]) < tiny) d_[n_ - 1] = tiny;
    }

    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (!piv_[i]) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                double tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - dl_[i] * b[i];
            }
        }
        for (std::size_t i = n_; i-- > 0;) {
            double s = b[i];
            if (i + 1 < n_) s -= du_[i] * b[i + 1];
            if (i + 2 < n_) s -= du2_[i] * b[i + 2];
            b[i] = s / d_[i];
        }
    }

private:
    std::size_t n_;
    std::vector<double> d_, du_, du2_, dl_;
    std::vector<bool> piv_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void normalize(std::vector<double>& v) {
    double n = std::sqrt(dot(v, v));
    for (double& x : v) x /= n;
}

} // namespace detail

struct InverseIterationResult {
    std::vector<double> vector; // unit Euclidean norm
    double residual = 0.0;      // |T v - lambda v|
};

/// Eigenvector for `lambda` by inverse iteration from a seeded random start,
/// re-orthogonalized against `previous` (members of the same cluster).
inline InverseIterationResult inverse_iteration(const SymTridiagonal& t, double lambda,
                                                const std::vector<std::vector<double>>& previous,
                                                std::uint64_t seed = 0x5EED, int iterations = 3) {
    const std::size_t n = t.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);

    auto orthogonalize = [&](std::vector<double>& y) {
        for (const auto& p : previous) {
            double c = detail::dot(p, y);
            for (std::size_t i = 0; i < n; ++i) y[i] -= c * p[i];
        }
    };
    orthogonalize(v);
    detail::normalize(v);

    detail::ShiftedTridiagonalLU lu(t, lambda);
    for (int it = 0; it < iterations; ++it) {
        lu.solve(v);
        orthogonalize(v);
        detail::normalize(v);
    }
    auto tv = t.apply(v);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += (tv[i] - lambda * v[i]) * (tv[i] - lambda * v[i]);
    return {std::move(v), std::sqrt(r)};
}

} // namespace spectral_gap
