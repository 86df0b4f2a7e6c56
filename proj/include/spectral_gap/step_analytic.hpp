#pragma once

// Exact spectrum of the step potential V = c on (0,1), 0 on (1,2), via its
// secular equations. With z = k^2 - c the functions
//   S(z) = sin(sqrt z)/sqrt z,  C(z) = cos(sqrt z)
// are entire in z (sinh/cosh below the barrier), which keeps everything on
// the real line:
//   Dirichlet: sqrt(z) sin k cos sqrt(z) + k cos k sin sqrt(z) = sqrt(z) * F(k)
//              F(k) = sin k C(z) + k cos k S(z)
//   Neumann:   G(k) = z S(z) cos k + k sin k C(z)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectral_gap/types.hpp"

namespace spectral_gap::step {

namespace detail {

constexpr double kTaylorBand = 1e-6;

/// sin(sqrt z)/sqrt z, continued to z < 0.
inline double sinc_sqrt(double z) {
    if (std::abs(z) < kTaylorBand) return 1.0 - z / 6.0 + z * z / 120.0;
    if (z > 0) {
        double q = std::sqrt(z);
        return std::sin(q) / q;
    }
    double p = std::sqrt(-z);
    return std::sinh(p) / p;
}

/// cos(sqrt z), continued to z < 0.
inline double cos_sqrt(double z) {
    if (std::abs(z) < kTaylorBand) return 1.0 - z / 2.0 + z * z / 24.0;
    if (z > 0) return std::cos(std::sqrt(z));
    return std::cosh(std::sqrt(-z));
}

inline void check_args(double k, double c) {
    if (!(k > 0)) throw std::invalid_argument("secular function needs k > 0");
    if (!(c > 0)) throw std::invalid_argument("step height c must be positive");
}

} // namespace detail

/// Dirichlet secular function as written for k^2 > c, continued by
/// sqrt(k^2-c) -> i sqrt(c-k^2) (and divided by i) below the barrier.
/// Vanishes trivially at k = sqrt(c); root finding uses the reduced form.
inline double secular_dirichlet(double k, double c) {
    detail::check_args(k, c);
    double z = k * k - c;
    double f = std::sin(k) * detail::cos_sqrt(z) + k * std::cos(k) * detail::sinc_sqrt(z);
    return std::sqrt(std::abs(z)) * f;
}

/// Dirichlet secular function with the sqrt(k^2 - c) factor removed. Its
/// positive roots are exactly the sqrt of the Dirichlet eigenvalues,
/// including k = sqrt(c) when sqrt(c) + tan(sqrt(c)) = 0.
inline double secular_dirichlet_reduced(double k, double c) {
    detail::check_args(k, c);
    double z = k * k - c;
    return std::sin(k) * detail::cos_sqrt(z) + k * std::cos(k) * detail::sinc_sqrt(z);
}

inline double secular_neumann(double k, double c) {
    detail::check_args(k, c);
    double z = k * k - c;
    return z * detail::sinc_sqrt(z) * std::cos(k) + k * std::sin(k) * detail::cos_sqrt(z);
}

struct StepRoots {
    std::vector<double> k;      // sqrt of the eigenvalues, ascending
    bool barrier_root = false;  // k = sqrt(c) was inserted by the special-case test
    double scan_ceiling = 0.0;
};

/// First `count` positive roots for boundary condition `bc` (applied at both ends).
inline StepRoots step_roots(double c, Boundary bc, std::size_t count) {
    if (!(c > 0)) throw std::invalid_argument("step height c must be positive");
    if (count == 0) throw std::invalid_argument("need at least one root");
    const double pi = std::acos(-1.0);
    auto fn = [&](double k) {
        return bc == Boundary::Dirichlet ? secular_dirichlet_reduced(k, c) : secular_neumann(k, c);
    };
    const double dk = pi / 64.0;
    // lambda_K(V) <= lambda_K(0) + c and consecutive roots are ~pi/2 apart in k.
    double ceiling = std::sqrt(std::pow(count * pi / 2.0, 2) + c) + pi;

    StepRoots out;
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::vector<double> roots;
        double k0 = 1e-9;
        double f0 = fn(k0);
        while (k0 < ceiling) {
            double k1 = std::min(k0 + dk, ceiling);
            double f1 = fn(k1);
            if (f1 == 0.0) {
                roots.push_back(k1);
            } else if ((f0 < 0) != (f1 < 0) && f0 != 0.0) {
                double lo = k0, hi = k1, flo = f0;
                while (hi - lo > 1e-14 * hi) {
                    double mid = 0.5 * (lo + hi);
                    if (mid == lo || mid == hi) break;
                    double fm = fn(mid);
                    if (fm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((fm < 0) == (flo < 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push_back(0.5 * (lo + hi));
            }
            k0 = k1;
            f0 = f1;
        }
        bool barrier = false;
        if (bc == Boundary::Dirichlet) {
            double s = std::sqrt(c);
            if (std::abs(s + std::tan(s)) < 1e-10) {
                roots.push_back(s);
                barrier = true;
            }
        }
        std::sort(roots.begin(), roots.end());
        std::vector<double> uniq;
        for (double r : roots)
            if (uniq.empty() || std::abs(r - uniq.back()) > 1e-12 * std::max(1.0, r)) uniq.push_back(r);
        if (uniq.size() >= count) {
            uniq.resize(count);
            out.k = std::move(uniq);
            out.barrier_root = barrier;
            out.scan_ceiling = ceiling;
            return out;
        }
        ceiling *= 2.0;
    }
    throw SolverError("step_spectrum: fewer than " + std::to_string(count) + " roots below k = " +
                      std::to_string(ceiling));
}

inline SpectrumResult step_spectrum(double c, Boundary bc, std::size_t count) {
    auto roots = step_roots(c, bc, count);
    SpectrumResult r;
    r.count_requested = count;
    r.bc = bc == Boundary::Dirichlet ? "DD" : "NN";
    r.discretization = {"analytic", 0, -1, 0};
    for (double k : roots.k) {
        r.eigenvalues.push_back(k * k);
        r.error_estimate.push_back(2.0 * k * 1e-14 * k + 1e-15);
    }
    return r;
}

/// Smallest Dirichlet root with k > sqrt(c), i.e. the first root of the
/// secular function on the branch where sqrt(k^2 - c) is real.
inline double first_dirichlet_root_above_barrier(double c) {
    auto roots = step_roots(c, Boundary::Dirichlet, 64);
    for (double k : roots.k)
        if (k > std::sqrt(c)) return k;
    throw SolverError("no Dirichlet root above the barrier in the first 64 roots");
}

/// One published cell of the step-potential table: sqrt(mu_2) or sqrt(lambda_1).
struct Table1Cell {
    std::string quantity; // "sqrt_mu2" or "sqrt_lambda1"
    double c = 0.0;
    std::string published;
    int digits = 4; // decimals printed
    double computed = 0.0;
    bool match = false;
};

inline std::string round_to(double x, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

/// Published values, in column order c = 1e-4, 1e-2, 1e-1, 1, 10, 100.
inline std::vector<Table1Cell> table1_published() {
    const double cs[6] = {1e-4, 1e-2, 1e-1, 1.0, 10.0, 100.0};
    const char* mu[6] = {"1.5708", "1.572389", "1.5869", "1.7438", "3.1553", "4.2711"};
    const char* lam[6] = {"1.5724", "1.572386", "1.5866", "1.7153", "4.0270", "10.3793"};
    std::vector<Table1Cell> cells;
    auto decimals = [](const std::string& s) { return static_cast<int>(s.size() - s.find('.') - 1); };
    for (int i = 0; i < 6; ++i) cells.push_back({"sqrt_mu2", cs[i], mu[i], decimals(mu[i])});
    for (int i = 0; i < 6; ++i) cells.push_back({"sqrt_lambda1", cs[i], lam[i], decimals(lam[i])});
    return cells;
}

/// Fills `computed` from the secular equations and compares after rounding
/// to the printed number of decimals.
inline std::vector<Table1Cell> table1_analytic() {
    auto cells = table1_published();
    for (auto& cell : cells) {
        if (cell.quantity == "sqrt_mu2")
            cell.computed = step_roots(cell.c, Boundary::Neumann, 2).k[1];
        else
            cell.computed = step_roots(cell.c, Boundary::Dirichlet, 1).k[0];
        cell.match = round_to(cell.computed, cell.digits) == cell.published;
    }
    return cells;
}

} // namespace spectral_gap::step
