#pragma once

// Eigenvalue derivatives along tau -> tau V, the initial slope of the
// Dirichlet/Neumann gap at tau = 0, and gap-flow tracing with crossing
// localization.

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "spectral_gap/eig1d.hpp"
#include "spectral_gap/potential.hpp"
#include "spectral_gap/types.hpp"

namespace spectral_gap {

struct HfResult {
    double derivative = 0.0;
    double eigenvalue = 0.0;
    double error_estimate = 0.0; // |extrapolated - fine grid value|
};

namespace detail {

inline double hf_on_grid(const Potential1D& v, const Potential1D& tv, IntervalDomain dom, BoundaryPair bc,
                         std::size_t k, std::size_t n, double& eigenvalue) {
    auto sys = assemble(tv, dom, bc, n);
    auto spec = lowest_eigenvalues(sys, k + 1);
    const double lam = spec.eigenvalues[k - 1];
    const double gap_lo = k >= 2 ? lam - spec.eigenvalues[k - 2] : INFINITY;
    const double gap_hi = spec.eigenvalues[k] - lam;
    if (std::min(gap_lo, gap_hi) <= 1e-6)
        throw SolverError("hf_derivative: eigenvalue " + std::to_string(k) +
                          " is not simple (gap <= 1e-6); derivative refused");
    auto pair = eigenfunction(sys, lam);
    // Nodal values of V on the same grid as the tau V system, so the sum is
    // the exact derivative of the discrete eigenvalue.
    auto vsys = assemble(v, dom, bc, n);
    eigenvalue = lam;
    return weighted_expectation(sys, pair, vsys.potential);
}

} // namespace detail

/// d/dtau of eigenvalue `k` (1-based) of -u'' + tau V u at `tau`, as the
/// expectation of V against the normalized eigenfunction; two grids plus
/// one Richardson step.
inline HfResult hf_derivative(const Potential1D& v, IntervalDomain dom, BoundaryPair bc, std::size_t k, double tau,
                              std::optional<std::size_t> n = {}) {
    if (k == 0) throw std::invalid_argument("hf_derivative: k is 1-based");
    auto tv = scale_shift_potential(v, tau, 0.0);
    std::size_t n0 = n.value_or(default_initial_n(v, k + 1));
    double lam_c = 0.0, lam_f = 0.0;
    double dc = detail::hf_on_grid(v, tv, dom, bc, k, n0, lam_c);
    double df = detail::hf_on_grid(v, tv, dom, bc, k, 2 * n0 + 1, lam_f);
    HfResult r;
    r.derivative = richardson(dc, df);
    r.eigenvalue = richardson(lam_c, lam_f);
    r.error_estimate = std::abs(r.derivative - df);
    return r;
}

struct InitialSlope {
    double slope = 0.0;             // d/dtau (lambda_k - mu_{k+1}) at tau = 0, second-derivative form
    double first_form = 0.0;        // same quantity from the V-weighted form
    double length_scale = 1.0;      // L / pi: x = a + (L/pi) s maps (0, pi) onto (a, b)
    double eigenvalue_scale = 1.0;  // (pi/L)^2: eigenvalues on (a, b) = this times those on (0, pi)
    std::string second_derivative_source; // "analytic", "tabulated-kinks", "finite-difference"
};

namespace detail {

/// Composite 5-point Gauss-Legendre over [lo, hi] with panel edges forced at `knots`.
template <class F>
double gauss_integrate(F&& f, double lo, double hi, std::size_t panels, const std::vector<double>& knots = {}) {
    static constexpr double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                     0.9061798459386640};
    static constexpr double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};
    std::vector<double> edges;
    for (std::size_t i = 0; i <= panels; ++i) edges.push_back(lo + (hi - lo) * static_cast<double>(i) / panels);
    for (double x : knots)
        if (x > lo && x < hi) edges.push_back(x);
    std::sort(edges.begin(), edges.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        if (!(b > a)) continue;
        double m = 0.5 * (a + b), r = 0.5 * (b - a);
        double acc = 0.0;
        for (int q = 0; q < 5; ++q) acc += wg[q] * f(m + r * xg[q]);
        s += r * acc;
    }
    return s;
}

} // namespace detail

/// Initial slope of tau -> lambda_k(tau V) - mu_{k+1}(tau V). The interval is
/// mapped to (0, pi), where the unperturbed eigenfunctions are sin(ks) and
/// cos(ks); both integration-by-parts forms are evaluated and must agree.
inline InitialSlope prop31_initial_slope(const Potential1D& v, std::size_t k) {
    if (k == 0) throw std::invalid_argument("prop31_initial_slope: k is 1-based");
    if (v.is_piecewise_constant())
        throw std::invalid_argument("prop31_initial_slope: V lacks second-derivative data");
    const IntervalDomain dom = v.domain();
    const double pi = std::acos(-1.0);
    const double L = dom.length();
    const double kk = static_cast<double>(k);

    InitialSlope out;
    out.length_scale = L / pi;
    out.eigenvalue_scale = (pi / L) * (pi / L);
    auto s_of = [&](double x) { return (x - dom.a) * pi / L; };

    std::vector<double> knots;
    if (auto* tb = std::get_if<Tabulated>(&v.descriptor()))
        for (double x : tb->x)
            if (x > dom.a && x < dom.b) knots.push_back(x);

    const std::size_t panels = 64 * k;
    // (2/L) int V (sin^2 - cos^2)(k s(x)) dx, i.e. (2/pi) int V (sin^2 ks - cos^2 ks) ds
    out.first_form = (2.0 / L) * detail::gauss_integrate(
                                     [&](double x) { return -v(x) * std::cos(2.0 * kk * s_of(x)); }, dom.a, dom.b,
                                     panels, knots);

    // -(2/pi)(L/pi) int V''(x) sin^2(k s(x)) / (2k^2) dx
    const double pref = -(2.0 / pi) * (L / pi) / (2.0 * kk * kk);
    auto sin2 = [&](double x) {
        double s = std::sin(kk * s_of(x));
        return s * s;
    };
    if (v.has_analytic_second_derivative()) {
        const auto& d2 = v.second_derivative_fn();
        out.slope = pref * detail::gauss_integrate([&](double x) { return d2(x) * sin2(x); }, dom.a, dom.b, panels);
        out.second_derivative_source = "analytic";
    } else if (auto* tb = std::get_if<Tabulated>(&v.descriptor())) {
        // V'' is the sum of point masses (slope jumps) at the interior knots.
        double acc = 0.0;
        for (std::size_t i = 1; i + 1 < tb->x.size(); ++i) {
            double x = tb->x[i];
            if (!(x > dom.a && x < dom.b)) continue;
            double left = (tb->v[i] - tb->v[i - 1]) / (tb->x[i] - tb->x[i - 1]);
            double right = (tb->v[i + 1] - tb->v[i]) / (tb->x[i + 1] - tb->x[i]);
            acc += (right - left) * sin2(x);
        }
        out.slope = pref * acc;
        out.second_derivative_source = "tabulated-kinks";
    } else {
        // Central second difference, one Richardson step.
        const double h = 1e-3 * L;
        auto d2h = [&](double x, double step) { return (v(x + step) - 2.0 * v(x) + v(x - step)) / (step * step); };
        auto d2 = [&](double x) { return (4.0 * d2h(x, 0.5 * h) - d2h(x, h)) / 3.0; };
        out.slope = pref * detail::gauss_integrate([&](double x) { return d2(x) * sin2(x); }, dom.a, dom.b, panels);
        out.second_derivative_source = "finite-difference";
    }

    const double agree_tol = out.second_derivative_source == "finite-difference" ? 1e-6 : 1e-8;
    if (std::abs(out.slope - out.first_form) > agree_tol * (1.0 + v.sup_norm()))
        throw SolverError("prop31_initial_slope: the two slope forms disagree (" + std::to_string(out.slope) +
                          " vs " + std::to_string(out.first_form) + ")");
    return out;
}

struct FlowPoint {
    double tau = 0.0;
    std::vector<double> mu;     // K + 1 Neumann eigenvalues
    std::vector<double> lambda; // K Dirichlet eigenvalues
    std::vector<double> gap;    // gap[k-1] = lambda_k - mu_{k+1}
    std::vector<double> gap_budget;
};

struct Crossing {
    std::size_t k = 0; // 1-based
    double tau = 0.0;
    double lo = 0.0, hi = 0.0; // bracket after refinement
};

struct FlowCurve {
    std::vector<FlowPoint> points;
    std::vector<Crossing> crossings;
    bool truncated = false;
    std::string error;
};

struct FlowOptions {
    double tol = 1e-9;
    double crossing_tol = 1e-6;
    bool parallel = true;
};

namespace detail {

inline FlowPoint flow_point(const Potential1D& v, IntervalDomain dom, std::size_t K, double tau, double tol) {
    auto tv = scale_shift_potential(v, tau, 0.0);
    SolveOptions so;
    so.target_tol = tol;
    auto nn = solve(tv, dom, BoundaryPair::NN(), K + 1, so);
    auto dd = solve(tv, dom, BoundaryPair::DD(), K, so);
    FlowPoint p;
    p.tau = tau;
    p.mu = nn.eigenvalues;
    p.lambda = dd.eigenvalues;
    for (std::size_t k = 0; k < K; ++k) {
        p.gap.push_back(dd.eigenvalues[k] - nn.eigenvalues[k + 1]);
        p.gap_budget.push_back(10.0 * (dd.error_estimate[k] + nn.error_estimate[k + 1]) + 1e-12);
    }
    return p;
}

inline int gap_sign(const FlowPoint& p, std::size_t k) {
    if (std::abs(p.gap[k]) <= p.gap_budget[k]) return 0;
    return p.gap[k] > 0 ? 1 : -1;
}

} // namespace detail

/// Gap curves g_k(tau) on a uniform grid of n_steps + 1 nodes over
/// [tau_lo, tau_hi], with each sign change refined by bisection in tau.
inline FlowCurve trace_flow(const Potential1D& v, IntervalDomain dom, std::size_t K, double tau_lo, double tau_hi,
                            std::size_t n_steps, FlowOptions opt = {}) {
    if (n_steps < 8) throw std::invalid_argument("trace_flow: n_steps must be >= 8");
    if (!(tau_hi > tau_lo)) throw std::invalid_argument("trace_flow: empty tau range");
    if (K == 0) throw std::invalid_argument("trace_flow: K must be positive");

    std::vector<double> taus(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i)
        taus[i] = i == n_steps ? tau_hi : tau_lo + (tau_hi - tau_lo) * static_cast<double>(i) / n_steps;

    FlowCurve curve;
    std::vector<std::optional<FlowPoint>> pts(taus.size());
    std::vector<std::string> errs(taus.size());
    auto job = [&](std::size_t i) {
        try {
            pts[i] = detail::flow_point(v, dom, K, taus[i], opt.tol);
        } catch (const std::exception& e) {
            errs[i] = e.what();
        }
    };
    if (opt.parallel) {
        std::vector<std::future<void>> fs;
        for (std::size_t i = 0; i < taus.size(); ++i) fs.push_back(std::async(std::launch::async, job, i));
        for (auto& f : fs) f.get();
    } else {
        for (std::size_t i = 0; i < taus.size(); ++i) job(i);
    }
    // Truncate at the first failed node so the curve stays contiguous.
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!pts[i]) {
            curve.truncated = true;
            curve.error = "solver failure at tau = " + std::to_string(taus[i]) + ": " + errs[i];
            break;
        }
        curve.points.push_back(std::move(*pts[i]));
    }

    for (std::size_t k = 0; k < K; ++k) {
        int last_sign = 0;
        double last_tau = 0.0;
        for (const auto& p : curve.points) {
            int s = detail::gap_sign(p, k);
            if (s == 0) continue;
            if (last_sign != 0 && s != last_sign) {
                double lo = last_tau, hi = p.tau;
                int slo = last_sign;
                while (hi - lo > opt.crossing_tol) {
                    double mid = 0.5 * (lo + hi);
                    int sm = 0;
                    try {
                        sm = detail::gap_sign(detail::flow_point(v, dom, k + 1, mid, opt.tol), k);
                    } catch (const std::exception&) {
                        break;
                    }
                    if (sm == 0) {
                        lo = hi = mid;
                        break;
                    }
                    if (sm == slo) lo = mid;
                    else hi = mid;
                }
                curve.crossings.push_back({k + 1, 0.5 * (lo + hi), lo, hi});
            }
            last_sign = s;
            last_tau = p.tau;
        }
    }
    std::sort(curve.crossings.begin(), curve.crossings.end(), [](const Crossing& a, const Crossing& b) {
        return a.k != b.k ? a.k < b.k : a.tau < b.tau;
    });
    return curve;
}

} // namespace spectral_gap
