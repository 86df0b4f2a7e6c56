#pragma once

// Seeded random potential families for property checks. Knots sit at
// dyadic fractions of the interval so they coincide with solver grid nodes.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spectral_gap/potential.hpp"

namespace spectral_gap::families {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

inline std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    return std::mt19937_64(seq);
}

/// Increasing knot values starting at 0 with random positive increments,
/// scaled to a random amplitude in [0.5, 5].
inline std::vector<double> monotone_profile(std::mt19937_64& g, std::size_t knots) {
    std::uniform_real_distribution<double> inc(0.05, 1.0), amp(0.5, 5.0);
    std::vector<double> v{0.0};
    for (std::size_t i = 1; i < knots; ++i) v.push_back(v.back() + inc(g));
    double a = amp(g) / v.back();
    for (double& y : v) y *= a;
    return v;
}

/// Symmetric on (-r, r), monotone on (0, r): non-decreasing if `increasing`.
inline Potential1D symmetric_monotone_half(std::uint64_t seed, std::uint64_t index, double r, bool increasing) {
    auto g = rng_for(seed, index);
    constexpr std::size_t half_knots = 9; // 0, r/8, ..., r
    auto prof = monotone_profile(g, half_knots);
    std::uniform_real_distribution<double> off(-2.0, 2.0);
    double shift = off(g);
    std::vector<double> x, v;
    for (std::size_t i = half_knots; i-- > 1;) {
        x.push_back(-r * static_cast<double>(i) / 8.0);
        v.push_back((increasing ? prof[i] : -prof[i]) + shift);
    }
    for (std::size_t i = 0; i < half_knots; ++i) {
        x.push_back(r * static_cast<double>(i) / 8.0);
        v.push_back((increasing ? prof[i] : -prof[i]) + shift);
    }
    return make_tabulated(std::move(x), std::move(v), IntervalDomain(-r, r));
}

/// Non-increasing tabulated potential on (0, L) with 17 knots.
inline Potential1D non_increasing(std::uint64_t seed, std::uint64_t index, double L) {
    auto g = rng_for(seed, index);
    auto prof = monotone_profile(g, 17);
    std::vector<double> x, v;
    for (std::size_t i = 0; i < prof.size(); ++i) {
        x.push_back(L * static_cast<double>(i) / 16.0);
        v.push_back(prof.back() - prof[i]);
    }
    return make_tabulated(std::move(x), std::move(v), IntervalDomain(0.0, L));
}

/// Smooth potential sum_j a_j cos(j pi (x - a) / L) + b_j sin(...), j <= 3,
/// coefficients in [-2, 2], with its exact second derivative.
inline Potential1D smooth_trig(std::uint64_t seed, std::uint64_t index, IntervalDomain dom) {
    auto g = rng_for(seed, index);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    std::vector<double> a(4), b(4);
    for (int j = 0; j < 4; ++j) {
        a[j] = c(g);
        b[j] = c(g);
    }
    const double w = std::acos(-1.0) / dom.length();
    const double x0 = dom.a;
    auto f = [a, b, w, x0](double x) {
        double s = a[0];
        for (int j = 1; j < 4; ++j) s += a[j] * std::cos(j * w * (x - x0)) + b[j] * std::sin(j * w * (x - x0));
        return s;
    };
    auto d2 = [a, b, w, x0](double x) {
        double s = 0.0;
        for (int j = 1; j < 4; ++j)
            s -= (j * w) * (j * w) * (a[j] * std::cos(j * w * (x - x0)) + b[j] * std::sin(j * w * (x - x0)));
        return s;
    };
    return make_function_potential(f, dom, d2, "smooth_trig");
}

/// Potential with values in [lo, hi] on a 17-knot tabulated grid.
inline Potential1D bounded_tabulated(std::uint64_t seed, std::uint64_t index, IntervalDomain dom, double lo,
                                     double hi) {
    auto g = rng_for(seed, index);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> x, v;
    for (int i = 0; i <= 16; ++i) {
        x.push_back(dom.a + dom.length() * i / 16.0);
        v.push_back(u(g));
    }
    x.back() = dom.b;
    return make_tabulated(std::move(x), std::move(v), dom);
}

} // namespace spectral_gap::families
