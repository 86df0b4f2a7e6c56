#pragma once

// Potentials on intervals and convex polygons, with structural metadata
// (symmetry, monotonicity, convexity, gradient-orthogonal direction) that
// is validated against samples when the potential is built.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "spectral_gap/polygon.hpp"
#include "spectral_gap/types.hpp"

namespace spectral_gap {

class PotentialError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// 1D

struct NamedDescriptor {
    std::string name;
    std::vector<double> params;
    double scale = 1.0; // value = scale * builtin(x) + shift
    double shift = 0.0;
};

/// values.size() == breaks.size() + 1; left-continuous at the breakpoints.
struct PiecewiseConstant {
    std::vector<double> breaks;
    std::vector<double> values;
};

/// Samples joined by straight lines.
struct Tabulated {
    std::vector<double> x;
    std::vector<double> v;
};

using Descriptor1D = std::variant<NamedDescriptor, PiecewiseConstant, Tabulated>;

struct Meta1D {
    Tri symmetric = Tri::Unknown; // about the interval midpoint
    Monotone monotone_right_half = Monotone::Unknown;
    Monotone monotone_whole = Monotone::Unknown;
    Convexity convexity = Convexity::Unknown;
    bool is_constant = false;
};

/// Flags the caller asserts. nullopt means "derive from samples".
struct DeclaredMeta1D {
    std::optional<Tri> symmetric;
    std::optional<Monotone> monotone_right_half;
    std::optional<Monotone> monotone_whole;
    std::optional<Convexity> convexity;
};

namespace detail {

constexpr int kMetaSamples = 1024;

inline std::vector<double> sample_grid(double a, double b, int n = kMetaSamples) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
    x.back() = b;
    return x;
}

inline Monotone classify_monotone(const std::vector<double>& v, double tol) {
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        double d = v[i] - v[i - 1];
        if (d > tol) dec = false;
        if (d < -tol) inc = false;
    }
    if (inc && dec) return Monotone::Constant;
    if (inc) return Monotone::NonDecreasing;
    if (dec) return Monotone::NonIncreasing;
    return Monotone::None;
}

inline Convexity classify_convexity(const std::vector<double>& v, double tol) {
    bool vex = true, cave = true;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        double d2 = v[i - 1] - 2.0 * v[i] + v[i + 1];
        if (d2 < -tol) vex = false;
        if (d2 > tol) cave = false;
    }
    if (vex && cave) return Convexity::Constant;
    if (vex) return Convexity::Convex;
    if (cave) return Convexity::Concave;
    return Convexity::Neither;
}

inline bool monotone_consistent(Monotone declared, Monotone observed) {
    if (declared == Monotone::Unknown) return true;
    if (observed == Monotone::Constant)
        return declared != Monotone::None;
    return declared == observed;
}

inline bool convexity_consistent(Convexity declared, Convexity observed) {
    if (declared == Convexity::Unknown) return true;
    if (observed == Convexity::Constant) return declared != Convexity::Neither;
    return declared == observed;
}

inline Monotone flip(Monotone m) {
    if (m == Monotone::NonIncreasing) return Monotone::NonDecreasing;
    if (m == Monotone::NonDecreasing) return Monotone::NonIncreasing;
    return m;
}

inline Convexity flip(Convexity c) {
    if (c == Convexity::Convex) return Convexity::Concave;
    if (c == Convexity::Concave) return Convexity::Convex;
    return c;
}

} // namespace detail

class Potential1D {
public:
    using Fn = std::function<double(double)>;

    /// Builds a potential on `dom`, derives undeclared flags from a 1024-point
    /// sample grid and rejects declared flags the samples contradict.
    Potential1D(Fn eval, IntervalDomain dom, Descriptor1D desc, Fn second_derivative = {},
                DeclaredMeta1D declared = {})
        : eval_(std::move(eval)), d2_(std::move(second_derivative)), dom_(dom), desc_(std::move(desc)) {
        if (!eval_) throw PotentialError("potential has no evaluation function");
        validate_descriptor();
        build_meta(declared);
    }

    /// Flags known exactly from another potential (affine images); only
    /// boundedness is re-checked on the samples.
    struct Trusted {
        Meta1D meta;
    };
    Potential1D(Fn eval, IntervalDomain dom, Descriptor1D desc, Fn second_derivative, Trusted trusted)
        : eval_(std::move(eval)), d2_(std::move(second_derivative)), dom_(dom), desc_(std::move(desc)) {
        if (!eval_) throw PotentialError("potential has no evaluation function");
        validate_descriptor();
        build_meta({});
        meta_ = trusted.meta;
    }

    double operator()(double x) const { return eval_(x); }
    const IntervalDomain& domain() const noexcept { return dom_; }
    const Descriptor1D& descriptor() const noexcept { return desc_; }
    const Meta1D& meta() const noexcept { return meta_; }
    double sup_norm() const noexcept { return sup_; }
    bool is_piecewise_constant() const noexcept { return std::holds_alternative<PiecewiseConstant>(desc_); }
    bool is_tabulated() const noexcept { return std::holds_alternative<Tabulated>(desc_); }
    bool has_analytic_second_derivative() const noexcept { return static_cast<bool>(d2_); }
    const Fn& second_derivative_fn() const noexcept { return d2_; }

    /// Mean value over [lo, hi]. Exact for piecewise-constant descriptors;
    /// otherwise falls back to Simpson's rule.
    double average(double lo, double hi) const {
        if (!(hi > lo)) return (*this)(lo);
        if (auto* pc = std::get_if<PiecewiseConstant>(&desc_)) {
            double acc = 0.0, left = lo;
            for (std::size_t j = 0; j <= pc->breaks.size(); ++j) {
                double right = j < pc->breaks.size() ? pc->breaks[j] : hi;
                right = std::min(right, hi);
                if (right > left) {
                    acc += pc->values[j] * (right - left);
                    left = right;
                }
                if (left >= hi) break;
            }
            return acc / (hi - lo);
        }
        double m = 0.5 * (lo + hi);
        return ((*this)(lo) + 4.0 * (*this)(m) + (*this)(hi)) / 6.0;
    }

    /// Flags of the restriction to a subinterval, derived from samples.
    Potential1D restricted(IntervalDomain sub) const {
        if (sub.a < dom_.a - 1e-12 * dom_.length() || sub.b > dom_.b + 1e-12 * dom_.length())
            throw PotentialError("restriction interval leaves the potential's domain");
        Descriptor1D d = desc_;
        if (auto* pc = std::get_if<PiecewiseConstant>(&d)) {
            // Keep only breakpoints inside the subinterval.
            PiecewiseConstant trimmed;
            std::size_t j = 0;
            while (j < pc->breaks.size() && pc->breaks[j] <= sub.a) ++j;
            trimmed.values.push_back(pc->values[j]);
            for (; j < pc->breaks.size() && pc->breaks[j] < sub.b; ++j) {
                trimmed.breaks.push_back(pc->breaks[j]);
                trimmed.values.push_back(pc->values[j + 1]);
            }
            d = std::move(trimmed);
        }
        return Potential1D(eval_, sub, std::move(d), d2_);
    }

private:
    void validate_descriptor() const {
        if (auto* pc = std::get_if<PiecewiseConstant>(&desc_)) {
            if (pc->values.size() != pc->breaks.size() + 1)
                throw PotentialError("piecewise-constant potential needs one more value than breakpoints");
            for (std::size_t i = 0; i < pc->breaks.size(); ++i) {
                if (!(pc->breaks[i] > dom_.a && pc->breaks[i] < dom_.b))
                    throw PotentialError("breakpoint outside the domain interior");
                if (i > 0 && !(pc->breaks[i] > pc->breaks[i - 1]))
                    throw PotentialError("breakpoints must be strictly increasing");
            }
        }
        if (auto* tb = std::get_if<Tabulated>(&desc_)) {
            if (tb->x.size() < 2 || tb->x.size() != tb->v.size())
                throw PotentialError("tabulated potential needs matching x/v arrays with at least 2 samples");
            for (std::size_t i = 1; i < tb->x.size(); ++i)
                if (!(tb->x[i] > tb->x[i - 1])) throw PotentialError("tabulated x must be strictly increasing");
        }
    }

    void build_meta(const DeclaredMeta1D& declared) {
        using namespace detail;
        auto xs = sample_grid(dom_.a, dom_.b);
        std::vector<double> vs(xs.size());
        sup_ = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            vs[i] = eval_(xs[i]);
            if (!std::isfinite(vs[i]) || std::abs(vs[i]) > 1e150)
                throw PotentialError("potential is not bounded on the domain (non-finite sample)");
            sup_ = std::max(sup_, std::abs(vs[i]));
        }
        const double scale = 1.0 + sup_;
        const double tol = 1e-12 * scale;

        double lo = *std::min_element(vs.begin(), vs.end());
        double hi = *std::max_element(vs.begin(), vs.end());
        meta_.is_constant = (hi - lo) <= 1e-10 * scale;

        bool sym = true;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (std::abs(vs[i] - vs[xs.size() - 1 - i]) > tol) sym = false;
        Tri sym_obs = sym ? Tri::Yes : Tri::No;

        auto half = sample_grid(dom_.midpoint(), dom_.b);
        std::vector<double> hv(half.size());
        for (std::size_t i = 0; i < half.size(); ++i) hv[i] = eval_(half[i]);
        Monotone right_obs = classify_monotone(hv, tol);
        Monotone whole_obs = classify_monotone(vs, tol);
        // Second differences of a sampled step are O(jump); those of a smooth
        // function are O(h^2), so the same tolerance works for both.
        Convexity conv_obs = classify_convexity(vs, tol);

        if (declared.symmetric && *declared.symmetric != Tri::Unknown && *declared.symmetric != sym_obs)
            throw PotentialError("declared symmetry flag contradicts samples");
        if (declared.monotone_right_half && !monotone_consistent(*declared.monotone_right_half, right_obs))
            throw PotentialError("declared right-half monotonicity contradicts samples");
        if (declared.monotone_whole && !monotone_consistent(*declared.monotone_whole, whole_obs))
            throw PotentialError("declared monotonicity contradicts samples");
        if (declared.convexity && !convexity_consistent(*declared.convexity, conv_obs))
            throw PotentialError("declared convexity contradicts samples");

        meta_.symmetric = declared.symmetric.value_or(sym_obs);
        meta_.monotone_right_half = declared.monotone_right_half.value_or(right_obs);
        meta_.monotone_whole = declared.monotone_whole.value_or(whole_obs);
        meta_.convexity = declared.convexity.value_or(conv_obs);
    }

    Fn eval_;
    Fn d2_;
    IntervalDomain dom_;
    Descriptor1D desc_;
    Meta1D meta_;
    double sup_ = 0.0;
};

inline Potential1D make_piecewise_constant(IntervalDomain dom, std::vector<double> breaks, std::vector<double> values) {
    PiecewiseConstant pc{std::move(breaks), std::move(values)};
    if (pc.values.size() != pc.breaks.size() + 1)
        throw PotentialError("piecewise-constant potential needs one more value than breakpoints");
    auto shared = std::make_shared<const PiecewiseConstant>(pc);
    auto f = [shared](double x) {
        auto it = std::lower_bound(shared->breaks.begin(), shared->breaks.end(), x);
        return shared->values[static_cast<std::size_t>(it - shared->breaks.begin())];
    };
    return Potential1D(f, dom, std::move(pc));
}

/// Piecewise-linear interpolation of samples; constant extension outside the samples.
inline Potential1D make_tabulated(std::vector<double> x, std::vector<double> v, std::optional<IntervalDomain> dom = {}) {
    Tabulated tb{std::move(x), std::move(v)};
    if (tb.x.size() < 2 || tb.x.size() != tb.v.size())
        throw PotentialError("tabulated potential needs matching x/v arrays with at least 2 samples");
    for (std::size_t i = 1; i < tb.x.size(); ++i)
        if (!(tb.x[i] > tb.x[i - 1])) throw PotentialError("tabulated x must be strictly increasing");
    IntervalDomain d = dom.value_or(IntervalDomain(tb.x.front(), tb.x.back()));
    if (d.a < tb.x.front() - 1e-12 * d.length() || d.b > tb.x.back() + 1e-12 * d.length())
        throw PotentialError("tabulated samples do not cover the domain");
    auto shared = std::make_shared<const Tabulated>(tb);
    auto f = [shared](double t) {
        const auto& xs = shared->x;
        const auto& vs = shared->v;
        if (t <= xs.front()) return vs.front();
        if (t >= xs.back()) return vs.back();
        auto it = std::upper_bound(xs.begin(), xs.end(), t);
        std::size_t j = static_cast<std::size_t>(it - xs.begin());
        double s = (t - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return vs[j - 1] + s * (vs[j] - vs[j - 1]);
    };
    return Potential1D(f, d, std::move(tb));
}

inline Potential1D make_function_potential(Potential1D::Fn f, IntervalDomain dom, Potential1D::Fn d2 = {},
                                           std::string name = "function") {
    return Potential1D(std::move(f), dom, NamedDescriptor{std::move(name), {}, 1.0, 0.0}, std::move(d2));
}

/// Potential tau * V + v0.
inline Potential1D scale_shift_potential(const Potential1D& v, double tau, double v0) {
    Potential1D::Fn f = [v, tau, v0](double x) { return tau * v(x) + v0; };
    Potential1D::Fn d2;
    if (v.has_analytic_second_derivative()) {
        auto g = v.second_derivative_fn();
        d2 = [g, tau](double x) { return tau * g(x); };
    }
    Descriptor1D desc = std::visit(
        [&](const auto& d) -> Descriptor1D {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NamedDescriptor>) {
                NamedDescriptor n = d;
                n.scale = tau * d.scale;
                n.shift = tau * d.shift + v0;
                return n;
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                PiecewiseConstant p = d;
                for (double& y : p.values) y = tau * y + v0;
                return p;
            } else {
                Tabulated t = d;
                for (double& y : t.v) y = tau * y + v0;
                return t;
            }
        },
        v.descriptor());

    // The flags of tau V + v0 follow exactly from those of V; re-deriving
    // them from samples would be subject to tolerance edge effects.
    Meta1D m = v.meta();
    if (tau == 0.0) {
        m.symmetric = Tri::Yes;
        m.monotone_right_half = Monotone::Constant;
        m.monotone_whole = Monotone::Constant;
        m.convexity = Convexity::Constant;
        m.is_constant = true;
    } else if (tau < 0.0) {
        m.monotone_right_half = detail::flip(m.monotone_right_half);
        m.monotone_whole = detail::flip(m.monotone_whole);
        m.convexity = detail::flip(m.convexity);
    }
    return Potential1D(std::move(f), v.domain(), std::move(desc), std::move(d2), Potential1D::Trusted{m});
}

// ---------------------------------------------------------------------------
// 2D

struct Grad2 {
    double x = 0.0, y = 0.0;
};
/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Hessian2 {
    double xx = 0.0, xy = 0.0, yy = 0.0;
    /// Eigenvalues, ascending.
    std::array<double, 2> eigenvalues() const {
        double m = 0.5 * (xx + yy);
        double r = std::hypot(0.5 * (xx - yy), xy);
        return {m - r, m + r};
    }
};

struct Meta2D {
    std::optional<Point2> gradient_orthogonal; // unit vector f with grad V . f = 0
    std::array<bool, 2> axis_symmetric{false, false}; // V(-x, y) = V(x, y); V(x, -y) = V(x, y)
    bool concave = false;
    bool is_constant = false;
};

class Potential2D {
public:
    using Fn = std::function<double(double, double)>;
    using GradFn = std::function<Grad2(double, double)>;
    using HessFn = std::function<Hessian2(double, double)>;

    Potential2D(Fn eval, ConvexPolygonDomain dom, std::string name, std::vector<double> params, GradFn grad = {},
                HessFn hess = {}, Meta2D meta = {})
        : eval_(std::move(eval)), grad_(std::move(grad)), hess_(std::move(hess)), dom_(std::move(dom)),
          name_(std::move(name)), params_(std::move(params)), meta_(meta) {
        if (!eval_) throw PotentialError("potential has no evaluation function");
        validate();
    }

    double operator()(double x, double y) const { return eval_(x, y); }
    double operator()(Point2 p) const { return eval_(p.x, p.y); }
    const ConvexPolygonDomain& domain() const noexcept { return dom_; }
    const Meta2D& meta() const noexcept { return meta_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<double>& params() const noexcept { return params_; }
    bool has_gradient() const noexcept { return static_cast<bool>(grad_); }
    bool has_hessian() const noexcept { return static_cast<bool>(hess_); }
    Grad2 gradient(double x, double y) const { return grad_(x, y); }
    Hessian2 hessian(double x, double y) const { return hess_(x, y); }
    double sup_norm() const noexcept { return sup_; }

    /// Same potential on a different polygon (metadata re-validated there).
    Potential2D on(ConvexPolygonDomain dom) const {
        return Potential2D(eval_, std::move(dom), name_, params_, grad_, hess_, meta_);
    }

    /// True when the Hessian is negative definite at some sample point
    /// (open condition, so it then holds on a set of positive measure).
    bool hessian_negative_definite_somewhere() const {
        if (!hess_) return false;
        for (auto p : dom_.interior_samples(32))
            if (hess_(p.x, p.y).eigenvalues()[1] < -1e-10) return true;
        return false;
    }

private:
    void validate() {
        auto pts = dom_.interior_samples(32);
        if (pts.empty()) throw PotentialError("polygon too thin to sample");
        double lo = INFINITY, hi = -INFINITY;
        for (auto p : pts) {
            double v = eval_(p.x, p.y);
            if (!std::isfinite(v) || std::abs(v) > 1e150)
                throw PotentialError("potential is not bounded on the domain (non-finite sample)");
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sup_ = std::max(sup_, std::abs(v));
        }
        for (auto p : dom_.vertices()) sup_ = std::max(sup_, std::abs(eval_(p.x, p.y)));
        meta_.is_constant = meta_.is_constant || (hi - lo) <= 1e-10 * (1.0 + sup_);

        if (meta_.gradient_orthogonal) {
            Point2 f = *meta_.gradient_orthogonal;
            double n = norm(f);
            if (!(n > 0)) throw PotentialError("gradient-orthogonal direction must be non-zero");
            f = (1.0 / n) * f;
            meta_.gradient_orthogonal = f;
            if (grad_) {
                for (auto p : pts) {
                    Grad2 g = grad_(p.x, p.y);
                    double gn = std::hypot(g.x, g.y);
                    if (std::abs(g.x * f.x + g.y * f.y) > 1e-10 * (1.0 + gn))
                        throw PotentialError("declared gradient-orthogonal direction contradicts the gradient");
                }
            }
        }
        if (meta_.concave && hess_) {
            for (auto p : pts)
                if (hess_(p.x, p.y).eigenvalues()[1] > 1e-10)
                    throw PotentialError("declared concavity contradicts the Hessian");
        }
        for (int axis = 0; axis < 2; ++axis) {
            if (!meta_.axis_symmetric[axis]) continue;
            for (auto p : pts) {
                double v = eval_(p.x, p.y);
                double w = axis == 0 ? eval_(-p.x, p.y) : eval_(p.x, -p.y);
                if (std::abs(v - w) > 1e-12 * (1.0 + sup_))
                    throw PotentialError("declared axis symmetry contradicts samples");
            }
        }
    }

    Fn eval_;
    GradFn grad_;
    HessFn hess_;
    ConvexPolygonDomain dom_;
    std::string name_;
    std::vector<double> params_;
    Meta2D meta_;
    double sup_ = 0.0;
};

/// V(x, y) = f(x) for a 1D potential f.
inline Potential2D potential_from_x(const Potential1D& f, ConvexPolygonDomain dom) {
    Meta2D meta;
    meta.gradient_orthogonal = Point2{0.0, 1.0};
    return Potential2D([f](double x, double) { return f(x); }, std::move(dom), "x_only", {}, {}, {}, meta);
}

inline Potential2D scale_shift_potential(const Potential2D& v, double tau, double v0) {
    Potential2D::GradFn g;
    Potential2D::HessFn h;
    if (v.has_gradient()) g = [v, tau](double x, double y) {
        Grad2 d = v.gradient(x, y);
        return Grad2{tau * d.x, tau * d.y};
    };
    if (v.has_hessian()) h = [v, tau](double x, double y) {
        Hessian2 d = v.hessian(x, y);
        return Hessian2{tau * d.xx, tau * d.xy, tau * d.yy};
    };
    Meta2D m = v.meta();
    if (tau == 0.0) {
        m.is_constant = true;
        m.concave = true;
        m.gradient_orthogonal = Point2{1.0, 0.0};
    } else if (tau < 0.0) {
        m.concave = m.is_constant;
    }
    std::vector<double> p = v.params();
    p.push_back(tau);
    p.push_back(v0);
    return Potential2D([v, tau, v0](double x, double y) { return tau * v(x, y) + v0; }, v.domain(),
                       "scaled(" + v.name() + ")", std::move(p), std::move(g), std::move(h), m);
}

// ---------------------------------------------------------------------------
// Builtin registry

struct BuiltinInfo {
    std::string name;
    int arity; // -1: one or more
    std::string formula;
};

inline const std::vector<BuiltinInfo>& builtins_1d() {
    static const std::vector<BuiltinInfo> list = {
        {"const", 1, "V0"},
        {"step", 1, "c on (a, mid], 0 on (mid, b)"},
        {"symmetric_step", 1, "c on the middle half of the interval, 0 elsewhere"},
        {"gauss", 2, "p0 * x^2 * exp(-x^2) + p1"},
        {"exp", 2, "p0 * exp(p1 * x)"},
        {"poly", -1, "sum_i p_i * x^i"},
        {"cos", 2, "p0 * cos(p1 * x)"},
    };
    return list;
}

inline const std::vector<BuiltinInfo>& builtins_2d() {
    static const std::vector<BuiltinInfo> list = {
        {"const", 1, "V0"},
        {"exp", 2, "p0 * exp(p1 * (x + y))"},
        {"radial_concave", 1, "-p0 * exp(x^2 + y^2)"},
        {"quadratic", 3, "p0 * x^2 + p1 * x * y + p2 * y^2"},
        {"sin_x", 1, "p0 * sin(x)"},
    };
    return list;
}

namespace detail {
inline void check_arity(const std::vector<BuiltinInfo>& list, const std::string& name, std::size_t n) {
    auto it = std::find_if(list.begin(), list.end(), [&](const BuiltinInfo& b) { return b.name == name; });
    if (it == list.end()) throw PotentialError("unknown potential '" + name + "'");
    bool ok = it->arity < 0 ? n >= 1 : n == static_cast<std::size_t>(it->arity);
    if (!ok) throw PotentialError("potential '" + name + "' expects " +
                                  (it->arity < 0 ? std::string("at least 1") : std::to_string(it->arity)) +
                                  " parameter(s), got " + std::to_string(n));
}
} // namespace detail

inline Potential1D make_named_potential(const std::string& name, const std::vector<double>& p, IntervalDomain dom) {
    detail::check_arity(builtins_1d(), name, p.size());
    for (double x : p)
        if (!std::isfinite(x)) throw PotentialError("potential parameters must be finite");
    NamedDescriptor nd{name, p, 1.0, 0.0};
    if (name == "const") {
        double c = p[0];
        return Potential1D([c](double) { return c; }, dom, nd, [](double) { return 0.0; });
    }
    if (name == "step") {
        auto v = make_piecewise_constant(dom, {dom.midpoint()}, {p[0], 0.0});
        return v;
    }
    if (name == "symmetric_step") {
        double q = 0.25 * dom.length();
        return make_piecewise_constant(dom, {dom.a + q, dom.b - q}, {0.0, p[0], 0.0});
    }
    if (name == "gauss") {
        double amp = p[0], off = p[1];
        return Potential1D([amp, off](double x) { return amp * x * x * std::exp(-x * x) + off; }, dom, nd,
                           [amp](double x) {
                               double x2 = x * x;
                               return amp * std::exp(-x2) * (2.0 - 10.0 * x2 + 4.0 * x2 * x2);
                           });
    }
    if (name == "exp") {
        double a = p[0], b = p[1];
        return Potential1D([a, b](double x) { return a * std::exp(b * x); }, dom, nd,
                           [a, b](double x) { return a * b * b * std::exp(b * x); });
    }
    if (name == "poly") {
        auto c = p;
        auto f = [c](double x) {
            double s = 0.0;
            for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i];
            return s;
        };
        auto d2 = [c](double x) {
            double s = 0.0;
            for (std::size_t i = c.size(); i-- > 2;) s = s * x + static_cast<double>(i * (i - 1)) * c[i];
            return s;
        };
        return Potential1D(f, dom, nd, d2);
    }
    // cos
    double a = p[0], w = p[1];
    return Potential1D([a, w](double x) { return a * std::cos(w * x); }, dom, nd,
                       [a, w](double x) { return -a * w * w * std::cos(w * x); });
}

inline Potential2D make_named_potential(const std::string& name, const std::vector<double>& p,
                                        const ConvexPolygonDomain& dom) {
    detail::check_arity(builtins_2d(), name, p.size());
    for (double x : p)
        if (!std::isfinite(x)) throw PotentialError("potential parameters must be finite");
    Meta2D m;
    if (name == "const") {
        double c = p[0];
        m.is_constant = true;
        m.concave = true;
        m.axis_symmetric = {true, true};
        m.gradient_orthogonal = Point2{1.0, 0.0};
        return Potential2D([c](double, double) { return c; }, dom, name, p,
                           [](double, double) { return Grad2{}; }, [](double, double) { return Hessian2{}; }, m);
    }
    if (name == "exp") {
        double a = p[0], b = p[1];
        m.gradient_orthogonal = Point2{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
        m.concave = a * b * b <= 0.0;
        return Potential2D(
            [a, b](double x, double y) { return a * std::exp(b * (x + y)); }, dom, name, p,
            [a, b](double x, double y) {
                double g = a * b * std::exp(b * (x + y));
                return Grad2{g, g};
            },
            [a, b](double x, double y) {
                double h = a * b * b * std::exp(b * (x + y));
                return Hessian2{h, h, h};
            },
            m);
    }
    if (name == "radial_concave") {
        double c = p[0];
        m.concave = c >= 0.0;
        m.axis_symmetric = {true, true};
        return Potential2D(
            [c](double x, double y) { return -c * std::exp(x * x + y * y); }, dom, name, p,
            [c](double x, double y) {
                double e = -c * std::exp(x * x + y * y);
                return Grad2{2.0 * x * e, 2.0 * y * e};
            },
            [c](double x, double y) {
                double e = -c * std::exp(x * x + y * y);
                return Hessian2{e * (2.0 + 4.0 * x * x), e * 4.0 * x * y, e * (2.0 + 4.0 * y * y)};
            },
            m);
    }
    if (name == "quadratic") {
        double a = p[0], b = p[1], c = p[2];
        Hessian2 h{2 * a, b, 2 * c};
        m.concave = h.eigenvalues()[1] <= 0.0;
        m.axis_symmetric = {b == 0.0, b == 0.0};
        return Potential2D([a, b, c](double x, double y) { return a * x * x + b * x * y + c * y * y; }, dom, name, p,
                           [a, b, c](double x, double y) { return Grad2{2 * a * x + b * y, b * x + 2 * c * y}; },
                           [h](double, double) { return h; }, m);
    }
    // sin_x
    double a = p[0];
    m.gradient_orthogonal = Point2{0.0, 1.0};
    m.axis_symmetric = {false, true};
    return Potential2D([a](double x, double) { return a * std::sin(x); }, dom, name, p,
                       [a](double x, double) { return Grad2{a * std::cos(x), 0.0}; },
                       [a](double x, double) { return Hessian2{-a * std::sin(x), 0.0, 0.0}; }, m);
}

} // namespace spectral_gap
