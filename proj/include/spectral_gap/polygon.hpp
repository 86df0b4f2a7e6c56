#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spectral_gap {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 p, Point2 q) { return {p.x + q.x, p.y + q.y}; }
    friend Point2 operator-(Point2 p, Point2 q) { return {p.x - q.x, p.y - q.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double cross(Point2 p, Point2 q) { return p.x * q.y - p.y * q.x; }
inline double dot(Point2 p, Point2 q) { return p.x * q.x + p.y * q.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

/// Strictly convex polygon, vertices in counterclockwise order.
class ConvexPolygonDomain {
public:
    explicit ConvexPolygonDomain(std::vector<Point2> vertices) : v_(std::move(vertices)) {
        if (v_.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
        const std::size_t n = v_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(v_[i].x) || !std::isfinite(v_[i].y))
                throw std::invalid_argument("polygon vertex is not finite");
            Point2 e1 = v_[(i + 1) % n] - v_[i];
            Point2 e2 = v_[(i + 2) % n] - v_[(i + 1) % n];
            if (!(cross(e1, e2) > 0.0))
                throw std::invalid_argument("polygon is not strictly convex and counterclockwise");
        }
        if (!(area() > 1e-14 * diameter() * diameter()))
            throw std::invalid_argument("degenerate polygon");
    }

    static ConvexPolygonDomain rectangle(double x0, double y0, double x1, double y1) {
        return ConvexPolygonDomain({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
    }
    static ConvexPolygonDomain unit_square() { return rectangle(0, 0, 1, 1); }
    /// Regular polygon with `n` vertices on the circle of radius `r` around the origin.
    static ConvexPolygonDomain regular(int n, double r, double phase = 0.0) {
        std::vector<Point2> v;
        const double pi = std::acos(-1.0);
        for (int i = 0; i < n; ++i) {
            double t = phase + 2.0 * pi * i / n;
            v.push_back({r * std::cos(t), r * std::sin(t)});
        }
        return ConvexPolygonDomain(std::move(v));
    }

    const std::vector<Point2>& vertices() const noexcept { return v_; }
    std::size_t size() const noexcept { return v_.size(); }

    double area() const {
        double s = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i) s += cross(v_[i], v_[(i + 1) % v_.size()]);
        return 0.5 * s;
    }

    /// Area centroid.
    Point2 centroid() const {
        double cx = 0.0, cy = 0.0, a = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            Point2 p = v_[i], q = v_[(i + 1) % v_.size()];
            double c = cross(p, q);
            a += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        return {cx / (3.0 * a), cy / (3.0 * a)};
    }

    double diameter() const {
        double d = 0.0;
        for (auto& p : v_)
            for (auto& q : v_) d = std::max(d, norm(p - q));
        return d;
    }

    /// Strict interior test with a relative margin.
    bool contains(Point2 p, double margin = 0.0) const {
        for (std::size_t i = 0; i < v_.size(); ++i) {
            Point2 e = v_[(i + 1) % v_.size()] - v_[i];
            if (cross(e, p - v_[i]) / norm(e) <= margin) return false;
        }
        return true;
    }

    bool on_boundary(Point2 p, double tol) const {
        for (std::size_t i = 0; i < v_.size(); ++i) {
            Point2 a = v_[i], b = v_[(i + 1) % v_.size()];
            Point2 e = b - a;
            double t = dot(p - a, e) / dot(e, e);
            if (t < -tol || t > 1 + tol) continue;
            if (std::abs(cross(e, p - a)) / norm(e) <= tol) return true;
        }
        return false;
    }

    /// Vertex set invariant under x -> -x (axis 0) or y -> -y (axis 1).
    bool symmetric_about_axis(int axis, double tol = 1e-12) const {
        for (auto& p : v_) {
            Point2 m = axis == 0 ? Point2{-p.x, p.y} : Point2{p.x, -p.y};
            bool found = std::any_of(v_.begin(), v_.end(), [&](const Point2& q) { return norm(q - m) <= tol; });
            if (!found) return false;
        }
        return true;
    }

    void bounding_box(Point2& lo, Point2& hi) const {
        lo = hi = v_.front();
        for (auto& p : v_) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
        }
    }

    /// Points of an n-by-n lattice over the bounding box that lie strictly inside.
    std::vector<Point2> interior_samples(int n = 32) const {
        Point2 lo, hi;
        bounding_box(lo, hi);
        std::vector<Point2> out;
        const double margin = 1e-9 * diameter();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Point2 p{lo.x + (hi.x - lo.x) * (i + 0.5) / n, lo.y + (hi.y - lo.y) * (j + 0.5) / n};
                if (contains(p, margin)) out.push_back(p);
            }
        return out;
    }

private:
    std::vector<Point2> v_;
};

} // namespace spectral_gap
