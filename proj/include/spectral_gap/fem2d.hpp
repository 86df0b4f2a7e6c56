#pragma once

// P1 finite elements for -Laplace + V on convex polygons with pure Neumann or
// pure Dirichlet conditions, plus the exact spectrum of the square (0, pi)^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "spectral_gap/polygon.hpp"
#include "spectral_gap/potential.hpp"
#include "spectral_gap/tridiagonal.hpp"
#include "spectral_gap/types.hpp"

namespace spectral_gap {

enum class Bc2D { Neumann, Dirichlet };

inline std::string to_string(Bc2D b) { return b == Bc2D::Neumann ? "neumann" : "dirichlet"; }

inline constexpr std::size_t kDenseCap = 3000;

struct TriMesh {
    std::vector<Point2> nodes;
    std::vector<std::array<int, 3>> triangles; // counterclockwise
    std::vector<std::pair<int, int>> boundary_edges;
    std::vector<int> boundary_nodes; // sorted
    int refinement_level = 0;

    std::vector<bool> boundary_mask() const {
        std::vector<bool> m(nodes.size(), false);
        for (int i : boundary_nodes) m[static_cast<std::size_t>(i)] = true;
        return m;
    }

    double triangle_area(std::size_t t) const {
        const auto& tri = triangles[t];
        return 0.5 * cross(nodes[tri[1]] - nodes[tri[0]], nodes[tri[2]] - nodes[tri[0]]);
    }
};

namespace detail {

inline TriMesh refine(const TriMesh& m) {
    TriMesh out;
    out.nodes = m.nodes;
    out.refinement_level = m.refinement_level + 1;
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        int id = static_cast<int>(out.nodes.size());
        out.nodes.push_back(0.5 * (m.nodes[a] + m.nodes[b]));
        mid.emplace(key, id);
        return id;
    };
    out.triangles.reserve(4 * m.triangles.size());
    for (const auto& t : m.triangles) {
        int a = t[0], b = t[1], c = t[2];
        int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({ab, b, bc});
        out.triangles.push_back({ca, bc, c});
        out.triangles.push_back({ab, bc, ca});
    }
    for (auto [a, b] : m.boundary_edges) {
        int c = midpoint(a, b);
        out.boundary_edges.emplace_back(a, c);
        out.boundary_edges.emplace_back(c, b);
    }
    std::vector<bool> onb(out.nodes.size(), false);
    for (auto [a, b] : out.boundary_edges) onb[a] = onb[b] = true;
    for (std::size_t i = 0; i < onb.size(); ++i)
        if (onb[i]) out.boundary_nodes.push_back(static_cast<int>(i));
    return out;
}

} // namespace detail

/// Fan triangulation from the centroid, then `level` uniform refinements.
/// Refuses meshes with more than `max_nodes` nodes (dense-solver cap).
inline TriMesh mesh_polygon(const ConvexPolygonDomain& poly, int level, std::size_t max_nodes = kDenseCap) {
    if (level < 0 || level > 8) throw std::invalid_argument("mesh_polygon: level must be in [0, 8]");
    const std::size_t n = poly.size();
    // Node count after refinement: V_l = V_{l-1} + E_{l-1}, E_l = 2 E_{l-1} + 3 T_{l-1}.
    std::size_t nv = n + 1, ne = 2 * n, nt = n;
    for (int l = 0; l < level; ++l) {
        nv += ne;
        ne = 2 * ne + 3 * nt;
        nt *= 4;
    }
    if (nv > max_nodes)
        throw std::invalid_argument("mesh_polygon: level " + std::to_string(level) + " gives " + std::to_string(nv) +
                                    " nodes, above the cap of " + std::to_string(max_nodes));
    TriMesh m;
    m.nodes = poly.vertices();
    m.nodes.push_back(poly.centroid());
    const int c = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        int a = static_cast<int>(i), b = static_cast<int>((i + 1) % n);
        m.triangles.push_back({c, a, b});
        m.boundary_edges.emplace_back(a, b);
    }
    for (std::size_t i = 0; i < n; ++i) m.boundary_nodes.push_back(static_cast<int>(i));
    for (int l = 0; l < level; ++l) m = detail::refine(m);
    for (std::size_t t = 0; t < m.triangles.size(); ++t)
        if (!(m.triangle_area(t) > 0)) throw std::invalid_argument("mesh_polygon: degenerate triangle");
    return m;
}

/// OFF text (z = 0) for inspection in mesh viewers.
inline void write_off(std::ostream& os, const TriMesh& m) {
    os << "OFF\n" << m.nodes.size() << ' ' << m.triangles.size() << " 0\n";
    char buf[96];
    for (auto p : m.nodes) {
        std::snprintf(buf, sizeof buf, "%.12g %.12g 0\n", p.x, p.y);
        os << buf;
    }
    for (auto& t : m.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

struct AssembledPencil {
    Eigen::SparseMatrix<double> stiffness, mass, potential_mass;
    Bc2D bc = Bc2D::Neumann;
    std::vector<int> dof_to_node; // unknown index -> mesh node
    int mesh_level = 0;

    std::size_t dimension() const { return dof_to_node.size(); }
};

/// Element stiffness for P1 on one triangle.
inline std::array<std::array<double, 3>, 3> p1_stiffness(Point2 p0, Point2 p1, Point2 p2) {
    const double area = 0.5 * cross(p1 - p0, p2 - p0);
    const std::array<Point2, 3> p{p0, p1, p2};
    std::array<double, 3> b{}, c{};
    for (int i = 0; i < 3; ++i) {
        Point2 pj = p[(i + 1) % 3], pk = p[(i + 2) % 3];
        b[i] = pj.y - pk.y;
        c[i] = pk.x - pj.x;
    }
    std::array<std::array<double, 3>, 3> k{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
    return k;
}

inline AssembledPencil assemble2d(const TriMesh& mesh, const Potential2D& v, Bc2D bc) {
    AssembledPencil out;
    out.bc = bc;
    out.mesh_level = mesh.refinement_level;
    std::vector<int> node_to_dof(mesh.nodes.size(), -1);
    auto onb = mesh.boundary_mask();
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (bc == Bc2D::Dirichlet && onb[i]) continue;
        node_to_dof[i] = static_cast<int>(out.dof_to_node.size());
        out.dof_to_node.push_back(static_cast<int>(i));
    }
    using T = Eigen::Triplet<double>;
    std::vector<T> ts, tm, tp;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        Point2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
        const double area = mesh.triangle_area(t);
        auto ke = p1_stiffness(p0, p1, p2);
        // Edge-midpoint rule: midpoint of edge (i, j) carries phi_i = phi_j = 1/2.
        const std::array<Point2, 3> pts{p0, p1, p2};
        double vm[3][3] = {};
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Point2 m = 0.5 * (pts[i] + pts[j]);
                double val = v(m);
                if (!std::isfinite(val)) throw SolverError("potential evaluation failed in assembly");
                vm[i][j] = vm[j][i] = val;
            }
        for (int i = 0; i < 3; ++i) {
            int di = node_to_dof[tri[i]];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                int dj = node_to_dof[tri[j]];
                if (dj < 0) continue;
                ts.emplace_back(di, dj, ke[i][j]);
                tm.emplace_back(di, dj, area / 12.0 * (i == j ? 2.0 : 1.0));
                double pv = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = a + 1; b < 3; ++b) {
                        double fi = (i == a || i == b) ? 0.5 : 0.0;
                        double fj = (j == a || j == b) ? 0.5 : 0.0;
                        pv += area / 3.0 * vm[a][b] * fi * fj;
                    }
                tp.emplace_back(di, dj, pv);
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(out.dof_to_node.size());
    out.stiffness.resize(n, n);
    out.mass.resize(n, n);
    out.potential_mass.resize(n, n);
    out.stiffness.setFromTriplets(ts.begin(), ts.end());
    out.mass.setFromTriplets(tm.begin(), tm.end());
    out.potential_mass.setFromTriplets(tp.begin(), tp.end());
    return out;
}

/// K smallest eigenvalues of (S + P) x = lambda M x: Cholesky of M, reduction
/// to a standard symmetric matrix, Householder tridiagonalization, Sturm
/// bisection.
inline SpectrumResult generalized_eigs(const AssembledPencil& pencil, std::size_t count) {
    const std::size_t n = pencil.dimension();
    if (count == 0) throw std::invalid_argument("generalized_eigs: K must be positive");
    if (count > n / 4) throw std::invalid_argument("generalized_eigs: K exceeds dimension/4");
    if (n > kDenseCap) throw std::invalid_argument("generalized_eigs: dimension above the dense cap");
    Eigen::MatrixXd a = Eigen::MatrixXd(pencil.stiffness) + Eigen::MatrixXd(pencil.potential_mass);
    Eigen::MatrixXd m = Eigen::MatrixXd(pencil.mass);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw SolverError("generalized_eigs: mass matrix not positive definite");
    const auto l = llt.matrixL();
    Eigen::MatrixXd x = l.solve(a);            // L^{-1} A
    Eigen::MatrixXd xt = x.transpose();        // A L^{-T}
    Eigen::MatrixXd c = l.solve(xt);           // L^{-1} A L^{-T}
    c = 0.5 * (c + c.transpose()).eval();
    Eigen::Tridiagonalization<Eigen::MatrixXd> tri(c);
    SymTridiagonal t;
    // Diagonal views are strided; copy them out before taking data().
    Eigen::VectorXd d = tri.diagonal();
    Eigen::VectorXd s = tri.subDiagonal();
    t.diag.assign(d.data(), d.data() + d.size());
    t.off.assign(s.data(), s.data() + s.size());

    SpectrumResult r;
    r.eigenvalues = lowest_eigenvalues(t, count);
    r.error_estimate.assign(count, 0.0);
    r.count_requested = count;
    r.bc = to_string(pencil.bc);
    r.discretization = {"fem-p1", n, pencil.mesh_level, 0};
    if (count >= 2) r.lowest_near_degenerate = r.eigenvalues[1] - r.eigenvalues[0] < 1e-8;
    return r;
}

/// Raw eigenvalues on one mesh.
inline SpectrumResult fem_eigenvalues(const Potential2D& v, Bc2D bc, std::size_t count, int level) {
    auto mesh = mesh_polygon(v.domain(), level);
    return generalized_eigs(assemble2d(mesh, v, bc), count);
}

struct FemSpectrum {
    SpectrumResult spectrum;     // extrapolated values, error = |extrapolated - fine|
    std::vector<double> fine;    // raw values at `level`
    std::vector<double> coarse;  // raw values at `level - 1`
};

inline FemSpectrum extrapolate(const SpectrumResult& coarse, const SpectrumResult& fine) {
    FemSpectrum out;
    out.fine = fine.eigenvalues;
    out.coarse = coarse.eigenvalues;
    out.spectrum = fine;
    for (std::size_t k = 0; k < fine.size(); ++k) {
        double ext = (4.0 * fine[k] - coarse[k]) / 3.0;
        out.spectrum.eigenvalues[k] = ext;
        out.spectrum.error_estimate[k] = std::abs(ext - fine[k]);
    }
    out.spectrum.discretization.extrapolation_order = 2;
    if (fine.size() >= 2)
        out.spectrum.lowest_near_degenerate = out.spectrum.eigenvalues[1] - out.spectrum.eigenvalues[0] < 1e-8;
    return out;
}

/// Meshes at level - 1 and level, one order-2 extrapolation step.
inline FemSpectrum solve2d(const Potential2D& v, Bc2D bc, std::size_t count, int level) {
    if (level < 1) throw std::invalid_argument("solve2d: level must be >= 1");
    return extrapolate(fem_eigenvalues(v, bc, count, level - 1), fem_eigenvalues(v, bc, count, level));
}

/// Exact spectrum of -Laplace + V0 on (0, pi)^2: m^2 + n^2 + V0 with
/// m, n >= 0 (Neumann) or m, n >= 1 (Dirichlet).
inline SpectrumResult square_tensor_spectrum(double v0, std::size_t count, Bc2D bc) {
    if (count == 0) throw std::invalid_argument("square_tensor_spectrum: K must be positive");
    const long first = bc == Bc2D::Neumann ? 0 : 1;
    const long top = static_cast<long>(count) + 1;
    std::vector<long> vals;
    for (long m = first; m <= top + first; ++m)
        for (long n = first; n <= top + first; ++n) vals.push_back(m * m + n * n);
    std::sort(vals.begin(), vals.end());
    SpectrumResult r;
    for (std::size_t k = 0; k < count; ++k) r.eigenvalues.push_back(static_cast<double>(vals[k]) + v0);
    r.error_estimate.assign(count, 0.0);
    r.count_requested = count;
    r.bc = to_string(bc);
    r.discretization = {"tensor", 0, -1, 0};
    return r;
}

/// Lowest `count` sums a_i + b_j of two sorted level sequences (separable
/// potentials on rectangles), with errors added.
inline SpectrumResult separable_spectrum(const SpectrumResult& x_levels, const SpectrumResult& y_levels,
                                         std::size_t count) {
    if (x_levels.size() < count || y_levels.size() < count)
        throw std::invalid_argument("separable_spectrum: need at least K levels per direction");
    std::vector<std::pair<double, double>> sums;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j)
            sums.emplace_back(x_levels[i] + y_levels[j], x_levels.error_estimate[i] + y_levels.error_estimate[j]);
    std::sort(sums.begin(), sums.end());
    SpectrumResult r;
    for (std::size_t k = 0; k < count; ++k) {
        r.eigenvalues.push_back(sums[k].first);
        r.error_estimate.push_back(sums[k].second);
    }
    r.count_requested = count;
    r.bc = x_levels.bc;
    r.discretization = {"tensor", 0, -1, 0};
    return r;
}

} // namespace spectral_gap
