// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "tevem/mesh.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tevem/errors.hpp"

namespace tevem {

std::string to_string(DomainTag tag) {
    switch (tag) {
        case DomainTag::unit_square: return "unit_square";
        case DomainTag::centered_square: return "centered_square";
        case DomainTag::disk: return "disk";
        case DomainTag::l_shape: return "l_shape";
        case DomainTag::custom: return "custom";
    }
    return "custom";
}

std::string to_string(MeshFamily family) {
    switch (family) {
        case MeshFamily::triangle: return "triangle";
        case MeshFamily::quad: return "quad";
        case MeshFamily::hex: return "hex";
        case MeshFamily::distorted_hex: return "distorted_hex";
        case MeshFamily::polar: return "polar";
    }
    return "triangle";
}

DomainTag domain_from_string(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), '-', '_');
    if (t == "unit_square") return DomainTag::unit_square;
    if (t == "centered_square") return DomainTag::centered_square;
    if (t == "disk") return DomainTag::disk;
    if (t == "l_shape" || t == "lshape") return DomainTag::l_shape;
    if (t == "custom") return DomainTag::custom;
    throw ConfigError("unknown domain '" + s + "'");
}

MeshFamily family_from_string(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), '-', '_');
    if (t == "triangle") return MeshFamily::triangle;
    if (t == "quad") return MeshFamily::quad;
    if (t == "hex") return MeshFamily::hex;
    if (t == "distorted_hex") return MeshFamily::distorted_hex;
    if (t == "polar") return MeshFamily::polar;
    throw ConfigError("unknown mesh family '" + s + "'");
}

std::vector<Point2> PolygonalMesh::cell_points(int c) const {
    std::vector<Point2> pts;
    pts.reserve(cells[c].size());
    for (int v : cells[c]) pts.push_back(vertices[v]);
    return pts;
}

CellGeometry cell_geometry(std::span<const Point2> poly) {
    CellGeometry g;
    g.points.assign(poly.begin(), poly.end());
    g.area = polygon_signed_area(poly);
    if (!(g.area > 0.0))
        throw MeshError("degenerate cell: non-positive area");
    g.centroid = polygon_centroid(poly);
    g.diameter = polygon_diameter(poly);
    const int n = static_cast<int>(poly.size());
    g.edge_length.resize(n);
    g.edge_normal.resize(n);
    for (int i = 0; i < n; ++i) {
        const Point2 e = poly[(i + 1) % n] - poly[i];
        g.edge_length[i] = e.norm();
        if (g.edge_length[i] <= 0.0)
            throw MeshError("degenerate cell: zero-length edge");
        g.edge_normal[i] = e.rot_cw() / g.edge_length[i];
    }
    return g;
}

void mark_boundary(PolygonalMesh& mesh) {
    mesh.boundary_vertex.assign(mesh.vertices.size(), false);
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& cell : mesh.cells) {
        const int k = static_cast<int>(cell.size());
        for (int i = 0; i < k; ++i) {
            int a = cell[i], b = cell[(i + 1) % k];
            edge_count[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    for (const auto& [edge, count] : edge_count) {
        if (count == 1) {
            mesh.boundary_vertex[edge.first] = true;
            mesh.boundary_vertex[edge.second] = true;
        }
    }
}

void check_mesh(const PolygonalMesh& mesh) {
    const int nv = mesh.num_vertices();
    if (nv < 3 || mesh.cells.empty()) throw MeshError("mesh is empty");
    if (static_cast<int>(mesh.boundary_vertex.size()) != nv)
        throw MeshError("boundary flags missing or of wrong size");

    double diam = 0.0;
    Point2 lo = mesh.vertices[0], hi = mesh.vertices[0];
    for (const Point2& p : mesh.vertices) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
    }
    diam = (hi - lo).norm();
    if (!(diam > 0.0)) throw MeshError("mesh has zero extent");

    // Duplicate vertices within 1e-12 * diameter. Grid hashing keeps this
    // near-linear.
    {
        const double tol = 1e-12 * diam;
        const double cell = std::max(tol * 4.0, 1e-300);
        std::map<std::pair<long long, long long>, std::vector<int>> grid;
        for (int i = 0; i < nv; ++i) {
            const Point2 p = mesh.vertices[i];
            const long long gx = static_cast<long long>(std::floor(p.x / cell));
            const long long gy = static_cast<long long>(std::floor(p.y / cell));
            for (long long dx = -1; dx <= 1; ++dx)
                for (long long dy = -1; dy <= 1; ++dy) {
                    auto it = grid.find({gx + dx, gy + dy});
                    if (it == grid.end()) continue;
                    for (int j : it->second)
                        if ((p - mesh.vertices[j]).norm() <= tol)
                            throw MeshError("duplicate vertices " + std::to_string(j) +
                                            " and " + std::to_string(i));
                }
            grid[{gx, gy}].push_back(i);
        }
    }

    // Per-cell structure: valid indices, simple polygon, positive (CCW) area.
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cells[c];
        if (cell.size() < 3)
            throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
        std::set<int> seen;
        for (int v : cell) {
            if (v < 0 || v >= nv)
                throw MeshError("cell " + std::to_string(c) + " references invalid vertex " +
                                std::to_string(v));
            if (!seen.insert(v).second)
                throw MeshError("cell " + std::to_string(c) + " repeats vertex " +
                                std::to_string(v));
        }
        const auto pts = mesh.cell_points(c);
        const double area = polygon_signed_area(pts);
        if (area < 0.0)
            throw MeshError("cell " + std::to_string(c) + " has clockwise orientation");
        if (!(area > 0.0))
            throw MeshError("cell " + std::to_string(c) + " has zero area");
        if (!polygon_is_simple(pts))
            throw MeshError("cell " + std::to_string(c) + " is self-intersecting");
    }

    // Edge manifold check: interior edges are shared by exactly two cells with
    // opposite orientation, boundary edges by one.
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges; // -> (cell, dir)
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cells[c];
        const int k = static_cast<int>(cell.size());
        for (int i = 0; i < k; ++i) {
            int a = cell[i], b = cell[(i + 1) % k];
            const int dir = a < b ? +1 : -1;
            edges[{std::min(a, b), std::max(a, b)}].push_back({c, dir});
        }
    }
    std::vector<bool> on_boundary(nv, false);
    for (const auto& [edge, inc] : edges) {
        if (inc.size() > 2)
            throw MeshError("edge (" + std::to_string(edge.first) + "," +
                            std::to_string(edge.second) + ") is shared by " +
                            std::to_string(inc.size()) + " cells (first: cell " +
                            std::to_string(inc[0].first) + ")");
        if (inc.size() == 2 && inc[0].second == inc[1].second)
            throw MeshError("cells " + std::to_string(inc[0].first) + " and " +
                            std::to_string(inc[1].first) +
                            " traverse a shared edge in the same direction");
        if (inc.size() == 1) {
            on_boundary[edge.first] = true;
            on_boundary[edge.second] = true;
        }
    }
    for (int v = 0; v < nv; ++v)
        if (mesh.boundary_vertex[v] != on_boundary[v])
            throw MeshError("vertex " + std::to_string(v) +
                            " has inconsistent boundary flag");
}

MeshGeometry compute_geometry(const PolygonalMesh& mesh) {
    MeshGeometry geo;
    geo.cell.reserve(mesh.num_cells());
    geo.vertex_cells.assign(mesh.num_vertices(), {});
    geo.vertex_h.assign(mesh.num_vertices(), 0.0);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        geo.cell.push_back(cell_geometry(mesh.cell_points(c)));
        geo.h = std::max(geo.h, geo.cell.back().diameter);
        for (int v : mesh.cells[c]) {
            geo.vertex_cells[v].push_back(c);
            geo.vertex_h[v] = std::max(geo.vertex_h[v], geo.cell.back().diameter);
        }
    }
    return geo;
}

MeshQualityReport validate(const PolygonalMesh& mesh, double c_t) {
    if (!(c_t > 0.0)) throw ConfigError("C_T must be positive");
    MeshQualityReport report;
    report.c_t = c_t;
    report.cells.resize(mesh.num_cells());
    report.min_edge_ratio = std::numeric_limits<double>::infinity();
    report.min_kernel_ratio = std::numeric_limits<double>::infinity();
    report.pass = true;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const CellGeometry g = cell_geometry(mesh.cell_points(c));
        CellQuality& q = report.cells[c];
        const double shortest =
            *std::min_element(g.edge_length.begin(), g.edge_length.end());
        q.edge_ratio = shortest / g.diameter;
        const KernelBall ball = polygon_kernel_ball(g.points);
        q.kernel_ratio = ball.radius / g.diameter;
        q.star_shaped = ball.radius > 0.0;
        q.pass_a1 = q.edge_ratio > c_t;
        q.pass_a2 = q.kernel_ratio > c_t;
        report.min_edge_ratio = std::min(report.min_edge_ratio, q.edge_ratio);
        report.min_kernel_ratio = std::min(report.min_kernel_ratio, q.kernel_ratio);
        report.pass = report.pass && q.pass_a1 && q.pass_a2;
    }
    return report;
}

} // namespace tevem
