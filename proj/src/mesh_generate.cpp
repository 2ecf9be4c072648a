// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "tevem/errors.hpp"
#include "tevem/mesh.hpp"

namespace tevem {

namespace {

constexpr double kDiskRadius = 0.5;

void drop_unused_vertices(PolygonalMesh& mesh) {
    std::vector<int> remap(mesh.vertices.size(), -1);
    std::vector<Point2> kept;
    for (auto& cell : mesh.cells)
        for (int& v : cell) {
            if (remap[v] < 0) {
                remap[v] = static_cast<int>(kept.size());
                kept.push_back(mesh.vertices[v]);
            }
            v = remap[v];
        }
    mesh.vertices = std::move(kept);
}

void finalize(PolygonalMesh& mesh) {
    mark_boundary(mesh);
    check_mesh(mesh);
}

PolygonalMesh grid_mesh(DomainTag domain, MeshFamily family, int n) {
    const double x0 = domain == DomainTag::unit_square ? 0.0 : -0.5;
    const double y0 = x0;
    const bool l_shape = domain == DomainTag::l_shape;

    // The L-shape is the union of three half-unit blocks; its refinement
    // parameter counts elements per block edge, so the grid spans 2n cells.
    const int n_div = l_shape ? 2 * n : n;
    PolygonalMesh mesh;
    mesh.domain = domain;
    const double hx = 1.0 / n_div;
    auto vid = [&](int i, int j) { return j * (n_div + 1) + i; };
    for (int j = 0; j <= n_div; ++j)
        for (int i = 0; i <= n_div; ++i)
            mesh.vertices.push_back({x0 + i * hx, y0 + j * hx});

    for (int j = 0; j < n_div; ++j) {
        for (int i = 0; i < n_div; ++i) {
            // Removed quadrant of the L-shape: x > 0, y < 0.
            if (l_shape && i >= n_div / 2 && j < n_div / 2) continue;
            const int a = vid(i, j), b = vid(i + 1, j);
            const int c = vid(i + 1, j + 1), d = vid(i, j + 1);
            if (family == MeshFamily::quad) {
                mesh.cells.push_back({a, b, c, d});
            } else if ((i + j) % 2 == 0) {
                // Alternating diagonals keep the full symmetry group of the
                // square, so symmetric eigenvalue pairs stay degenerate on the
                // discrete level.
                mesh.cells.push_back({a, b, c});
                mesh.cells.push_back({a, c, d});
            } else {
                mesh.cells.push_back({a, b, d});
                mesh.cells.push_back({b, c, d});
            }
        }
    }
    drop_unused_vertices(mesh);
    finalize(mesh);
    return mesh;
}

// Honeycomb clipped to the square, built on an exact integer key lattice:
// x = a / (2n), y = b / (3m) with n columns and m = 9n/8 rows, a 2.6 percent
// vertical squash of the regular honeycomb. The fixed 9/8 ratio keeps the
// meshes of a refinement sequence exactly self-similar, so eigenvalue error
// constants do not drift between levels. Even rows hold n full hexagons, odd
// rows are offset by half a column; the clip produces pentagons on the
// top/bottom rows and quads on the side columns, all convex.
PolygonalMesh hex_mesh(DomainTag domain, int n) {
    const double x0 = domain == DomainTag::unit_square ? 0.0 : -0.5;
    const double y0 = x0;
    const int m = std::max(2, static_cast<int>(std::lround(9.0 * n / 8.0)));

    PolygonalMesh mesh;
    mesh.domain = domain;
    std::map<std::pair<int, int>, int> key_to_index;
    auto vertex = [&](int a, int b) {
        auto [it, inserted] = key_to_index.try_emplace({a, b}, mesh.num_vertices());
        if (inserted)
            mesh.vertices.push_back({x0 + static_cast<double>(a) / (2 * n),
                                     y0 + static_cast<double>(b) / (3 * m)});
        return it->second;
    };
    auto add_cell = [&](std::initializer_list<std::pair<int, int>> keys) {
        std::vector<int> cell;
        for (auto [a, b] : keys) cell.push_back(vertex(a, b));
        mesh.cells.push_back(std::move(cell));
    };

    for (int i = 0; i <= m; ++i) {
        const int bc = 3 * i;
        if (i % 2 == 0) {
            // Full-width row: hexagon centers at a = 2j+1.
            for (int j = 0; j < n; ++j) {
                const int ac = 2 * j + 1;
                if (i == 0)
                    add_cell({{ac - 1, 0}, {ac + 1, 0}, {ac + 1, 1}, {ac, 2}, {ac - 1, 1}});
                else if (i == m)
                    add_cell({{ac, bc - 2}, {ac + 1, bc - 1}, {ac + 1, bc},
                              {ac - 1, bc}, {ac - 1, bc - 1}});
                else
                    add_cell({{ac, bc - 2}, {ac + 1, bc - 1}, {ac + 1, bc + 1},
                              {ac, bc + 2}, {ac - 1, bc + 1}, {ac - 1, bc - 1}});
            }
        } else {
            // Offset row: centers at a = 2j, halves at the side walls.
            for (int j = 0; j <= n; ++j) {
                const int ac = 2 * j;
                if (j == 0) {
                    if (i == m)
                        add_cell({{0, bc - 2}, {1, bc - 1}, {1, bc}, {0, bc}});
                    else
                        add_cell({{0, bc - 2}, {1, bc - 1}, {1, bc + 1}, {0, bc + 2}});
                } else if (j == n) {
                    if (i == m)
                        add_cell({{ac - 1, bc - 1}, {ac, bc - 2}, {ac, bc}, {ac - 1, bc}});
                    else
                        add_cell({{ac - 1, bc - 1}, {ac, bc - 2}, {ac, bc + 2},
                                  {ac - 1, bc + 1}});
                } else if (i == m) {
                    add_cell({{ac, bc - 2}, {ac + 1, bc - 1}, {ac + 1, bc},
                              {ac - 1, bc}, {ac - 1, bc - 1}});
                } else {
                    add_cell({{ac, bc - 2}, {ac + 1, bc - 1}, {ac + 1, bc + 1},
                              {ac, bc + 2}, {ac - 1, bc + 1}, {ac - 1, bc - 1}});
                }
            }
        }
    }
    finalize(mesh);
    return mesh;
}

PolygonalMesh distorted_hex_mesh(DomainTag domain, int n, std::uint64_t seed) {
    PolygonalMesh mesh = hex_mesh(domain, n);
    mesh.seed = seed;

    std::vector<std::set<int>> neighbors(mesh.vertices.size());
    std::vector<std::vector<int>> incident(mesh.vertices.size());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cells[c];
        const int k = static_cast<int>(cell.size());
        for (int i = 0; i < k; ++i) {
            neighbors[cell[i]].insert(cell[(i + 1) % k]);
            neighbors[cell[(i + 1) % k]].insert(cell[i]);
            incident[cell[i]].push_back(c);
        }
    }

    // Jitter radii are bounded by the undistorted edge lengths, so the bound
    // does not depend on the vertex visiting order.
    const std::vector<Point2> base = mesh.vertices;
    Rng64 rng(seed);
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double amp = rng.uniform(); // always drawn, keeps the stream aligned
        if (mesh.boundary_vertex[v]) continue;
        double shortest = std::numeric_limits<double>::infinity();
        for (int w : neighbors[v])
            shortest = std::min(shortest, (base[v] - base[w]).norm());
        double radius = 0.2 * shortest * amp;
        const Point2 original = mesh.vertices[v];
        for (int attempt = 0; attempt < 10; ++attempt) {
            mesh.vertices[v] = original + Point2{radius * std::cos(angle),
                                                 radius * std::sin(angle)};
            bool ok = true;
            for (int c : incident[v])
                ok = ok && polygon_is_strictly_convex(mesh.cell_points(c));
            if (ok) break;
            mesh.vertices[v] = original;
            radius *= 0.5;
        }
    }
    finalize(mesh);
    return mesh;
}

// Rings-by-sectors decomposition of the chord polygon inscribed in the disk.
// For n >= 12 (even) the two innermost rings use n/2 sectors, with a pentagon
// transition ring, so that the fan triangles at the center stay shape-regular;
// every ring from the second circle outward has n sectors and the outer ring
// has exactly n cells on the boundary.
PolygonalMesh polar_mesh(int n) {
    if (n < 4) throw ConfigError("polar meshes need at least 4 boundary cells");
    const double r = kDiskRadius;
    const double two_pi = 2.0 * std::numbers::pi;

    PolygonalMesh mesh;
    mesh.domain = DomainTag::disk;
    // Ring count proportional to n so refinement sequences stay geometrically
    // self-similar; with n/4 rings the outermost quads carry the largest
    // diameter on every level, which keeps the measured h halving exactly.
    const bool transition = n >= 12 && n % 2 == 0;
    const int m = transition
                      ? std::max(3, static_cast<int>(std::lround(n / 4.0)))
                      : std::max(1, static_cast<int>(std::lround(n / 6.0)));

    mesh.vertices.push_back({0.0, 0.0});
    std::vector<std::vector<int>> circle(m + 1); // circle[k] = vertex ids at radius r*k/m
    for (int k = 1; k <= m; ++k) {
        const int count = (transition && k == 1) ? n / 2 : n;
        circle[k].resize(count);
        for (int j = 0; j < count; ++j) {
            const double theta = two_pi * j / count;
            circle[k][j] = mesh.num_vertices();
            mesh.vertices.push_back({r * k / m * std::cos(theta),
                                     r * k / m * std::sin(theta)});
        }
    }

    const int n1 = static_cast<int>(circle[1].size());
    for (int j = 0; j < n1; ++j)
        mesh.cells.push_back({0, circle[1][j], circle[1][(j + 1) % n1]});
    int first_quad_ring = 2;
    if (transition) {
        for (int j = 0; j < n1; ++j)
            mesh.cells.push_back({circle[1][j], circle[2][2 * j], circle[2][2 * j + 1],
                                  circle[2][(2 * j + 2) % n], circle[1][(j + 1) % n1]});
        first_quad_ring = 3;
    }
    for (int k = first_quad_ring; k <= m; ++k)
        for (int j = 0; j < n; ++j)
            mesh.cells.push_back({circle[k - 1][j], circle[k][j],
                                  circle[k][(j + 1) % n], circle[k - 1][(j + 1) % n]});
    finalize(mesh);
    return mesh;
}

} // namespace

PolygonalMesh generate_structured(DomainTag domain, MeshFamily family, int n,
                                  std::uint64_t seed) {
    if (n < 2) throw ConfigError("refinement parameter must be at least 2");
    const bool square = domain == DomainTag::unit_square ||
                        domain == DomainTag::centered_square;
    switch (family) {
        case MeshFamily::triangle:
        case MeshFamily::quad:
            if (domain == DomainTag::disk || domain == DomainTag::custom)
                throw ConfigError("family '" + to_string(family) +
                                  "' requires a square or L-shaped domain");
            return grid_mesh(domain, family, n);
        case MeshFamily::hex:
            if (!square)
                throw ConfigError("hexagonal meshes are only defined on square domains");
            return hex_mesh(domain, n);
        case MeshFamily::distorted_hex:
            if (!square)
                throw ConfigError("hexagonal meshes are only defined on square domains");
            return distorted_hex_mesh(domain, n, seed);
        case MeshFamily::polar:
            if (domain != DomainTag::disk)
                throw ConfigError("polar meshes are only defined on the disk");
            return polar_mesh(n);
    }
    throw ConfigError("unknown mesh family");
}

namespace {

// Clip a convex polygon by the half-plane {x : normal . x <= offset}.
std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, Point2 normal,
                                    double offset) {
    std::vector<Point2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % n];
        const double da = normal.dot(a) - offset;
        const double db = normal.dot(b) - offset;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0))
            out.push_back(a + (b - a) * (da / (da - db)));
    }
    return out;
}

} // namespace

PolygonalMesh generate_voronoi_disk(int n_boundary, std::uint64_t seed,
                                    int lloyd_iterations) {
    if (n_boundary < 8) throw ConfigError("voronoi disk meshes need n >= 8");
    const double r = kDiskRadius;
    const int n_sites = std::max(
        8, static_cast<int>(std::lround(n_boundary * n_boundary / (4.0 * std::numbers::pi))));

    // Domain polygon: the chord n-gon inscribed in the disk, same boundary
    // resolution as the polar family.
    std::vector<Point2> domain;
    for (int j = 0; j < n_boundary; ++j) {
        const double t = 2.0 * std::numbers::pi * j / n_boundary;
        domain.push_back({r * std::cos(t), r * std::sin(t)});
    }

    Rng64 rng(seed);
    std::vector<Point2> sites;
    while (static_cast<int>(sites.size()) < n_sites) {
        const Point2 p{rng.uniform(-r, r), rng.uniform(-r, r)};
        if (p.norm() < 0.97 * r) sites.push_back(p);
    }

    auto voronoi_cell = [&](int i) {
        std::vector<Point2> cell = domain;
        for (int j = 0; j < n_sites && !cell.empty(); ++j) {
            if (j == i) continue;
            const Point2 d = sites[j] - sites[i];
            const Point2 mid = (sites[i] + sites[j]) * 0.5;
            cell = clip_half_plane(cell, d, d.dot(mid));
        }
        return cell;
    };

    for (int it = 0; it < lloyd_iterations; ++it) {
        for (int i = 0; i < n_sites; ++i) {
            const auto cell = voronoi_cell(i);
            if (cell.size() >= 3) sites[i] = polygon_centroid(cell);
        }
    }

    // Weld cell corners; circumcenters computed from different seeds agree only
    // to roundoff.
    PolygonalMesh mesh;
    mesh.domain = DomainTag::disk;
    mesh.seed = seed;
    const double tol = 1e-9 * r;
    std::map<std::pair<long long, long long>, std::vector<int>> grid;
    auto weld = [&](Point2 p) {
        const long long gx = static_cast<long long>(std::floor(p.x / (4.0 * tol)));
        const long long gy = static_cast<long long>(std::floor(p.y / (4.0 * tol)));
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find({gx + dx, gy + dy});
                if (it == grid.end()) continue;
                for (int idx : it->second)
                    if ((mesh.vertices[idx] - p).norm() <= tol) return idx;
            }
        const int idx = mesh.num_vertices();
        mesh.vertices.push_back(p);
        grid[{gx, gy}].push_back(idx);
        return idx;
    };

    for (int i = 0; i < n_sites; ++i) {
        const auto cell = voronoi_cell(i);
        if (cell.size() < 3)
            throw MeshError("voronoi generator produced an empty cell");
        std::vector<int> ids;
        for (const Point2& p : cell) {
            const int idx = weld(p);
            if (ids.empty() || (ids.back() != idx && ids.front() != idx))
                ids.push_back(idx);
        }
        if (ids.size() < 3)
            throw MeshError("voronoi generator produced a degenerate cell");
        mesh.cells.push_back(std::move(ids));
    }
    finalize(mesh);
    return mesh;
}

} // namespace tevem
