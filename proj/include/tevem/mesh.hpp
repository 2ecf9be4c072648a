// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tevem/geometry.hpp"

namespace tevem {

enum class DomainTag { unit_square, centered_square, disk, l_shape, custom };
enum class MeshFamily { triangle, quad, hex, distorted_hex, polar };

std::string to_string(DomainTag tag);
std::string to_string(MeshFamily family);
DomainTag domain_from_string(const std::string& s);
MeshFamily family_from_string(const std::string& s);

// Conforming polygonal mesh. Cells are CCW vertex-index loops; every interior
// edge is shared by exactly two cells with opposite orientation.
struct PolygonalMesh {
    std::vector<Point2> vertices;
    std::vector<std::vector<int>> cells;
    std::vector<bool> boundary_vertex;
    DomainTag domain = DomainTag::custom;
    std::uint64_t seed = 0; // jitter seed for distorted_hex, 0 otherwise

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_cells() const { return static_cast<int>(cells.size()); }
    std::vector<Point2> cell_points(int c) const;
};

// Per-cell geometric data. `points` keeps a copy of the polygon so element
// routines do not need the mesh.
struct CellGeometry {
    std::vector<Point2> points;       // CCW
    double diameter = 0.0;            // h_K
    double area = 0.0;                // |K|
    Point2 centroid;
    std::vector<double> edge_length;  // edge i runs points[i] -> points[i+1]
    std::vector<Point2> edge_normal;  // unit outward normals

    int num_vertices() const { return static_cast<int>(points.size()); }
};

CellGeometry cell_geometry(std::span<const Point2> poly);

struct MeshGeometry {
    std::vector<CellGeometry> cell;
    std::vector<std::vector<int>> vertex_cells; // incident cells per vertex
    std::vector<double> vertex_h;               // h_P = max diameter of incident cells
    double h = 0.0;                             // max_K h_K
};

// Throws MeshError on degenerate cells (zero area).
MeshGeometry compute_geometry(const PolygonalMesh& mesh);

struct CellQuality {
    double edge_ratio = 0.0;   // shortest edge / h_K
    double kernel_ratio = 0.0; // inscribed kernel-ball radius / h_K
    bool star_shaped = false;  // kernel has nonempty interior
    bool pass_a1 = false;
    bool pass_a2 = false;
};

struct MeshQualityReport {
    double c_t = 0.0;
    std::vector<CellQuality> cells;
    double min_edge_ratio = 0.0;
    double min_kernel_ratio = 0.0;
    bool pass = false; // every cell passes both checks at c_t
};

// Shape-regularity report: edge-to-diameter ratio and star-shapedness
// (polygon kernel ball) per cell, compared against c_t.
MeshQualityReport validate(const PolygonalMesh& mesh, double c_t);

// Structural invariants: simple CCW cells with positive area, manifold edges,
// boundary flags consistent, no duplicate vertices. Throws MeshError naming
// the offending cell or vertex.
void check_mesh(const PolygonalMesh& mesh);

// Recomputes boundary_vertex from edge incidence.
void mark_boundary(PolygonalMesh& mesh);

// Structured generators for the test domains. N is the number of elements per
// domain edge (square, L-shape) or the number of boundary cells (disk/polar).
// The seed only affects distorted_hex.
PolygonalMesh generate_structured(DomainTag domain, MeshFamily family, int n,
                                  std::uint64_t seed = 12345);

// Lloyd-relaxed clipped Voronoi mesh of the disk, for parity experiments with
// unstructured polygonal meshes. Deterministic for a fixed seed.
PolygonalMesh generate_voronoi_disk(int n_boundary, std::uint64_t seed = 12345,
                                    int lloyd_iterations = 100);

// Plain-text mesh format, versioned header "tevem-mesh 1". See README.
PolygonalMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const PolygonalMesh& mesh, const std::filesystem::path& path);

} // namespace tevem
