// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Sparse>
#include <array>
#include <filesystem>

#include "tevem/mesh.hpp"
#include "tevem/vem_local.hpp"

namespace tevem {

// Global numbering of the free DOFs: 4 per interior vertex. The u block comes
// first, vertex-major (value, dx, dy), then the phi block. Boundary vertices
// carry no free DOFs; clamping them enforces v = dv/dnu = 0 and psi = 0 on the
// whole boundary because the edge traces are determined by endpoint DOFs.
struct DofMap {
    static constexpr int BOUNDARY = -1;

    int n_interior = 0;
    int n_free = 0;                          // 4 * n_interior
    std::vector<int> interior_index;         // per vertex, -1 on the boundary

    bool is_interior(int vertex) const { return interior_index[vertex] >= 0; }
    // Global indices of the (u, dx u, dy u) DOFs of a vertex, or BOUNDARY.
    std::array<int, 3> u_dofs(int vertex) const {
        int k = interior_index[vertex];
        if (k < 0) return {BOUNDARY, BOUNDARY, BOUNDARY};
        return {3 * k, 3 * k + 1, 3 * k + 2};
    }
    int phi_dof(int vertex) const {
        int k = interior_index[vertex];
        return k < 0 ? BOUNDARY : 3 * n_interior + k;
    }
};

// Throws MeshError when the mesh has no interior vertices.
DofMap build_dof_map(const PolygonalMesh& mesh);

// Generalized pencil A x = lambda B x over the free DOFs. A is symmetric
// positive definite (assembled exactly symmetric); B is real nonsymmetric with
// a zero psi-test x phi-trial block.
struct EigenPencil {
    Eigen::SparseMatrix<double> A;
    Eigen::SparseMatrix<double> B;
    DofMap dof_map;
};

// Requires n_index > 1. Boundary DOFs are eliminated (row/column deletion).
EigenPencil assemble(const PolygonalMesh& mesh, double n_index);
EigenPencil assemble(const PolygonalMesh& mesh, const MeshGeometry& geo, double n_index);

// Coordinate text dump, MatrixMarket-compatible header.
void write_matrix_market(const Eigen::SparseMatrix<double>& m,
                         const std::filesystem::path& path);

} // namespace tevem
