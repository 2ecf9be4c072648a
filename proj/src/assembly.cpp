// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "tevem/assembly.hpp"

#include <fstream>

#include "tevem/errors.hpp"

namespace tevem {

DofMap build_dof_map(const PolygonalMesh& mesh) {
    DofMap map;
    map.interior_index.assign(mesh.num_vertices(), DofMap::BOUNDARY);
    for (int v = 0; v < mesh.num_vertices(); ++v)
        if (!mesh.boundary_vertex[v]) map.interior_index[v] = map.n_interior++;
    if (map.n_interior == 0)
        throw MeshError("mesh has no interior vertices; the discrete space is empty");
    map.n_free = 4 * map.n_interior;
    return map;
}

EigenPencil assemble(const PolygonalMesh& mesh, double n_index) {
    return assemble(mesh, compute_geometry(mesh), n_index);
}

EigenPencil assemble(const PolygonalMesh& mesh, const MeshGeometry& geo,
                     double n_index) {
    if (!(n_index > 1.0))
        throw ConfigError("index of refraction must exceed 1");
    EigenPencil pencil;
    pencil.dof_map = build_dof_map(mesh);
    const DofMap& dofs = pencil.dof_map;

    std::vector<Eigen::Triplet<double>> trip_a, trip_b;
    std::vector<int> w_global, v_global;
    std::vector<double> vertex_h;

    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cells[c];
        const int nk = static_cast<int>(cell.size());
        vertex_h.clear();
        for (int v : cell) vertex_h.push_back(geo.vertex_h[v]);
        const ElementOperators ops = element_operators(geo.cell[c], n_index, vertex_h);

        // Local-to-global with BOUNDARY = eliminated rows/columns.
        w_global.assign(3 * nk, DofMap::BOUNDARY);
        v_global.assign(nk, DofMap::BOUNDARY);
        for (int i = 0; i < nk; ++i) {
            const auto u = dofs.u_dofs(cell[i]);
            w_global[3 * i] = u[0];
            w_global[3 * i + 1] = u[1];
            w_global[3 * i + 2] = u[2];
            v_global[i] = dofs.phi_dof(cell[i]);
        }

        auto scatter = [](std::vector<Eigen::Triplet<double>>& trip,
                          const Eigen::MatrixXd& local,
                          const std::vector<int>& rows, const std::vector<int>& cols) {
            for (int i = 0; i < local.rows(); ++i) {
                if (rows[i] < 0) continue;
                for (int j = 0; j < local.cols(); ++j) {
                    if (cols[j] < 0 || local(i, j) == 0.0) continue;
                    trip.emplace_back(rows[i], cols[j], local(i, j));
                }
            }
        };

        scatter(trip_a, ops.a_w, w_global, w_global);
        scatter(trip_a, ops.a_v, v_global, v_global);
        scatter(trip_b, ops.b_uu, w_global, w_global);
        scatter(trip_b, ops.b_uphi, w_global, v_global);
        scatter(trip_b, ops.b_psiu, v_global, w_global);
    }

    pencil.A.resize(dofs.n_free, dofs.n_free);
    pencil.B.resize(dofs.n_free, dofs.n_free);
    pencil.A.setFromTriplets(trip_a.begin(), trip_a.end());
    pencil.B.setFromTriplets(trip_b.begin(), trip_b.end());
    pencil.A.makeCompressed();
    pencil.B.makeCompressed();
    return pencil;
}

void write_matrix_market(const Eigen::SparseMatrix<double>& m,
                         const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write matrix file '" + path.string() + "'");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    out << std::setprecision(17);
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    if (!out) throw Error("write failure on '" + path.string() + "'");
}

} // namespace tevem
