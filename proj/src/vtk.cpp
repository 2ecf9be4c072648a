// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "tevem/vtk.hpp"

#include <fstream>
#include <iomanip>

#include "tevem/errors.hpp"
#include "tevem/vem_local.hpp"

namespace tevem {

void write_vtk_eigenfunction(const PolygonalMesh& mesh, const MeshGeometry& geo,
                             const DofMap& dof_map, const Eigen::VectorXcd& x,
                             const std::filesystem::path& path) {
    const int nv = mesh.num_vertices();
    const int nc = mesh.num_cells();

    // Evaluate the P2 projection of u and the P1 projection of phi per cell,
    // then average at shared vertices (the projections of adjacent cells
    // differ by the projection error).
    std::vector<std::complex<double>> u_point(nv, 0.0), phi_point(nv, 0.0);
    std::vector<double> point_weight(nv, 0.0);
    std::vector<std::complex<double>> u_cell(nc, 0.0), phi_cell(nc, 0.0);

    auto dof_value = [&](int global) -> std::complex<double> {
        return global < 0 ? std::complex<double>(0.0, 0.0) : x[global];
    };

    for (int c = 0; c < nc; ++c) {
        const CellGeometry& cell = geo.cell[c];
        const int nk = cell.num_vertices();
        const Eigen::MatrixXd pi_hess = hessian_projector(cell);
        const Eigen::MatrixXd pi_grad1 = grad_projector_p1(cell);

        Eigen::VectorXcd w_dofs(3 * nk), v_dofs(nk);
        for (int i = 0; i < nk; ++i) {
            const auto u = dof_map.u_dofs(mesh.cells[c][i]);
            w_dofs[3 * i] = dof_value(u[0]);
            w_dofs[3 * i + 1] = dof_value(u[1]);
            w_dofs[3 * i + 2] = dof_value(u[2]);
            v_dofs[i] = dof_value(dof_map.phi_dof(mesh.cells[c][i]));
        }
        const Eigen::VectorXcd u_coeff =
            pi_hess * w_dofs.real() +
            std::complex<double>(0, 1) * (pi_hess * w_dofs.imag());
        const Eigen::VectorXcd phi_coeff =
            pi_grad1 * v_dofs.real() +
            std::complex<double>(0, 1) * (pi_grad1 * v_dofs.imag());

        const ScaledMonomialBasis b2(cell, 2);
        const ScaledMonomialBasis b1(cell, 1);
        auto eval_u = [&](Point2 p) {
            std::complex<double> s = 0.0;
            for (int k = 0; k < 6; ++k) s += u_coeff[k] * b2.value(k, p);
            return s;
        };
        auto eval_phi = [&](Point2 p) {
            std::complex<double> s = 0.0;
            for (int k = 0; k < 3; ++k) s += phi_coeff[k] * b1.value(k, p);
            return s;
        };

        u_cell[c] = eval_u(cell.centroid);
        phi_cell[c] = eval_phi(cell.centroid);
        for (int i = 0; i < nk; ++i) {
            const int v = mesh.cells[c][i];
            u_point[v] += eval_u(cell.points[i]);
            phi_point[v] += eval_phi(cell.points[i]);
            point_weight[v] += 1.0;
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (point_weight[v] > 0.0) {
            u_point[v] /= point_weight[v];
            phi_point[v] /= point_weight[v];
        }
    }

    std::ofstream out(path);
    if (!out) throw Error("cannot write VTK file '" + path.string() + "'");
    out << "# vtk DataFile Version 3.0\n";
    out << "tevem eigenfunction\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nv << " double\n";
    out << std::setprecision(12);
    for (const Point2& p : mesh.vertices) out << p.x << ' ' << p.y << " 0\n";

    int list_size = 0;
    for (const auto& cell : mesh.cells) list_size += 1 + static_cast<int>(cell.size());
    out << "CELLS " << nc << ' ' << list_size << '\n';
    for (const auto& cell : mesh.cells) {
        out << cell.size();
        for (int v : cell) out << ' ' << v;
        out << '\n';
    }
    out << "CELL_TYPES " << nc << '\n';
    for (int c = 0; c < nc; ++c) out << "7\n"; // VTK_POLYGON

    auto scalars = [&out](const std::string& name, auto&& values, auto&& get) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (const auto& v : values) out << get(v) << '\n';
    };
    out << "POINT_DATA " << nv << '\n';
    scalars("u_re", u_point, [](std::complex<double> z) { return z.real(); });
    scalars("u_im", u_point, [](std::complex<double> z) { return z.imag(); });
    scalars("phi_re", phi_point, [](std::complex<double> z) { return z.real(); });
    scalars("phi_im", phi_point, [](std::complex<double> z) { return z.imag(); });
    out << "CELL_DATA " << nc << '\n';
    scalars("u_re", u_cell, [](std::complex<double> z) { return z.real(); });
    scalars("u_im", u_cell, [](std::complex<double> z) { return z.imag(); });
    if (!out) throw Error("write failure on '" + path.string() + "'");
}

} // namespace tevem
