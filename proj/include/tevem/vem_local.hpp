// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <span>

#include "tevem/quadrature.hpp"

namespace tevem {

// Local DOF ordering on a cell with N vertices.
//   W space (3N): v(P_1), dx v(P_1), dy v(P_1), ..., v(P_N), dx v(P_N), dy v(P_N)
//   V space (N):  psi(P_1), ..., psi(P_N)
struct LocalDofLayout {
    int n_vertices = 0;

    int n_w() const { return 3 * n_vertices; }
    int n_v() const { return n_vertices; }
    static int w_value(int vertex) { return 3 * vertex; }
    static int w_dx(int vertex) { return 3 * vertex + 1; }
    static int w_dy(int vertex) { return 3 * vertex + 2; }
};

// Evaluation of the P2 scaled monomials at the W DOFs (3N x 6) and of the P1
// monomials at the V DOFs (N x 3).
Eigen::MatrixXd w_dof_matrix(const CellGeometry& cell);
Eigen::MatrixXd v_dof_matrix(const CellGeometry& cell);

// Energy projection onto P2 w.r.t. the Hessian seminorm, rank-3 kernel closed
// by the vertex-sum pairing against P1. Returns the 6 x 3N map from W DOFs to
// P2 coefficients. Any positive closure_weight yields the same projector;
// 0 selects 1/N.
Eigen::MatrixXd hessian_projector(const CellGeometry& cell, double closure_weight = 0.0);

// H1 projection onto P1 from vertex DOFs, closed by the boundary mean (3 x N).
Eigen::MatrixXd grad_projector_p1(const CellGeometry& cell);

// Internal moments of the virtual functions against the scaled monomials,
// \int_K basis_j m_a. On the enhanced spaces these equal the moments of the
// energy projections, which makes them DOF-computable.
struct MomentSupply {
    Eigen::MatrixXd w; // 6 x 3N
    Eigen::MatrixXd v; // 3 x N
};

MomentSupply enhancement_moments(const CellGeometry& cell,
                                 const Eigen::MatrixXd& pi_hess,
                                 const Eigen::MatrixXd& pi_grad1);

// H1 projection onto P2 from W DOFs, closed by the cell mean (6 x 3N).
Eigen::MatrixXd grad_projector_p2(const CellGeometry& cell, const MomentSupply& moments);

// P2 coefficients of the L2 projection of the Laplacian, 6 x 3N.
Eigen::MatrixXd laplacian_l2_projector(const CellGeometry& cell, const MomentSupply& moments);

// Verifies that the L2 projections computed from the supplied moments coincide
// with the energy projections (exact on the enhanced spaces). A corrupted
// moment supply makes this return false.
bool l2_projectors_identity_check(const CellGeometry& cell,
                                  const MomentSupply& moments,
                                  double tol = 1e-12);

struct LocalStiffness {
    Eigen::MatrixXd a_w; // 3N x 3N, PSD, kernel = DOFs of P1
    Eigen::MatrixXd a_v; // N x N, PSD, kernel = constants
    double sigma = 0.0;  // vertex-stabilization weight
};

// Stabilized local forms. vertex_h holds h_P for each cell vertex (max
// diameter over the incident cells). Requires n_index > 1.
LocalStiffness local_stiffness(const CellGeometry& cell, double n_index,
                               std::span<const double> vertex_h,
                               const Eigen::MatrixXd& pi_hess,
                               const Eigen::MatrixXd& pi_grad1);

struct LocalB {
    Eigen::MatrixXd uu;    // 3N x 3N, test u x trial u
    Eigen::MatrixXd uphi;  // 3N x N,  test u x trial phi
    Eigen::MatrixXd psiu;  // N x 3N,  test psi x trial u
};

LocalB local_b(const CellGeometry& cell, double n_index,
               const Eigen::MatrixXd& pi_hess,
               const Eigen::MatrixXd& pi_grad1,
               const Eigen::MatrixXd& pi_grad2,
               const Eigen::MatrixXd& pi_lap);

// Everything the assembler needs for one element.
struct ElementOperators {
    int n_vertices = 0;
    Eigen::MatrixXd pi_hess;  // 6 x 3N
    Eigen::MatrixXd pi_grad1; // 3 x N
    Eigen::MatrixXd pi_grad2; // 6 x 3N
    Eigen::MatrixXd pi_lap;   // 6 x 3N
    double sigma = 0.0;
    Eigen::MatrixXd a_w;
    Eigen::MatrixXd a_v;
    Eigen::MatrixXd b_uu;
    Eigen::MatrixXd b_uphi;
    Eigen::MatrixXd b_psiu;
};

ElementOperators element_operators(const CellGeometry& cell, double n_index,
                                   std::span<const double> vertex_h);

} // namespace tevem
