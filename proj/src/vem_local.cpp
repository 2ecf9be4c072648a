// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "tevem/vem_local.hpp"

#include <numeric>

#include "tevem/errors.hpp"

namespace tevem {

namespace {

// Exact symmetry, not just up to gemm rounding.
void force_symmetric(Eigen::MatrixXd& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

// Constant Hessian of the quadratic scaled monomials, index k in {3,4,5}.
Eigen::Matrix2d monomial_hessian(int k, double h) {
    Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
    const double inv_h2 = 1.0 / (h * h);
    if (k == 3) s(0, 0) = 2.0 * inv_h2;
    if (k == 4) s(0, 1) = s(1, 0) = inv_h2;
    if (k == 5) s(1, 1) = 2.0 * inv_h2;
    return s;
}

// Cubic Hermite shape values at parameter u in [0,1]; derivative DOFs are
// scaled by the edge length by the caller.
struct Hermite {
    double v_a, d_a, v_b, d_b;
};
Hermite hermite(double u) {
    const double u2 = u * u, u3 = u2 * u;
    return {1.0 - 3.0 * u2 + 2.0 * u3, u - 2.0 * u2 + u3, 3.0 * u2 - 2.0 * u3,
            u3 - u2};
}

} // namespace

Eigen::MatrixXd w_dof_matrix(const CellGeometry& cell) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 2);
    Eigen::MatrixXd d(3 * n, 6);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 6; ++k) {
            d(LocalDofLayout::w_value(i), k) = basis.value(k, cell.points[i]);
            const Point2 g = basis.gradient(k, cell.points[i]);
            d(LocalDofLayout::w_dx(i), k) = g.x;
            d(LocalDofLayout::w_dy(i), k) = g.y;
        }
    }
    return d;
}

Eigen::MatrixXd v_dof_matrix(const CellGeometry& cell) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 1);
    Eigen::MatrixXd d(n, 3);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 3; ++k) d(i, k) = basis.value(k, cell.points[i]);
    return d;
}

Eigen::MatrixXd hessian_projector(const CellGeometry& cell, double closure_weight) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 2);
    const double cw = closure_weight > 0.0 ? closure_weight : 1.0 / n;

    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(6, 6);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 3 * n);

    // Rows 0..2: vertex-sum pairing against P1 fixes the kernel of the
    // Hessian form.
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < n; ++i) {
            const double mk = basis.value(k, cell.points[i]);
            for (int j = 0; j < 6; ++j)
                sys(k, j) += cw * mk * basis.value(j, cell.points[i]);
            rhs(k, LocalDofLayout::w_value(i)) += cw * mk;
        }
    }

    // Rows 3..5: int_K D^2 v : D^2 m_k. D^2 m_k is constant, so the integral
    // reduces to edge terms: the tangential part telescopes to endpoint value
    // differences and the normal part is the trapezoid of the endpoint normal
    // derivatives (exact, the normal trace is P1).
    sys.block(3, 0, 3, 6) = hessian_gram_matrix(cell).block(3, 0, 3, 6);
    for (int k = 3; k < 6; ++k) {
        const Eigen::Matrix2d s = monomial_hessian(k, cell.diameter);
        for (int e = 0; e < n; ++e) {
            const int a = e, b = (e + 1) % n;
            const double len = cell.edge_length[e];
            const Point2 nu = cell.edge_normal[e];
            const Point2 tau{-nu.y, nu.x}; // unit tangent along the edge
            const Eigen::Vector2d snu = s * Eigen::Vector2d(nu.x, nu.y);
            const double c_nu = snu.x() * nu.x + snu.y() * nu.y;
            const double c_tau = snu.x() * tau.x + snu.y() * tau.y;
            rhs(k, LocalDofLayout::w_value(b)) += c_tau;
            rhs(k, LocalDofLayout::w_value(a)) -= c_tau;
            for (int end : {a, b}) {
                rhs(k, LocalDofLayout::w_dx(end)) += c_nu * nu.x * len * 0.5;
                rhs(k, LocalDofLayout::w_dy(end)) += c_nu * nu.y * len * 0.5;
            }
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
    if (std::abs(lu.determinant()) < 1e-300)
        throw MeshError("singular projector system (degenerate cell)");
    return lu.solve(rhs);
}

Eigen::MatrixXd grad_projector_p1(const CellGeometry& cell) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 1);
    const double perimeter =
        std::accumulate(cell.edge_length.begin(), cell.edge_length.end(), 0.0);
    const double cw = 1.0 / perimeter;

    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(3, n);

    // Row 0: boundary mean. The trace is piecewise P1, so edge trapezoids are
    // exact.
    for (int e = 0; e < n; ++e) {
        const int a = e, b = (e + 1) % n;
        const double half = 0.5 * cell.edge_length[e] * cw;
        for (int j = 0; j < 3; ++j)
            sys(0, j) += half * (basis.value(j, cell.points[a]) +
                                 basis.value(j, cell.points[b]));
        rhs(0, a) += half;
        rhs(0, b) += half;
    }

    // Rows 1..2: int_K grad psi . grad m_k = sum_e (grad m_k . nu_e) int_e psi
    // (m_k is harmonic).
    sys.block(1, 0, 2, 3) = stiffness_matrix(cell, 1, 1).block(1, 0, 2, 3);
    for (int k = 1; k < 3; ++k) {
        for (int e = 0; e < n; ++e) {
            const int a = e, b = (e + 1) % n;
            const Point2 g = basis.gradient(k, cell.centroid); // constant
            const double flux = g.dot(cell.edge_normal[e]) * cell.edge_length[e] * 0.5;
            rhs(k, a) += flux;
            rhs(k, b) += flux;
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
    if (std::abs(lu.determinant()) < 1e-300)
        throw MeshError("singular projector system (degenerate cell)");
    return lu.solve(rhs);
}

MomentSupply enhancement_moments(const CellGeometry& cell,
                                 const Eigen::MatrixXd& pi_hess,
                                 const Eigen::MatrixXd& pi_grad1) {
    MomentSupply m;
    m.w = mass_matrix(cell, 2) * pi_hess;
    m.v = mass_matrix(cell, 1) * pi_grad1;
    return m;
}

Eigen::MatrixXd grad_projector_p2(const CellGeometry& cell, const MomentSupply& moments) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 2);
    const EdgeRule rule = edge_gauss(3);

    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(6, 6);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 3 * n);

    // Row 0: cell mean, from the supplied internal moments.
    const double cw = 1.0 / cell.area;
    sys.row(0) = cw * monomial_integrals(cell, 2).transpose();
    rhs.row(0) = cw * moments.w.row(0);

    // Rows 1..5: int_K grad w . grad m_k = -lap(m_k) int_K w
    //            + sum_e int_e trace(w) dnu m_k; traces are cubic Hermite.
    sys.block(1, 0, 5, 6) = stiffness_matrix(cell, 2, 2).block(1, 0, 5, 6);
    for (int k = 1; k < 6; ++k) {
        rhs.row(k) -= basis.laplacian(k) * moments.w.row(0);
        for (int e = 0; e < n; ++e) {
            const int a = e, b = (e + 1) % n;
            const double len = cell.edge_length[e];
            const Point2 nu = cell.edge_normal[e];
            const Point2 tau = (cell.points[b] - cell.points[a]) / len;
            for (int q = 0; q < rule.size(); ++q) {
                const Point2 x = rule.point(q, cell.points[a], cell.points[b]);
                const double w = rule.weight(q, len) * basis.gradient(k, x).dot(nu);
                const Hermite hm = hermite(rule.nodes[q]);
                rhs(k, LocalDofLayout::w_value(a)) += w * hm.v_a;
                rhs(k, LocalDofLayout::w_dx(a)) += w * hm.d_a * len * tau.x;
                rhs(k, LocalDofLayout::w_dy(a)) += w * hm.d_a * len * tau.y;
                rhs(k, LocalDofLayout::w_value(b)) += w * hm.v_b;
                rhs(k, LocalDofLayout::w_dx(b)) += w * hm.d_b * len * tau.x;
                rhs(k, LocalDofLayout::w_dy(b)) += w * hm.d_b * len * tau.y;
            }
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
    if (std::abs(lu.determinant()) < 1e-300)
        throw MeshError("singular projector system (degenerate cell)");
    return lu.solve(rhs);
}

Eigen::MatrixXd laplacian_l2_projector(const CellGeometry& cell,
                                       const MomentSupply& moments) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 2);
    const EdgeRule rule = edge_gauss(3);

    // int_K (lap v) m_k = int_e (dnu v) m_k - int_e v (dnu m_k) + lap(m_k) int_K v.
    // All three pieces are DOF data: the normal trace is P1, the trace is the
    // Hermite cubic, the moment comes from the enhancement.
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 3 * n);
    for (int k = 0; k < 6; ++k) {
        rhs.row(k) += basis.laplacian(k) * moments.w.row(0);
        for (int e = 0; e < n; ++e) {
            const int a = e, b = (e + 1) % n;
            const double len = cell.edge_length[e];
            const Point2 nu = cell.edge_normal[e];
            const Point2 tau = (cell.points[b] - cell.points[a]) / len;
            for (int q = 0; q < rule.size(); ++q) {
                const double u = rule.nodes[q];
                const Point2 x = rule.point(q, cell.points[a], cell.points[b]);
                const double wq = rule.weight(q, len);
                const double mk = basis.value(k, x);
                rhs(k, LocalDofLayout::w_dx(a)) += wq * mk * (1.0 - u) * nu.x;
                rhs(k, LocalDofLayout::w_dy(a)) += wq * mk * (1.0 - u) * nu.y;
                rhs(k, LocalDofLayout::w_dx(b)) += wq * mk * u * nu.x;
                rhs(k, LocalDofLayout::w_dy(b)) += wq * mk * u * nu.y;
                const double wn = wq * basis.gradient(k, x).dot(nu);
                const Hermite hm = hermite(u);
                rhs(k, LocalDofLayout::w_value(a)) -= wn * hm.v_a;
                rhs(k, LocalDofLayout::w_dx(a)) -= wn * hm.d_a * len * tau.x;
                rhs(k, LocalDofLayout::w_dy(a)) -= wn * hm.d_a * len * tau.y;
                rhs(k, LocalDofLayout::w_value(b)) -= wn * hm.v_b;
                rhs(k, LocalDofLayout::w_dx(b)) -= wn * hm.d_b * len * tau.x;
                rhs(k, LocalDofLayout::w_dy(b)) -= wn * hm.d_b * len * tau.y;
            }
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(mass_matrix(cell, 2));
    if (llt.info() != Eigen::Success)
        throw MeshError("P2 mass matrix is not positive definite (degenerate cell)");
    return llt.solve(rhs);
}

bool l2_projectors_identity_check(const CellGeometry& cell,
                                  const MomentSupply& moments, double tol) {
    const Eigen::MatrixXd pi_hess = hessian_projector(cell);
    const Eigen::MatrixXd pi_grad1 = grad_projector_p1(cell);
    const Eigen::MatrixXd l2_w = Eigen::LLT<Eigen::MatrixXd>(mass_matrix(cell, 2))
                                     .solve(moments.w);
    const Eigen::MatrixXd l2_v = Eigen::LLT<Eigen::MatrixXd>(mass_matrix(cell, 1))
                                     .solve(moments.v);
    const double err_w = (l2_w - pi_hess).cwiseAbs().maxCoeff() /
                         std::max(1.0, pi_hess.cwiseAbs().maxCoeff());
    const double err_v = (l2_v - pi_grad1).cwiseAbs().maxCoeff() /
                         std::max(1.0, pi_grad1.cwiseAbs().maxCoeff());
    return err_w <= tol && err_v <= tol;
}

LocalStiffness local_stiffness(const CellGeometry& cell, double n_index,
                               std::span<const double> vertex_h,
                               const Eigen::MatrixXd& pi_hess,
                               const Eigen::MatrixXd& pi_grad1) {
    if (!(n_index > 1.0))
        throw ConfigError("index of refraction must exceed 1 (form loses ellipticity)");
    const int n = cell.num_vertices();
    if (static_cast<int>(vertex_h.size()) != n)
        throw ConfigError("vertex_h size does not match the cell");

    LocalStiffness out;
    const double inv = 1.0 / (n_index - 1.0);

    // W block: consistency plus the vertex-value / scaled-gradient
    // stabilization on the projector complement.
    const Eigen::MatrixXd consistency =
        pi_hess.transpose() * hessian_gram_matrix(cell) * pi_hess;
    // Mean of the nonzero eigenvalues of the consistency matrix (rank 3), so
    // the vertex stabilization carries the same scale as the resolved Hessian
    // energy on every cell shape.
    const double sigma_raw = consistency.trace() / 3.0;
    Eigen::MatrixXd complement =
        Eigen::MatrixXd::Identity(3 * n, 3 * n) - w_dof_matrix(cell) * pi_hess;
    Eigen::VectorXd weights(3 * n);
    for (int i = 0; i < n; ++i) {
        weights(LocalDofLayout::w_value(i)) = 1.0;
        weights(LocalDofLayout::w_dx(i)) = vertex_h[i] * vertex_h[i];
        weights(LocalDofLayout::w_dy(i)) = vertex_h[i] * vertex_h[i];
    }
    out.a_w = inv * (consistency + sigma_raw * complement.transpose() *
                                       weights.asDiagonal() * complement);
    force_symmetric(out.a_w);
    out.sigma = inv * sigma_raw;

    // V block: consistency plus the identity on the complement.
    const Eigen::MatrixXd c1 =
        pi_grad1.transpose() * stiffness_matrix(cell, 1, 1) * pi_grad1;
    const Eigen::MatrixXd p1 =
        Eigen::MatrixXd::Identity(n, n) - v_dof_matrix(cell) * pi_grad1;
    out.a_v = c1 + p1.transpose() * p1;
    force_symmetric(out.a_v);
    return out;
}

LocalB local_b(const CellGeometry& cell, double n_index,
               const Eigen::MatrixXd& pi_hess, const Eigen::MatrixXd& pi_grad1,
               const Eigen::MatrixXd& pi_grad2, const Eigen::MatrixXd& pi_lap) {
    if (!(n_index > 1.0))
        throw ConfigError("index of refraction must exceed 1 (form loses ellipticity)");
    const double f = n_index / (n_index - 1.0);
    const double g = 1.0 / (n_index - 1.0);
    const Eigen::MatrixXd m22 = mass_matrix(cell, 2);
    const Eigen::MatrixXd m21 = mass_matrix_rect(cell, 2, 1);
    const Eigen::MatrixXd h21 = stiffness_matrix(cell, 2, 1);

    LocalB out;
    out.uu = f * pi_hess.transpose() * m22 * pi_lap +
             g * pi_lap.transpose() * m22 * pi_hess;
    out.uphi = -pi_grad2.transpose() * h21 * pi_grad1;
    out.psiu = f * pi_grad1.transpose() * m21.transpose() * pi_hess;
    return out;
}

ElementOperators element_operators(const CellGeometry& cell, double n_index,
                                   std::span<const double> vertex_h) {
    ElementOperators ops;
    ops.n_vertices = cell.num_vertices();
    ops.pi_hess = hessian_projector(cell);
    ops.pi_grad1 = grad_projector_p1(cell);
    const MomentSupply moments = enhancement_moments(cell, ops.pi_hess, ops.pi_grad1);
    ops.pi_grad2 = grad_projector_p2(cell, moments);
    ops.pi_lap = laplacian_l2_projector(cell, moments);
    LocalStiffness stiff =
        local_stiffness(cell, n_index, vertex_h, ops.pi_hess, ops.pi_grad1);
    ops.sigma = stiff.sigma;
    ops.a_w = std::move(stiff.a_w);
    ops.a_v = std::move(stiff.a_v);
    LocalB b = local_b(cell, n_index, ops.pi_hess, ops.pi_grad1, ops.pi_grad2,
                       ops.pi_lap);
    ops.b_uu = std::move(b.uu);
    ops.b_uphi = std::move(b.uphi);
    ops.b_psiu = std::move(b.psiu);
    return ops;
}

} // namespace tevem
