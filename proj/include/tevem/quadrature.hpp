// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "tevem/mesh.hpp"

namespace tevem {

// Scaled monomials m_a(x) = ((x - x_K)/h_K)^a on a cell, ordered
// 1, xi, eta, xi^2, xi*eta, eta^2, ... by total degree then descending x power.
// Index <-> multi-index: a = (ax, ay), index = (ax+ay)(ax+ay+1)/2 + ay.
struct ScaledMonomialBasis {
    Point2 center;
    double h = 1.0;
    int degree = 2;

    ScaledMonomialBasis() = default;
    ScaledMonomialBasis(const CellGeometry& cell, int degree_)
        : center(cell.centroid), h(cell.diameter), degree(degree_) {}

    int size() const { return (degree + 1) * (degree + 2) / 2; }

    static int index(int ax, int ay) { return (ax + ay) * (ax + ay + 1) / 2 + ay; }
    static std::pair<int, int> exponents(int k);

    double value(int k, Point2 p) const;
    Point2 gradient(int k, Point2 p) const;
    double laplacian(int k) const; // constant for degree <= 2
};

// Gauss-Legendre rule on a segment; exact for 1D polynomials of degree 2g-1.
struct EdgeRule {
    std::vector<double> nodes;   // on [0, 1]
    std::vector<double> weights; // sum to 1 on the reference segment

    int size() const { return static_cast<int>(nodes.size()); }
    Point2 point(int i, Point2 a, Point2 b) const {
        return a + (b - a) * nodes[i];
    }
    double weight(int i, double edge_length) const { return weights[i] * edge_length; }
};

// 1 <= g <= 5.
EdgeRule edge_gauss(int g);

// Exact integral of the scaled monomial m_(ax,ay), |a| <= 4, over the polygon,
// by reduction to boundary integrals (divergence theorem; exact on straight
// edges).
double integrate_monomial(const CellGeometry& cell, int ax, int ay);

// All integrals up to total degree `max_degree` (<= 4), indexed as the basis.
Eigen::VectorXd monomial_integrals(const CellGeometry& cell, int max_degree);

// Gram matrix \int_K m_a m_b for |a|,|b| <= d, d in {1,2}. SPD.
Eigen::MatrixXd mass_matrix(const CellGeometry& cell, int d);

// Rectangular mass block \int_K m_a m_b, |a| <= d_row, |b| <= d_col.
Eigen::MatrixXd mass_matrix_rect(const CellGeometry& cell, int d_row, int d_col);

// Gradient Gram matrix \int_K grad m_a . grad m_b, |a| <= d_row, |b| <= d_col.
Eigen::MatrixXd stiffness_matrix(const CellGeometry& cell, int d_row, int d_col);

// Hessian Gram matrix \int_K D^2 m_a : D^2 m_b for |a|,|b| <= 2 (6x6,
// nonzero only on the quadratic block).
Eigen::MatrixXd hessian_gram_matrix(const CellGeometry& cell);

} // namespace tevem
