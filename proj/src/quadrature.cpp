// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "tevem/quadrature.hpp"

#include "tevem/errors.hpp"

namespace tevem {

std::pair<int, int> ScaledMonomialBasis::exponents(int k) {
    int d = 0;
    while ((d + 1) * (d + 2) / 2 <= k) ++d;
    const int ay = k - d * (d + 1) / 2;
    return {d - ay, ay};
}

double ScaledMonomialBasis::value(int k, Point2 p) const {
    const auto [ax, ay] = exponents(k);
    const double xi = (p.x - center.x) / h;
    const double eta = (p.y - center.y) / h;
    return std::pow(xi, ax) * std::pow(eta, ay);
}

Point2 ScaledMonomialBasis::gradient(int k, Point2 p) const {
    const auto [ax, ay] = exponents(k);
    const double xi = (p.x - center.x) / h;
    const double eta = (p.y - center.y) / h;
    Point2 g{0.0, 0.0};
    if (ax > 0) g.x = ax * std::pow(xi, ax - 1) * std::pow(eta, ay) / h;
    if (ay > 0) g.y = ay * std::pow(xi, ax) * std::pow(eta, ay - 1) / h;
    return g;
}

double ScaledMonomialBasis::laplacian(int k) const {
    // Constant for quadratic monomials, zero below.
    const auto [ax, ay] = exponents(k);
    double v = 0.0;
    if (ax == 2 && ay == 0) v = 2.0;
    if (ax == 0 && ay == 2) v = 2.0;
    return v / (h * h);
}

EdgeRule edge_gauss(int g) {
    if (g < 1 || g > 5) throw ConfigError("edge rule order must be in [1,5]");
    // Nodes/weights on [-1,1], mapped to [0,1].
    static const std::vector<std::vector<double>> nodes = {
        {0.0},
        {-0.5773502691896257645091488, 0.5773502691896257645091488},
        {-0.7745966692414833770358531, 0.0, 0.7745966692414833770358531},
        {-0.8611363115940525752239465, -0.3399810435848562648026658,
         0.3399810435848562648026658, 0.8611363115940525752239465},
        {-0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
         0.5384693101056830910363144, 0.9061798459386639927976269}};
    static const std::vector<std::vector<double>> weights = {
        {2.0},
        {1.0, 1.0},
        {0.5555555555555555555555556, 0.8888888888888888888888889,
         0.5555555555555555555555556},
        {0.3478548451374538573730639, 0.6521451548625461426269361,
         0.6521451548625461426269361, 0.3478548451374538573730639},
        {0.2369268850561890875142640, 0.4786286704993664680412915,
         0.5688888888888888888888889, 0.4786286704993664680412915,
         0.2369268850561890875142640}};
    EdgeRule rule;
    for (int i = 0; i < g; ++i) {
        rule.nodes.push_back(0.5 * (nodes[g - 1][i] + 1.0));
        rule.weights.push_back(0.5 * weights[g - 1][i]);
    }
    return rule;
}

double integrate_monomial(const CellGeometry& cell, int ax, int ay) {
    // div((x - x_K) m_a) = (2 + |a|) m_a and (x - x_K) . nu is constant on each
    // straight edge, so the area integral reduces to edge integrals of m_a.
    if (ax < 0 || ay < 0 || ax + ay > 4)
        throw ConfigError("monomial integration supports total degree <= 4");
    const ScaledMonomialBasis basis(cell, 2);
    const int k = ScaledMonomialBasis::index(ax, ay);
    const EdgeRule rule = edge_gauss(3); // exact to degree 5
    const int n = cell.num_vertices();
    double sum = 0.0;
    for (int e = 0; e < n; ++e) {
        const Point2 a = cell.points[e];
        const Point2 b = cell.points[(e + 1) % n];
        const double dist = cell.edge_normal[e].dot(a - cell.centroid);
        double edge_integral = 0.0;
        for (int q = 0; q < rule.size(); ++q)
            edge_integral += rule.weight(q, cell.edge_length[e]) *
                             basis.value(k, rule.point(q, a, b));
        sum += dist * edge_integral;
    }
    return sum / (2.0 + ax + ay);
}

Eigen::VectorXd monomial_integrals(const CellGeometry& cell, int max_degree) {
    const int size = (max_degree + 1) * (max_degree + 2) / 2;
    Eigen::VectorXd ints(size);
    for (int k = 0; k < size; ++k) {
        const auto [ax, ay] = ScaledMonomialBasis::exponents(k);
        ints[k] = integrate_monomial(cell, ax, ay);
    }
    return ints;
}

Eigen::MatrixXd mass_matrix_rect(const CellGeometry& cell, int d_row, int d_col) {
    const Eigen::VectorXd ints = monomial_integrals(cell, d_row + d_col);
    const int rows = (d_row + 1) * (d_row + 2) / 2;
    const int cols = (d_col + 1) * (d_col + 2) / 2;
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto [ax, ay] = ScaledMonomialBasis::exponents(i);
        for (int j = 0; j < cols; ++j) {
            const auto [bx, by] = ScaledMonomialBasis::exponents(j);
            m(i, j) = ints[ScaledMonomialBasis::index(ax + bx, ay + by)];
        }
    }
    return m;
}

Eigen::MatrixXd mass_matrix(const CellGeometry& cell, int d) {
    if (d != 1 && d != 2) throw ConfigError("mass matrix degree must be 1 or 2");
    // Entry (i,j) and (j,i) read the same integral table entry, so the result
    // is exactly symmetric.
    return mass_matrix_rect(cell, d, d);
}

Eigen::MatrixXd stiffness_matrix(const CellGeometry& cell, int d_row, int d_col) {
    const int rows = (d_row + 1) * (d_row + 2) / 2;
    const int cols = (d_col + 1) * (d_col + 2) / 2;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
    // grad m_(ax,ay) = (ax m_(ax-1,ay), ay m_(ax,ay-1)) / h; products are again
    // scaled monomials, so the entries come from exact monomial integrals.
    const Eigen::VectorXd ints = monomial_integrals(cell, std::max(0, d_row + d_col - 2));
    const double inv_h2 = 1.0 / (cell.diameter * cell.diameter);
    for (int i = 0; i < rows; ++i) {
        const auto [ax, ay] = ScaledMonomialBasis::exponents(i);
        for (int j = 0; j < cols; ++j) {
            const auto [bx, by] = ScaledMonomialBasis::exponents(j);
            double v = 0.0;
            if (ax > 0 && bx > 0)
                v += ax * bx * ints[ScaledMonomialBasis::index(ax + bx - 2, ay + by)];
            if (ay > 0 && by > 0)
                v += ay * by * ints[ScaledMonomialBasis::index(ax + bx, ay + by - 2)];
            m(i, j) = v * inv_h2;
        }
    }
    return m;
}

Eigen::MatrixXd hessian_gram_matrix(const CellGeometry& cell) {
    // D^2 m is constant for quadratic monomials: the only nonzero entries are
    // the |a| = |b| = 2 block.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    const double h2 = cell.diameter * cell.diameter;
    const double scale = cell.area / (h2 * h2);
    m(3, 3) = 4.0 * scale;
    m(4, 4) = 2.0 * scale;
    m(5, 5) = 4.0 * scale;
    return m;
}

} // namespace tevem
