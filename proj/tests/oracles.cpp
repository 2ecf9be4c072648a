// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace tevem::testing {

void gauss_legendre_01(int g, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(g);
    weights.resize(g);
    for (int i = 0; i < g; ++i) {
        // Newton from the Chebyshev estimate on [-1,1].
        double x = std::cos(std::numbers::pi * (i + 0.75) / (g + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= g; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = g * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= g; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = g * (x * p1 - p0) / (x * x - 1.0);
        nodes[g - 1 - i] = 0.5 * (x + 1.0);
        weights[g - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

double integrate_polygon(std::span<const Point2> poly,
                         const std::function<double(Point2)>& f) {
    const Point2 c = polygon_centroid(poly);
    std::vector<double> gn, gw;
    gauss_legendre_01(8, gn, gw);
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t e = 0; e < n; ++e) {
        const Point2 a = poly[e];
        const Point2 b = poly[(e + 1) % n];
        const double area2 = (a - c).cross(b - c); // twice the triangle area
        // Duffy collapse of the unit square onto triangle (c, a, b).
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                const double u = gn[i], v = gn[j];
                const Point2 p = c + (a - c) * u + (b - a) * (u * v);
                total += gw[i] * gw[j] * area2 * u * f(p);
            }
        }
    }
    return total;
}

double oracle_monomial_integral(const CellGeometry& cell, int ax, int ay) {
    return integrate_polygon(cell.points, [&](Point2 p) {
        const double xi = (p.x - cell.centroid.x) / cell.diameter;
        const double eta = (p.y - cell.centroid.y) / cell.diameter;
        return std::pow(xi, ax) * std::pow(eta, ay);
    });
}

Eigen::MatrixXd oracle_mass_matrix(const CellGeometry& cell, int d) {
    const int size = (d + 1) * (d + 2) / 2;
    const ScaledMonomialBasis basis(cell, d);
    Eigen::MatrixXd m(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            m(i, j) = integrate_polygon(cell.points, [&](Point2 p) {
                return basis.value(i, p) * basis.value(j, p);
            });
    return m;
}

Eigen::VectorXd w_dofs_of_polynomial(const CellGeometry& cell,
                                     const Eigen::VectorXd& coeff) {
    const ScaledMonomialBasis basis(cell, 2);
    const int n = cell.num_vertices();
    Eigen::VectorXd dofs = Eigen::VectorXd::Zero(3 * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 6; ++k) {
            dofs[3 * i] += coeff[k] * basis.value(k, cell.points[i]);
            const Point2 g = basis.gradient(k, cell.points[i]);
            dofs[3 * i + 1] += coeff[k] * g.x;
            dofs[3 * i + 2] += coeff[k] * g.y;
        }
    return dofs;
}

Eigen::VectorXd v_dofs_of_polynomial(const CellGeometry& cell,
                                     const Eigen::Vector3d& coeff) {
    const ScaledMonomialBasis basis(cell, 1);
    const int n = cell.num_vertices();
    Eigen::VectorXd dofs = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 3; ++k) dofs[i] += coeff[k] * basis.value(k, cell.points[i]);
    return dofs;
}

namespace {

// Edge trace machinery: value trace is the Hermite cubic of the endpoint
// values and tangential derivatives, the normal derivative trace is the P1
// interpolant of the endpoint normal derivatives.
struct EdgeTrace {
    int a, b;
    double len;
    Point2 nu, tau;
};

EdgeTrace edge_trace(const CellGeometry& cell, int e) {
    const int n = cell.num_vertices();
    EdgeTrace t;
    t.a = e;
    t.b = (e + 1) % n;
    t.len = cell.edge_length[e];
    t.nu = cell.edge_normal[e];
    t.tau = (cell.points[t.b] - cell.points[t.a]) / t.len;
    return t;
}

// Weights of the W DOFs for the trace value at parameter u.
void trace_value_weights(const EdgeTrace& t, double u, Eigen::RowVectorXd& row,
                         double scale) {
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 1.0 - 3.0 * u2 + 2.0 * u3;
    const double h10 = u - 2.0 * u2 + u3;
    const double h01 = 3.0 * u2 - 2.0 * u3;
    const double h11 = u3 - u2;
    row[3 * t.a] += scale * h00;
    row[3 * t.a + 1] += scale * h10 * t.len * t.tau.x;
    row[3 * t.a + 2] += scale * h10 * t.len * t.tau.y;
    row[3 * t.b] += scale * h01;
    row[3 * t.b + 1] += scale * h11 * t.len * t.tau.x;
    row[3 * t.b + 2] += scale * h11 * t.len * t.tau.y;
}

// Weights for the tangential derivative of the trace at parameter u.
void trace_tangent_weights(const EdgeTrace& t, double u, Eigen::RowVectorXd& row,
                           double scale) {
    const double u2 = u * u;
    const double d00 = (-6.0 * u + 6.0 * u2) / t.len;
    const double d10 = 1.0 - 4.0 * u + 3.0 * u2;
    const double d01 = (6.0 * u - 6.0 * u2) / t.len;
    const double d11 = 3.0 * u2 - 2.0 * u;
    row[3 * t.a] += scale * d00;
    row[3 * t.a + 1] += scale * d10 * t.tau.x;
    row[3 * t.a + 2] += scale * d10 * t.tau.y;
    row[3 * t.b] += scale * d01;
    row[3 * t.b + 1] += scale * d11 * t.tau.x;
    row[3 * t.b + 2] += scale * d11 * t.tau.y;
}

void trace_normal_weights(const EdgeTrace& t, double u, Eigen::RowVectorXd& row,
                          double scale) {
    row[3 * t.a + 1] += scale * (1.0 - u) * t.nu.x;
    row[3 * t.a + 2] += scale * (1.0 - u) * t.nu.y;
    row[3 * t.b + 1] += scale * u * t.nu.x;
    row[3 * t.b + 2] += scale * u * t.nu.y;
}

} // namespace

Eigen::RowVectorXd hess_energy_row(const CellGeometry& cell, int k) {
    const int n = cell.num_vertices();
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(3 * n);
    const double inv_h2 = 1.0 / (cell.diameter * cell.diameter);
    Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
    if (k == 3) s(0, 0) = 2.0 * inv_h2;
    if (k == 4) s(0, 1) = s(1, 0) = inv_h2;
    if (k == 5) s(1, 1) = 2.0 * inv_h2;

    std::vector<double> gn, gw;
    gauss_legendre_01(10, gn, gw);
    for (int e = 0; e < n; ++e) {
        const EdgeTrace t = edge_trace(cell, e);
        const Eigen::Vector2d snu = s * Eigen::Vector2d(t.nu.x, t.nu.y);
        const double c_nu = snu.x() * t.nu.x + snu.y() * t.nu.y;
        const double c_tau = snu.x() * t.tau.x + snu.y() * t.tau.y;
        for (int q = 0; q < 10; ++q) {
            const double w = gw[q] * t.len;
            trace_normal_weights(t, gn[q], row, w * c_nu);
            trace_tangent_weights(t, gn[q], row, w * c_tau);
        }
    }
    return row;
}

Eigen::RowVectorXd grad_energy_row_p1(const CellGeometry& cell, int k) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 1);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    std::vector<double> gn, gw;
    gauss_legendre_01(10, gn, gw);
    for (int e = 0; e < n; ++e) {
        const EdgeTrace t = edge_trace(cell, e);
        const double flux = basis.gradient(k, cell.centroid).dot(t.nu);
        for (int q = 0; q < 10; ++q) {
            const double w = gw[q] * t.len * flux;
            row[t.a] += w * (1.0 - gn[q]);
            row[t.b] += w * gn[q];
        }
    }
    return row;
}

Eigen::MatrixXd oracle_hessian_projector(const CellGeometry& cell) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 2);
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(6, 6);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 3 * n);
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < n; ++i) {
            const double mk = basis.value(k, cell.points[i]);
            for (int j = 0; j < 6; ++j) sys(k, j) += mk * basis.value(j, cell.points[i]);
            rhs(k, 3 * i) += mk;
        }
    }
    for (int k = 3; k < 6; ++k) {
        for (int j = 0; j < 6; ++j)
            sys(k, j) = integrate_polygon(cell.points, [&](Point2) {
                // Hessians of scaled quadratics are constant.
                const auto hess = [&](int idx) {
                    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
                    const double inv = 1.0 / (cell.diameter * cell.diameter);
                    if (idx == 3) h(0, 0) = 2.0 * inv;
                    if (idx == 4) h(0, 1) = h(1, 0) = inv;
                    if (idx == 5) h(1, 1) = 2.0 * inv;
                    return h;
                };
                return (hess(k).array() * hess(j).array()).sum();
            });
        rhs.row(k) = hess_energy_row(cell, k);
    }
    return sys.fullPivLu().solve(rhs);
}

Eigen::MatrixXd oracle_grad_projector_p1(const CellGeometry& cell) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 1);
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(3, n);
    std::vector<double> gn, gw;
    gauss_legendre_01(10, gn, gw);
    for (int e = 0; e < n; ++e) {
        const EdgeTrace t = edge_trace(cell, e);
        for (int q = 0; q < 10; ++q) {
            const double w = gw[q] * t.len;
            const Point2 p = cell.points[t.a] + (cell.points[t.b] - cell.points[t.a]) * gn[q];
            for (int j = 0; j < 3; ++j) sys(0, j) += w * basis.value(j, p);
            rhs(0, t.a) += w * (1.0 - gn[q]);
            rhs(0, t.b) += w * gn[q];
        }
    }
    for (int k = 1; k < 3; ++k) {
        for (int j = 0; j < 3; ++j)
            sys(k, j) = integrate_polygon(cell.points, [&](Point2 p) {
                return basis.gradient(k, p).dot(basis.gradient(j, p));
            });
        rhs.row(k) = grad_energy_row_p1(cell, k);
    }
    return sys.fullPivLu().solve(rhs);
}

Eigen::MatrixXd oracle_grad_projector_p2(const CellGeometry& cell) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 2);
    const Eigen::MatrixXd moments = oracle_mass_matrix(cell, 2) * oracle_hessian_projector(cell);
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(6, 6);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 3 * n);
    for (int j = 0; j < 6; ++j)
        sys(0, j) = integrate_polygon(cell.points,
                                      [&](Point2 p) { return basis.value(j, p); });
    rhs.row(0) = moments.row(0);
    std::vector<double> gn, gw;
    gauss_legendre_01(10, gn, gw);
    for (int k = 1; k < 6; ++k) {
        for (int j = 0; j < 6; ++j)
            sys(k, j) = integrate_polygon(cell.points, [&](Point2 p) {
                return basis.gradient(k, p).dot(basis.gradient(j, p));
            });
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(3 * n);
        for (int e = 0; e < n; ++e) {
            const EdgeTrace t = edge_trace(cell, e);
            for (int q = 0; q < 10; ++q) {
                const Point2 p =
                    cell.points[t.a] + (cell.points[t.b] - cell.points[t.a]) * gn[q];
                trace_value_weights(t, gn[q], row,
                                    gw[q] * t.len * basis.gradient(k, p).dot(t.nu));
            }
        }
        rhs.row(k) = row - basis.laplacian(k) * moments.row(0);
    }
    return sys.fullPivLu().solve(rhs);
}

Eigen::MatrixXd oracle_laplacian_projector(const CellGeometry& cell) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis(cell, 2);
    const Eigen::MatrixXd moments = oracle_mass_matrix(cell, 2) * oracle_hessian_projector(cell);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 3 * n);
    std::vector<double> gn, gw;
    gauss_legendre_01(10, gn, gw);
    for (int k = 0; k < 6; ++k) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(3 * n);
        for (int e = 0; e < n; ++e) {
            const EdgeTrace t = edge_trace(cell, e);
            for (int q = 0; q < 10; ++q) {
                const Point2 p =
                    cell.points[t.a] + (cell.points[t.b] - cell.points[t.a]) * gn[q];
                trace_normal_weights(t, gn[q], row, gw[q] * t.len * basis.value(k, p));
                trace_value_weights(t, gn[q], row,
                                    -gw[q] * t.len * basis.gradient(k, p).dot(t.nu));
            }
        }
        rhs.row(k) = row + basis.laplacian(k) * moments.row(0);
    }
    return oracle_mass_matrix(cell, 2).llt().solve(rhs);
}

LocalStiffness oracle_local_stiffness(const CellGeometry& cell, double n_index,
                                      std::span<const double> vertex_h) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis2(cell, 2);
    const ScaledMonomialBasis basis1(cell, 1);
    const Eigen::MatrixXd pi2 = oracle_hessian_projector(cell);
    const Eigen::MatrixXd pi1 = oracle_grad_projector_p1(cell);

    LocalStiffness out;
    // Consistency by quadrature of the projected Hessians.
    Eigen::MatrixXd cons(3 * n, 3 * n);
    for (int i = 0; i < 3 * n; ++i)
        for (int j = 0; j < 3 * n; ++j) {
            double sum = 0.0;
            for (int a = 3; a < 6; ++a)
                for (int b = 3; b < 6; ++b) {
                    const double dd = (a == 4 && b == 4)   ? 2.0
                                      : (a == b)           ? 4.0
                                      : (a + b == 8 && a != 4) ? 0.0
                                                               : 0.0;
                    sum += pi2(a, i) * pi2(b, j) * dd * cell.area /
                           std::pow(cell.diameter, 4);
                }
            cons(i, j) = sum;
        }
    const double sigma = cons.trace() / 3.0;

    // Stabilization straight from the vertex formula applied to (I - Pi).
    const Eigen::MatrixXd dw = w_dof_matrix(cell);
    const Eigen::MatrixXd comp = Eigen::MatrixXd::Identity(3 * n, 3 * n) - dw * pi2;
    Eigen::MatrixXd stab = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int i = 0; i < 3 * n; ++i)
        for (int j = 0; j < 3 * n; ++j) {
            double sum = 0.0;
            for (int p = 0; p < n; ++p) {
                sum += comp(3 * p, i) * comp(3 * p, j);
                sum += vertex_h[p] * vertex_h[p] *
                       (comp(3 * p + 1, i) * comp(3 * p + 1, j) +
                        comp(3 * p + 2, i) * comp(3 * p + 2, j));
            }
            stab(i, j) = sum;
        }
    out.a_w = (cons + sigma * stab) / (n_index - 1.0);
    out.sigma = sigma / (n_index - 1.0);

    Eigen::MatrixXd cons1(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cons1(i, j) = integrate_polygon(cell.points, [&](Point2 p) {
                Point2 gi{0, 0}, gj{0, 0};
                for (int k = 0; k < 3; ++k) {
                    const Point2 g = basis1.gradient(k, p);
                    gi += g * pi1(k, i);
                    gj += g * pi1(k, j);
                }
                return gi.dot(gj);
            });
    const Eigen::MatrixXd dv = v_dof_matrix(cell);
    const Eigen::MatrixXd comp1 = Eigen::MatrixXd::Identity(n, n) - dv * pi1;
    out.a_v = cons1 + comp1.transpose() * comp1;
    return out;
}

LocalB oracle_local_b(const CellGeometry& cell, double n_index) {
    const int n = cell.num_vertices();
    const ScaledMonomialBasis basis2(cell, 2);
    const ScaledMonomialBasis basis1(cell, 1);
    const Eigen::MatrixXd pi2 = oracle_hessian_projector(cell);
    const Eigen::MatrixXd pi1 = oracle_grad_projector_p1(cell);
    const Eigen::MatrixXd pig2 = oracle_grad_projector_p2(cell);
    const Eigen::MatrixXd pil = oracle_laplacian_projector(cell);
    const double f = n_index / (n_index - 1.0);
    const double g = 1.0 / (n_index - 1.0);

    auto poly2 = [&](const Eigen::MatrixXd& coeffs, int col, Point2 p) {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) s += coeffs(k, col) * basis2.value(k, p);
        return s;
    };
    auto poly1 = [&](const Eigen::MatrixXd& coeffs, int col, Point2 p) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += coeffs(k, col) * basis1.value(k, p);
        return s;
    };

    LocalB out;
    out.uu.resize(3 * n, 3 * n);
    for (int i = 0; i < 3 * n; ++i)
        for (int j = 0; j < 3 * n; ++j)
            out.uu(i, j) = integrate_polygon(cell.points, [&](Point2 p) {
                return f * poly2(pil, j, p) * poly2(pi2, i, p) +
                       g * poly2(pi2, j, p) * poly2(pil, i, p);
            });
    out.uphi.resize(3 * n, n);
    for (int i = 0; i < 3 * n; ++i)
        for (int j = 0; j < n; ++j)
            out.uphi(i, j) = -integrate_polygon(cell.points, [&](Point2 p) {
                Point2 gphi{0, 0}, gv{0, 0};
                for (int k = 0; k < 3; ++k) gphi += basis1.gradient(k, p) * pi1(k, j);
                for (int k = 0; k < 6; ++k) gv += basis2.gradient(k, p) * pig2(k, i);
                return gphi.dot(gv);
            });
    out.psiu.resize(n, 3 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 3 * n; ++j)
            out.psiu(i, j) = integrate_polygon(cell.points, [&](Point2 p) {
                return f * poly2(pi2, j, p) * poly1(pi1, i, p);
            });
    return out;
}

std::vector<std::complex<double>> dense_pencil_eigenvalues(const EigenPencil& pencil,
                                                           int nev) {
    const Eigen::MatrixXd a = Eigen::MatrixXd(pencil.A);
    const Eigen::MatrixXd b = Eigen::MatrixXd(pencil.B);
    const Eigen::MatrixXd c = a.llt().solve(b);
    Eigen::EigenSolver<Eigen::MatrixXd> es(c);
    std::vector<std::complex<double>> lambdas;
    double mu_max = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        mu_max = std::max(mu_max, std::abs(es.eigenvalues()[i]));
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const std::complex<double> mu = es.eigenvalues()[i];
        if (std::abs(mu) > 1e-10 * mu_max) lambdas.push_back(1.0 / mu);
    }
    std::sort(lambdas.begin(), lambdas.end(),
              [](std::complex<double> x, std::complex<double> y) {
                  if (std::abs(std::abs(x) - std::abs(y)) > 1e-12 * (1.0 + std::abs(x)))
                      return std::abs(x) < std::abs(y);
                  return x.imag() < y.imag();
              });
    if (static_cast<int>(lambdas.size()) > nev) lambdas.resize(nev);
    return lambdas;
}

std::vector<Point2> random_convex_polygon(Rng64& rng, double scale) {
    // Points on a circle with jittered angles and radii, convexified by a
    // monotone-chain hull.
    const int n = 4 + static_cast<int>(rng.next() % 5);
    std::vector<Point2> pts;
    for (int i = 0; i < 2 * n; ++i) {
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double radius = scale * rng.uniform(0.6, 1.0);
        pts.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    }
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    auto build = [&](bool upper) {
        std::vector<Point2> chain;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Point2 p = upper ? pts[pts.size() - 1 - i] : pts[i];
            while (chain.size() >= 2 &&
                   (chain.back() - chain[chain.size() - 2])
                           .cross(p - chain.back()) <= 1e-12 * scale * scale)
                chain.pop_back();
            chain.push_back(p);
        }
        return chain;
    };
    std::vector<Point2> hull = build(false);
    const std::vector<Point2> upper = build(true);
    hull.insert(hull.end(), upper.begin() + 1, upper.end() - 1);
    // Random offset so cells are not centered at the origin.
    const Point2 shift{rng.uniform(-2.0, 2.0) * scale, rng.uniform(-2.0, 2.0) * scale};
    for (Point2& p : hull) p += shift;
    return hull;
}

std::vector<Point2> random_star_polygon(Rng64& rng, double scale) {
    const int n = 5 + static_cast<int>(rng.next() % 6);
    std::vector<Point2> poly;
    for (int i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * (i + 0.4 * rng.uniform()) / n;
        const double radius = scale * rng.uniform(0.55, 1.0);
        poly.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    }
    const Point2 shift{rng.uniform(-2.0, 2.0) * scale, rng.uniform(-2.0, 2.0) * scale};
    for (Point2& p : poly) p += shift;
    return poly;
}

} // namespace tevem::testing
