// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "tevem/eigensolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <functional>
#include <sstream>
#include <type_traits>

#include "tevem/errors.hpp"
#include "tevem/geometry.hpp"

namespace tevem {

namespace {

using Complex = std::complex<double>;

double one_norm(const Eigen::SparseMatrix<double>& m) {
    double best = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        double col = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

Eigen::VectorXcd sparse_apply(const Eigen::SparseMatrix<double>& m,
                              const Eigen::VectorXcd& x) {
    return m * x.real() + Complex(0.0, 1.0) * (m * x.imag());
}

double pencil_residual(const EigenPencil& pencil, Complex lambda,
                       const Eigen::VectorXcd& x) {
    const Eigen::VectorXcd r = sparse_apply(pencil.A, x) - lambda * sparse_apply(pencil.B, x);
    return r.norm() / x.norm();
}

// Deterministic phase: largest-magnitude component made real positive.
void fix_phase(Eigen::VectorXcd& x) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > best) { best = std::abs(x[i]); imax = i; }
    if (best > 0.0) x *= std::conj(x[imax]) / std::abs(x[imax]);
    x.normalize();
}

bool k_order(const EigenPair& a, const EigenPair& b) {
    const double ma = std::abs(a.k), mb = std::abs(b.k);
    if (std::abs(ma - mb) > 1e-12 * (1.0 + ma)) return ma < mb;
    return a.k.imag() < b.k.imag();
}

// Arnoldi with prefix locking on the operator op (real or complex arithmetic).
// Converged eigenpairs are locked in order of decreasing |theta| and deflated
// from subsequent restarts, which lets repeated eigenvalues emerge one copy at
// a time. `to_lambda` maps a Ritz value of op to a pencil eigenvalue.
template <typename Scalar>
std::vector<EigenPair> arnoldi_locked(
    const EigenPencil& pencil,
    const std::function<Eigen::VectorX<Scalar>(const Eigen::VectorX<Scalar>&)>& op,
    const std::function<Complex(Complex)>& to_lambda, int nev, int m, double tol,
    int max_restarts, double norm_scale_a, double norm_scale_b) {
    using Vector = Eigen::VectorX<Scalar>;
    using Matrix = Eigen::MatrixX<Scalar>;
    constexpr bool is_real = std::is_same_v<Scalar, double>;

    const int n = static_cast<int>(pencil.A.rows());
    m = std::min(m, n);

    std::vector<EigenPair> locked;
    Matrix q_locked(n, 0);     // orthonormal basis of the locked subspace
    Eigen::MatrixXcd t_locked(0, 0); // Q^H C Q

    auto op_complex = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        if constexpr (is_real) {
            return op(x.real()) + Complex(0.0, 1.0) * op(x.imag());
        } else {
            return op(x);
        }
    };

    Rng64 rng(0x7e5e);
    auto random_vector = [&] {
        Vector v(n);
        for (int i = 0; i < n; ++i) {
            if constexpr (is_real)
                v[i] = rng.uniform(-1.0, 1.0);
            else
                v[i] = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        }
        return v;
    };

    Vector start = random_vector();
    double worst_pending = 0.0;

    for (int restart = 0; restart <= max_restarts; ++restart) {
        const int q = static_cast<int>(q_locked.cols());
        if (static_cast<int>(locked.size()) >= nev) break;
        const int m_cur = std::min(m, n - q);
        if (m_cur < 1)
            throw SolverError("deflated subspace exhausted the pencil dimension");

        // Arnoldi factorization of the deflated operator (I - QQ^H) op.
        Matrix v(n, m_cur + 1);
        Matrix h = Matrix::Zero(m_cur + 1, m_cur);
        Vector w = start;
        if (q > 0) w -= q_locked * (q_locked.adjoint() * w);
        if (w.norm() < 1e-14) {
            w = random_vector();
            if (q > 0) w -= q_locked * (q_locked.adjoint() * w);
        }
        v.col(0) = w / w.norm();
        int m_eff = m_cur;
        for (int j = 0; j < m_cur; ++j) {
            w = op(v.col(j));
            if (q > 0) w -= q_locked * (q_locked.adjoint() * w);
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) {
                    const Scalar c = v.col(i).dot(w);
                    h(i, j) += c;
                    w -= c * v.col(i);
                }
            }
            const double nw = w.norm();
            h(j + 1, j) = nw;
            if (nw < 1e-13 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
                m_eff = j + 1; // invariant subspace: Ritz values are exact
                break;
            }
            v.col(j + 1) = w / nw;
        }

        // Ritz extraction from the square Hessenberg block.
        Eigen::MatrixXcd ritz_vectors;
        Eigen::VectorXcd ritz_values;
        if constexpr (is_real) {
            Eigen::EigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(m_eff, m_eff));
            if (es.info() != Eigen::Success)
                throw SolverError("Hessenberg eigendecomposition failed");
            ritz_values = es.eigenvalues();
            ritz_vectors = es.eigenvectors();
        } else {
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h.topLeftCorner(m_eff, m_eff));
            if (es.info() != Eigen::Success)
                throw SolverError("Hessenberg eigendecomposition failed");
            ritz_values = es.eigenvalues();
            ritz_vectors = es.eigenvectors();
        }

        std::vector<int> order(m_eff);
        for (int i = 0; i < m_eff; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(ritz_values[a]) > std::abs(ritz_values[b]);
        });

        const double theta_max = std::abs(ritz_values[order[0]]);
        if (theta_max < 1e-290)
            throw SolverError("operator A^{-1} B is numerically zero (B == 0?)");

        // Prefix locking: walk the Ritz values from dominant down, lock while
        // converged, stop at the first failure so the locked set is always a
        // prefix of the spectrum sorted by |lambda|. The Krylov basis was
        // deflated against the sweep-start locked space, so every candidate of
        // this sweep corrects through that snapshot, not the growing one.
        const Eigen::MatrixXcd q_sweep = q_locked.template cast<Complex>();
        const Eigen::MatrixXcd t_sweep = t_locked;
        Vector enrich = Vector::Zero(n);
        bool hit_unconverged = false;
        worst_pending = 0.0;
        for (int rank = 0; rank < m_eff && !hit_unconverged; ++rank) {
            if (static_cast<int>(locked.size()) >= nev) break;
            const Complex theta = ritz_values[order[rank]];
            if (std::abs(theta) < 1e-10 * theta_max) break; // null modes of B

            // Conjugate pairs converge together in the real path; gather the
            // group of indices sharing this theta up to conjugation.
            std::vector<int> group{order[rank]};
            if (is_real && std::abs(theta.imag()) > 0.0 && rank + 1 < m_eff) {
                const Complex next = ritz_values[order[rank + 1]];
                if (std::abs(next - std::conj(theta)) <=
                    1e-10 * std::abs(theta)) {
                    group.push_back(order[rank + 1]);
                    ++rank;
                }
            }

            struct Candidate {
                Complex lambda;
                Eigen::VectorXcd x;
                double residual;
            };
            std::vector<Candidate> cands;
            bool group_ok = true;
            for (int idx : group) {
                const Complex th = ritz_values[idx];
                Eigen::VectorXcd xt;
                if constexpr (is_real) {
                    const Eigen::VectorXcd s = ritz_vectors.col(idx);
                    xt = v.leftCols(m_eff) * s.real() +
                         Complex(0.0, 1.0) * (v.leftCols(m_eff) * s.imag());
                } else {
                    xt = v.leftCols(m_eff) * ritz_vectors.col(idx);
                }
                xt.normalize();
                // Correct through the locked subspace; the Krylov basis only
                // represents the deflated operator.
                Eigen::VectorXcd x = xt;
                if (q > 0) {
                    const Eigen::VectorXcd cx = q_sweep.adjoint() * op_complex(xt);
                    const Eigen::MatrixXcd shifted =
                        th * Eigen::MatrixXcd::Identity(q, q) - t_sweep;
                    const Eigen::VectorXcd corr = shifted.fullPivLu().solve(cx);
                    // Near-degenerate locked values make the correction blow
                    // up; the deflated Ritz vector itself is then the
                    // eigenvector of the remaining copy.
                    if (corr.norm() < 10.0) x = xt + q_sweep * corr;
                }
                fix_phase(x);
                const Complex lambda = to_lambda(th);
                const double res = pencil_residual(pencil, lambda, x);
                const double threshold = tol * (norm_scale_a + std::abs(lambda) * norm_scale_b);
                if (res > threshold) {
                    group_ok = false;
                    worst_pending = std::max(worst_pending, res);
                }
                cands.push_back({lambda, std::move(x), res});
            }

            if (group_ok) {
                auto append_column = [&](const Vector& col) {
                    Vector wcol = col;
                    for (int pass = 0; pass < 2; ++pass)
                        if (q_locked.cols() > 0)
                            wcol -= q_locked * (q_locked.adjoint() * wcol);
                    if (wcol.norm() > 1e-8) {
                        q_locked.conservativeResize(n, q_locked.cols() + 1);
                        q_locked.col(q_locked.cols() - 1) = wcol / wcol.norm();
                    }
                };
                for (auto& c : cands) {
                    if constexpr (is_real) {
                        append_column(c.x.real());
                        append_column(c.x.imag());
                    } else {
                        append_column(c.x);
                    }
                    EigenPair pair;
                    pair.lambda = c.lambda;
                    pair.k = to_transmission_k(c.lambda);
                    pair.residual = c.residual;
                    pair.x = std::move(c.x);
                    locked.push_back(std::move(pair));
                }
                // Refresh T = Q^H C Q.
                const int qn = static_cast<int>(q_locked.cols());
                Eigen::MatrixXcd cq(n, qn);
                for (int c2 = 0; c2 < qn; ++c2) {
                    if constexpr (is_real)
                        cq.col(c2) = op(q_locked.col(c2)).template cast<Complex>();
                    else
                        cq.col(c2) = op_complex(q_locked.col(c2));
                }
                t_locked = q_locked.template cast<Complex>().adjoint() * cq;
            } else {
                hit_unconverged = true;
                for (auto& c : cands) {
                    if constexpr (is_real)
                        enrich += c.x.real() + c.x.imag();
                    else
                        enrich += c.x;
                }
            }
        }

        if (static_cast<int>(locked.size()) >= nev) break;
        start = enrich.norm() > 1e-12 ? enrich : random_vector();
        if (restart == max_restarts) {
            std::ostringstream msg;
            msg << "eigensolver did not converge after " << max_restarts
                << " restarts: " << locked.size() << "/" << nev
                << " pairs locked, best pending residual " << worst_pending;
            throw SolverError(msg.str());
        }
    }
    return locked;
}

} // namespace

std::complex<double> to_transmission_k(std::complex<double> lambda) {
    if (lambda == Complex(0.0, 0.0))
        throw SolverError("lambda = 0 maps to k = 0, which is not an eigenvalue");
    // Avoid the negative-zero imaginary part putting sqrt on the wrong side
    // of the branch cut for real positive lambda.
    const Complex neg(-lambda.real(), lambda.imag() == 0.0 ? 0.0 : -lambda.imag());
    Complex k = std::sqrt(neg);
    if (k.real() < 0.0 || (k.real() == 0.0 && k.imag() < 0.0)) k = -k;
    return k;
}

bool physical_k(std::complex<double> k) {
    return k.real() > 1e-12 * (1.0 + std::abs(k));
}

std::vector<EigenPair> solve_pencil(const EigenPencil& pencil, const SolverConfig& cfg) {
    const int n = static_cast<int>(pencil.A.rows());
    if (n < 1) throw SolverError("empty pencil");
    if (!(cfg.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (cfg.nev < 1) throw ConfigError("nev must be at least 1");
    const int nev = std::min(cfg.nev, n);
    int m = cfg.krylov_dim;
    if (m == 0) m = std::max(40, 4 * nev);
    if (m < 2 * nev + 2) {
        if (cfg.krylov_dim != 0)
            throw ConfigError("krylov_dim must be at least 2*nev + 2");
        m = 2 * nev + 2;
    }

    const double norm_a = one_norm(pencil.A);
    const double norm_b = one_norm(pencil.B);
    if (norm_b == 0.0) throw SolverError("B is identically zero");

    std::vector<EigenPair> pairs;
    if (cfg.shift == Complex(0.0, 0.0)) {
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(pencil.A);
        if (llt.info() != Eigen::Success)
            throw SolverError("Cholesky factorization failed: A is not SPD");
        std::function<Eigen::VectorXd(const Eigen::VectorXd&)> op =
            [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            return llt.solve(pencil.B * x);
        };
        std::function<Complex(Complex)> to_lambda = [](Complex theta) {
            return Complex(1.0, 0.0) / theta;
        };
        pairs = arnoldi_locked<double>(pencil, op, to_lambda, nev, m, cfg.tol,
                                       cfg.max_restarts, norm_a, norm_b);
    } else {
        // Complex shift: factor (A - shift B) once and iterate in complex
        // arithmetic; Ritz values are 1/(lambda - shift).
        Eigen::SparseMatrix<Complex> shifted =
            pencil.A.cast<Complex>() - cfg.shift * pencil.B.cast<Complex>();
        shifted.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(shifted);
        if (lu.info() != Eigen::Success)
            throw SolverError("LU factorization of the shifted pencil failed");
        const Eigen::SparseMatrix<Complex> bc = pencil.B.cast<Complex>();
        std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> op =
            [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
            return lu.solve(bc * x);
        };
        const Complex shift = cfg.shift;
        std::function<Complex(Complex)> to_lambda = [shift](Complex theta) {
            return shift + Complex(1.0, 0.0) / theta;
        };
        pairs = arnoldi_locked<Complex>(pencil, op, to_lambda, nev, m, cfg.tol,
                                        cfg.max_restarts, norm_a, norm_b);

        // The pencil is real, so close the returned set under conjugation.
        std::vector<EigenPair> extra;
        for (const EigenPair& p : pairs) {
            if (std::abs(p.lambda.imag()) < 1e-12 * std::abs(p.lambda)) continue;
            const Complex conj_lambda = std::conj(p.lambda);
            bool found = false;
            for (const EigenPair& o : pairs)
                if (std::abs(o.lambda - conj_lambda) <= 1e-10 * std::abs(conj_lambda))
                    found = true;
            if (!found) {
                EigenPair c;
                c.lambda = conj_lambda;
                c.k = to_transmission_k(conj_lambda);
                c.x = p.x.conjugate();
                c.residual = p.residual;
                extra.push_back(std::move(c));
            }
        }
        pairs.insert(pairs.end(), std::make_move_iterator(extra.begin()),
                     std::make_move_iterator(extra.end()));
    }

    std::sort(pairs.begin(), pairs.end(), k_order);

    // Keep nev pairs but never split a conjugate pair across the cut.
    std::size_t keep = std::min<std::size_t>(nev, pairs.size());
    if (keep < pairs.size()) {
        const Complex last = pairs[keep - 1].lambda;
        if (std::abs(pairs[keep].lambda - std::conj(last)) <=
            1e-10 * std::abs(last) && std::abs(last.imag()) > 0.0)
            ++keep;
    }
    pairs.resize(keep);
    return pairs;
}

ResidualReport verify_residuals(const EigenPencil& pencil,
                                const std::vector<EigenPair>& pairs, double tol) {
    ResidualReport report;
    const double norm_a = one_norm(pencil.A);
    const double norm_b = one_norm(pencil.B);
    report.all_ok = true;
    for (const EigenPair& p : pairs) {
        const double res = pencil_residual(pencil, p.lambda, p.x);
        const double threshold = tol * (norm_a + std::abs(p.lambda) * norm_b);
        report.residual.push_back(res);
        report.threshold.push_back(threshold);
        report.ok.push_back(res <= threshold);
        report.all_ok = report.all_ok && report.ok.back();
    }
    return report;
}

} // namespace tevem
