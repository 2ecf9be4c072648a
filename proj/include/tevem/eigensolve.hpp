// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "tevem/assembly.hpp"

namespace tevem {

struct SolverConfig {
    int nev = 6;                       // requested eigenpair count
    int krylov_dim = 0;                // 0 selects max(40, 4*nev); must be >= 2*nev+2
    double tol = 1e-10;                // residual tolerance, relative to matrix scale
    int max_restarts = 50;
    std::complex<double> shift{0.0, 0.0}; // nonzero switches to complex shift-invert
};

struct EigenPair {
    std::complex<double> lambda;  // pencil eigenvalue
    std::complex<double> k;       // transmission eigenvalue, k^2 = -lambda, Re(k) >= 0
    double residual = 0.0;        // ||A x - lambda B x||_2 with ||x||_2 = 1
    Eigen::VectorXcd x;
};

// Principal branch of sqrt(-lambda) with Re(k) >= 0. Throws SolverError for
// lambda = 0 (not an eigenvalue of the continuous problem).
std::complex<double> to_transmission_k(std::complex<double> lambda);

// Physically meaningful transmission eigenvalues have Re(k) > 0; purely
// imaginary k (lambda > 0) is flagged as non-physical in reports.
bool physical_k(std::complex<double> k);

// Krylov iteration on x -> A^{-1} B x (one symmetric factorization of A).
// Returns at least cfg.nev pairs sorted by |k| ascending, ties by ascending
// Im(k); complex eigenvalues come as full conjugate pairs. Converged pairs
// satisfy residual <= tol * (||A||_1 + |lambda| ||B||_1).
std::vector<EigenPair> solve_pencil(const EigenPencil& pencil, const SolverConfig& cfg);

struct ResidualReport {
    std::vector<double> residual;   // recomputed from the sparse matrices
    std::vector<double> threshold;  // tol * (||A||_1 + |lambda| ||B||_1)
    std::vector<bool> ok;
    bool all_ok = false;
};

// Independent residual check straight from the pencil, no solver internals.
ResidualReport verify_residuals(const EigenPencil& pencil,
                                const std::vector<EigenPair>& pairs,
                                double tol = 1e-10);

} // namespace tevem
