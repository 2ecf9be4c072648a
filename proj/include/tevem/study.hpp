// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tevem/eigensolve.hpp"
#include "tevem/mesh.hpp"

namespace tevem {

struct StudyConfig {
    DomainTag domain = DomainTag::unit_square;
    MeshFamily family = MeshFamily::triangle;
    std::vector<int> levels;   // refinement parameters N, strictly increasing, >= 3 entries
    double n_index = 16.0;
    int nev = 4;
    SolverConfig solver;
    std::uint64_t seed = 12345;
};

// Least-squares fit of k_h = k* + C h^alpha. Complex samples are fitted
// componentwise (separate orders for real and imaginary parts).
struct OrderFit {
    std::complex<double> k_star;   // extrapolated value
    double alpha_re = 0.0;
    double alpha_im = 0.0;         // NaN when the samples are real
    double residual = 0.0;         // RMS fit residual over all components
    bool is_complex = false;
    bool low_confidence = false;   // non-monotone |k_j - k*| or fit breakdown
};

// Requires >= 3 samples with distinct h. Gauss-Newton on (k*, C, alpha),
// initialized from the 3-point closed form for geometric refinements.
OrderFit fit_order(const std::vector<std::pair<double, std::complex<double>>>& samples);

struct EigenvalueTrack {
    std::vector<std::complex<double>> k;  // one entry per level
    std::vector<double> residual;
    OrderFit fit;
    bool degenerate_match = false; // two candidates within 1e-6 at some level
};

struct ConvergenceTable {
    std::vector<int> levels;            // refinement parameters N
    std::vector<double> h;              // measured max cell diameter per level
    std::vector<EigenvalueTrack> eigenvalue; // one per tracked index
};

// Runs the refinement sequence, tracks eigenvalues across levels by nearest
// match in the complex plane (greedy, without replacement), fits orders and
// extrapolated limits per index.
ConvergenceTable run_study(const StudyConfig& cfg);

enum class TableFormat { csv, text };

// csv: rows `level,N,h,i,re_k,im_k,residual` plus fit footer lines
// `fit,i,alpha_re,alpha_im,re_kstar,im_kstar`, full precision.
// text: publication-style table, 4 decimals, complex values as a+bi / a-bi and
// dual orders joined with "&".
std::string emit_table(const ConvergenceTable& table, TableFormat format);

} // namespace tevem
