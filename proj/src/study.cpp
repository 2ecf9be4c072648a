// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "tevem/study.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tevem/errors.hpp"

namespace tevem {

namespace {

// Gauss-Newton fit of y_j ~ c0 + c1 * h_j^alpha for one real component.
// Returns {c0, alpha, rms residual, ok}.
struct ComponentFit {
    double value = 0.0;
    double alpha = 0.0;
    double rms = 0.0;
    bool ok = false;
};

ComponentFit fit_component(const std::vector<double>& h, const std::vector<double>& y) {
    const int n = static_cast<int>(h.size());
    ComponentFit fit;

    // Scale-free flat detection: no resolvable h-dependence.
    double spread = 0.0, magnitude = 0.0;
    for (int j = 0; j < n; ++j) {
        spread = std::max(spread, std::abs(y[j] - y[0]));
        magnitude = std::max(magnitude, std::abs(y[j]));
    }
    if (spread <= 1e-13 * std::max(1.0, magnitude)) {
        fit.value = y[0];
        fit.alpha = std::numeric_limits<double>::quiet_NaN();
        fit.ok = true;
        return fit;
    }

    // Initial guess from the last three samples (closest to the limit).
    const double d1 = y[n - 2] - y[n - 3];
    const double d2 = y[n - 1] - y[n - 2];
    double alpha = 2.0;
    if (d1 != 0.0 && d2 != 0.0 && std::abs(d2) < std::abs(d1)) {
        const double ratio = std::abs(d1 / d2);
        const double hratio = h[n - 3] / h[n - 2];
        if (hratio > 1.0) alpha = std::log(ratio) / std::log(hratio);
    }
    alpha = std::clamp(alpha, 0.1, 8.0);

    auto solve_linear = [&](double a, double& c0, double& c1, double& rss) {
        // Least squares in (c0, c1) for fixed alpha.
        double s11 = n, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double t = std::pow(h[j], a);
            s12 += t;
            s22 += t * t;
            b1 += y[j];
            b2 += y[j] * t;
        }
        const double det = s11 * s22 - s12 * s12;
        c0 = (s22 * b1 - s12 * b2) / det;
        c1 = (s11 * b2 - s12 * b1) / det;
        rss = 0.0;
        for (int j = 0; j < n; ++j) {
            const double r = y[j] - c0 - c1 * std::pow(h[j], a);
            rss += r * r;
        }
    };

    double c0, c1, rss;
    solve_linear(alpha, c0, c1, rss);
    for (int iter = 0; iter < 100; ++iter) {
        // Newton step on alpha with (c0, c1) eliminated exactly.
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (int j = 0; j < n; ++j) {
            const double t = std::pow(h[j], alpha);
            const double r = y[j] - c0 - c1 * t;
            const Eigen::Vector3d grad(-1.0, -t, -c1 * t * std::log(h[j]));
            jtj += grad * grad.transpose();
            jtr += grad * r;
        }
        jtj += 1e-14 * jtj.trace() * Eigen::Matrix3d::Identity();
        const Eigen::Vector3d step = jtj.ldlt().solve(jtr);
        double damping = 1.0;
        bool improved = false;
        for (int half = 0; half < 20; ++half) {
            const double a_new = std::clamp(alpha - damping * step[2], 0.01, 12.0);
            double c0n, c1n, rss_new;
            solve_linear(a_new, c0n, c1n, rss_new);
            if (rss_new <= rss * (1.0 + 1e-15)) {
                const bool converged = std::abs(a_new - alpha) < 1e-12;
                alpha = a_new;
                c0 = c0n;
                c1 = c1n;
                improved = rss_new < rss;
                rss = rss_new;
                if (converged) improved = false;
                break;
            }
            damping *= 0.5;
        }
        if (!improved) break;
    }

    fit.value = c0;
    fit.alpha = alpha;
    fit.rms = std::sqrt(rss / n);
    // An order railed at the search bounds means the model never identified
    // a rate; the extrapolated value is then meaningless.
    fit.ok = std::isfinite(c0) && std::isfinite(alpha) && alpha > 0.02 && alpha < 11.5;
    return fit;
}

} // namespace

OrderFit fit_order(const std::vector<std::pair<double, std::complex<double>>>& samples) {
    if (samples.size() < 3)
        throw ConfigError("order fitting needs at least 3 samples");
    std::vector<double> h, re, im;
    for (const auto& [hj, kj] : samples) {
        if (!(hj > 0.0)) throw ConfigError("mesh sizes must be positive");
        for (double other : h)
            if (hj == other) throw ConfigError("order fitting needs distinct mesh sizes");
        h.push_back(hj);
        re.push_back(kj.real());
        im.push_back(kj.imag());
    }

    double max_im = 0.0, max_mag = 0.0;
    for (const auto& [hj, kj] : samples) {
        max_im = std::max(max_im, std::abs(kj.imag()));
        max_mag = std::max(max_mag, std::abs(kj));
    }

    OrderFit fit;
    fit.is_complex = max_im > 1e-9 * std::max(1.0, max_mag);
    const ComponentFit fr = fit_component(h, re);
    fit.alpha_re = fr.alpha;
    fit.residual = fr.rms;
    double k_star_im = 0.0;
    if (fit.is_complex) {
        const ComponentFit fi = fit_component(h, im);
        fit.alpha_im = fi.alpha;
        k_star_im = fi.value;
        fit.residual = std::hypot(fit.residual, fi.rms);
        fit.low_confidence = fit.low_confidence || !fi.ok;
    } else {
        fit.alpha_im = std::numeric_limits<double>::quiet_NaN();
    }
    fit.k_star = {fr.value, k_star_im};
    fit.low_confidence = fit.low_confidence || !fr.ok;

    // Non-monotone approach to the limit undermines the model; keep the
    // numbers but flag them.
    for (std::size_t j = 1; j < samples.size(); ++j) {
        const double prev = std::abs(samples[j - 1].second - fit.k_star);
        const double curr = std::abs(samples[j].second - fit.k_star);
        if (curr > prev * (1.0 + 1e-9) + 1e-14 * max_mag) fit.low_confidence = true;
    }
    return fit;
}

ConvergenceTable run_study(const StudyConfig& cfg) {
    if (cfg.levels.size() < 3)
        throw ConfigError("convergence studies need at least 3 refinement levels");
    for (std::size_t i = 1; i < cfg.levels.size(); ++i)
        if (cfg.levels[i] <= cfg.levels[i - 1])
            throw ConfigError("refinement levels must be strictly increasing");
    if (cfg.nev < 1) throw ConfigError("nev must be at least 1");

    ConvergenceTable table;
    table.levels = cfg.levels;

    std::vector<std::vector<EigenPair>> per_level;
    for (int n : cfg.levels) {
        const PolygonalMesh mesh =
            generate_structured(cfg.domain, cfg.family, n, cfg.seed);
        const MeshGeometry geo = compute_geometry(mesh);
        const EigenPencil pencil = assemble(mesh, geo, cfg.n_index);
        SolverConfig solver = cfg.solver;
        solver.nev = std::max(cfg.nev + 2, solver.nev); // headroom for tracking
        per_level.push_back(solve_pencil(pencil, solver));
        table.h.push_back(geo.h);
    }

    // Track eigenvalues across levels: greedy nearest match in the complex
    // plane, each candidate used at most once.
    const int n_track = std::min<int>(cfg.nev, static_cast<int>(per_level[0].size()));
    table.eigenvalue.resize(n_track);
    std::vector<int> current(n_track);
    for (int i = 0; i < n_track; ++i) {
        current[i] = i;
        table.eigenvalue[i].k.push_back(per_level[0][i].k);
        table.eigenvalue[i].residual.push_back(per_level[0][i].residual);
    }
    for (std::size_t lvl = 1; lvl < per_level.size(); ++lvl) {
        const auto& cands = per_level[lvl];
        std::vector<bool> used(cands.size(), false);
        for (int i = 0; i < n_track; ++i) {
            const std::complex<double> target =
                table.eigenvalue[i].k.back();
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            double second_d = std::numeric_limits<double>::infinity();
            std::complex<double> second_k;
            for (std::size_t c = 0; c < cands.size(); ++c) {
                if (used[c]) continue;
                const double d = std::abs(cands[c].k - target);
                if (d < best_d) {
                    second_d = best_d;
                    second_k = best >= 0 ? cands[best].k : second_k;
                    best_d = d;
                    best = static_cast<int>(c);
                } else if (d < second_d) {
                    second_d = d;
                    second_k = cands[c].k;
                }
            }
            if (best < 0)
                throw SolverError("eigenvalue tracking ran out of candidates at level " +
                                  std::to_string(cfg.levels[lvl]));
            // Two nearly identical candidates (repeated eigenvalue): either
            // choice yields the same fit, but report it.
            if (std::isfinite(second_d) &&
                std::abs(cands[best].k - second_k) < 1e-6)
                table.eigenvalue[i].degenerate_match = true;
            used[best] = true;
            table.eigenvalue[i].k.push_back(cands[best].k);
            table.eigenvalue[i].residual.push_back(cands[best].residual);
        }
    }

    for (auto& track : table.eigenvalue) {
        std::vector<std::pair<double, std::complex<double>>> samples;
        for (std::size_t lvl = 0; lvl < table.h.size(); ++lvl)
            samples.push_back({table.h[lvl], track.k[lvl]});
        track.fit = fit_order(samples);
    }
    return table;
}

namespace {

std::string format_complex_fixed(std::complex<double> z, int decimals) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(decimals) << z.real();
    if (std::abs(z.imag()) >= 0.5 * std::pow(10.0, -decimals)) {
        ss << (z.imag() < 0 ? "-" : "+") << std::fixed
           << std::setprecision(decimals) << std::abs(z.imag()) << "i";
    }
    return ss.str();
}

std::string format_order(const OrderFit& fit) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2);
    if (std::isnan(fit.alpha_re))
        ss << "-";
    else
        ss << fit.alpha_re;
    if (fit.is_complex) {
        ss << " & ";
        if (std::isnan(fit.alpha_im))
            ss << "-";
        else
            ss << std::fixed << std::setprecision(2) << fit.alpha_im;
    }
    return ss.str();
}

} // namespace

std::string emit_table(const ConvergenceTable& table, TableFormat format) {
    std::ostringstream out;
    const int nev = static_cast<int>(table.eigenvalue.size());
    if (format == TableFormat::csv) {
        out << "level,N,h,i,re_k,im_k,residual\n";
        out << std::setprecision(17);
        for (std::size_t lvl = 0; lvl < table.levels.size(); ++lvl)
            for (int i = 0; i < nev; ++i) {
                const auto& track = table.eigenvalue[i];
                out << lvl << ',' << table.levels[lvl] << ',' << table.h[lvl] << ','
                    << i + 1 << ',' << track.k[lvl].real() << ',' << track.k[lvl].imag()
                    << ',' << track.residual[lvl] << '\n';
            }
        for (int i = 0; i < nev; ++i) {
            const OrderFit& fit = table.eigenvalue[i].fit;
            out << "fit," << i + 1 << ',' << fit.alpha_re << ',' << fit.alpha_im << ','
                << fit.k_star.real() << ',' << fit.k_star.imag() << '\n';
        }
        return out.str();
    }

    // Publication-style text table.
    const int width = 18;
    out << std::left << std::setw(14) << "";
    for (int i = 0; i < nev; ++i)
        out << std::setw(width) << ("k_" + std::to_string(i + 1));
    out << '\n';
    for (std::size_t lvl = 0; lvl < table.levels.size(); ++lvl) {
        out << std::setw(14) << ("N=" + std::to_string(table.levels[lvl]));
        for (int i = 0; i < nev; ++i)
            out << std::setw(width)
                << format_complex_fixed(table.eigenvalue[i].k[lvl], 4);
        out << '\n';
    }
    out << std::setw(14) << "Order";
    for (int i = 0; i < nev; ++i)
        out << std::setw(width) << format_order(table.eigenvalue[i].fit);
    out << '\n';
    out << std::setw(14) << "Extrapolated";
    for (int i = 0; i < nev; ++i)
        out << std::setw(width)
            << format_complex_fixed(table.eigenvalue[i].fit.k_star, 4);
    out << '\n';
    bool any_flag = false;
    for (const auto& track : table.eigenvalue)
        any_flag = any_flag || track.fit.low_confidence || track.degenerate_match;
    if (any_flag) {
        out << std::setw(14) << "Flags";
        for (const auto& track : table.eigenvalue) {
            std::string flag;
            if (track.fit.low_confidence) flag += "low-confidence ";
            if (track.degenerate_match) flag += "degenerate";
            if (flag.empty()) flag = "-";
            out << std::setw(width) << flag;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace tevem
