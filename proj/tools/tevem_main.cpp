// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "tevem/errors.hpp"
#include "tevem/study.hpp"
#include "tevem/vtk.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 1;
constexpr int kExitMesh = 2;
constexpr int kExitSolver = 3;

struct MeshSpec {
    std::string mesh_path;
    std::string domain = "unit-square";
    std::string family = "triangle";
    int n = 8;
    std::uint64_t seed = 12345;

    tevem::PolygonalMesh build() const {
        if (!mesh_path.empty()) return tevem::load_mesh(mesh_path);
        return tevem::generate_structured(tevem::domain_from_string(domain),
                                          tevem::family_from_string(family), n, seed);
    }
};

void add_mesh_options(CLI::App* cmd, MeshSpec& spec, bool allow_file) {
    cmd->add_option("--domain", spec.domain,
                    "unit-square | centered-square | disk | l-shape");
    cmd->add_option("--family", spec.family,
                    "triangle | quad | hex | distorted-hex | polar | voronoi");
    cmd->add_option("--seed", spec.seed, "jitter seed (distorted-hex, voronoi)");
    if (allow_file)
        cmd->add_option("--mesh", spec.mesh_path, "read the mesh from a file instead");
}

json quality_to_json(const tevem::MeshQualityReport& report) {
    json cells = json::array();
    for (const auto& q : report.cells)
        cells.push_back({{"edge_ratio", q.edge_ratio},
                         {"kernel_ratio", q.kernel_ratio},
                         {"star_shaped", q.star_shaped},
                         {"pass_a1", q.pass_a1},
                         {"pass_a2", q.pass_a2}});
    return json{{"c_t", report.c_t},
                {"pass", report.pass},
                {"min_edge_ratio", report.min_edge_ratio},
                {"min_kernel_ratio", report.min_kernel_ratio},
                {"cells", cells}};
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw tevem::Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw tevem::Error("write failure on '" + path.string() + "'");
}

int cmd_mesh(const MeshSpec& spec, const std::string& out_path, double c_t) {
    tevem::PolygonalMesh mesh;
    if (spec.family == "voronoi") {
        if (tevem::domain_from_string(spec.domain) != tevem::DomainTag::disk)
            throw tevem::ConfigError("voronoi meshes are only defined on the disk");
        mesh = tevem::generate_voronoi_disk(spec.n, spec.seed);
    } else {
        mesh = spec.build();
    }
    tevem::save_mesh(mesh, out_path);
    const tevem::MeshQualityReport report = tevem::validate(mesh, c_t);
    write_text(out_path + ".quality.json", quality_to_json(report).dump(2) + "\n");
    std::cout << "mesh: " << mesh.num_vertices() << " vertices, " << mesh.num_cells()
              << " cells -> " << out_path << "\n";
    std::cout << "quality (C_T = " << c_t << "): " << (report.pass ? "pass" : "FAIL")
              << ", min edge ratio " << report.min_edge_ratio << ", min kernel ratio "
              << report.min_kernel_ratio << "\n";
    return 0;
}

int cmd_solve(const MeshSpec& spec, double n_index, int nev, double tol,
              const std::string& out_dir, bool export_vtk, bool dump_matrices) {
    const tevem::PolygonalMesh mesh = spec.build();
    const tevem::MeshGeometry geo = tevem::compute_geometry(mesh);
    const tevem::EigenPencil pencil = tevem::assemble(mesh, geo, n_index);

    tevem::SolverConfig cfg;
    cfg.nev = nev;
    cfg.tol = tol;
    const std::vector<tevem::EigenPair> pairs = tevem::solve_pencil(pencil, cfg);
    const tevem::ResidualReport residuals =
        tevem::verify_residuals(pencil, pairs, tol);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    std::ostringstream csv;
    csv << "i,re_k,im_k,re_lambda,im_lambda,residual\n" << std::setprecision(17);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        csv << i + 1 << ',' << p.k.real() << ',' << p.k.imag() << ','
            << p.lambda.real() << ',' << p.lambda.imag() << ',' << p.residual << '\n';
    }
    write_text(dir / "eigenvalues.csv", csv.str());

    std::cout << "h = " << geo.h << ", free DOFs = " << pencil.dof_map.n_free << "\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::cout << "k_" << i + 1 << " = " << pairs[i].k.real();
        if (pairs[i].k.imag() != 0.0)
            std::cout << (pairs[i].k.imag() < 0 ? " - " : " + ")
                      << std::abs(pairs[i].k.imag()) << "i";
        std::cout << "  (residual " << residuals.residual[i] << ")";
        if (!tevem::physical_k(pairs[i].k)) std::cout << "  [non-physical]";
        std::cout << "\n";
    }
    if (!residuals.all_ok) {
        std::cerr << "error: residual check failed for at least one pair\n";
        return kExitSolver;
    }

    if (dump_matrices) {
        tevem::write_matrix_market(pencil.A, dir / "A.mtx");
        tevem::write_matrix_market(pencil.B, dir / "B.mtx");
    }
    if (export_vtk) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            std::ostringstream name;
            name << "eig_" << std::setfill('0') << std::setw(3) << i + 1 << ".vtk";
            tevem::write_vtk_eigenfunction(mesh, geo, pencil.dof_map, pairs[i].x,
                                           dir / name.str());
        }
    }
    return 0;
}

int cmd_study(const std::string& domain, const std::string& family,
              const std::vector<int>& levels, double n_index, int nev, double tol,
              std::uint64_t seed, const std::string& out_dir) {
    tevem::StudyConfig cfg;
    cfg.domain = tevem::domain_from_string(domain);
    cfg.family = tevem::family_from_string(family);
    cfg.levels = levels;
    cfg.n_index = n_index;
    cfg.nev = nev;
    cfg.solver.tol = tol;
    cfg.seed = seed;

    const tevem::ConvergenceTable table = tevem::run_study(cfg);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    write_text(dir / "study.csv", tevem::emit_table(table, tevem::TableFormat::csv));
    const std::string text = tevem::emit_table(table, tevem::TableFormat::text);
    write_text(dir / "study.txt", text);
    std::cout << text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("TEVEM_NUM_THREADS"))
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));

    CLI::App app{"tevem: transmission eigenvalues on polygonal meshes with a "
                 "C1 virtual element method"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI-style config file");
    app.allow_config_extras(CLI::config_extras_mode::error);

    MeshSpec mesh_spec;
    std::string out_path = "mesh.msh";
    double c_t = 0.05;
    CLI::App* mesh_cmd = app.add_subcommand("mesh", "generate a mesh + quality report");
    add_mesh_options(mesh_cmd, mesh_spec, false);
    mesh_cmd->add_option("--n", mesh_spec.n, "refinement parameter")->check(CLI::PositiveNumber);
    mesh_cmd->add_option("--out", out_path, "output mesh file");
    mesh_cmd->add_option("--ct", c_t, "shape-regularity threshold C_T");

    MeshSpec solve_spec;
    double n_index = 16.0;
    int nev = 4;
    double tol = 1e-10;
    std::string solve_out = "solve";
    bool export_vtk = false;
    bool dump_matrices = false;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "compute the lowest transmission eigenvalues");
    add_mesh_options(solve_cmd, solve_spec, true);
    solve_cmd->add_option("--n", solve_spec.n, "refinement parameter");
    solve_cmd->add_option("--index-n", n_index, "index of refraction (> 1)");
    solve_cmd->add_option("--nev", nev, "number of eigenvalues");
    solve_cmd->add_option("--tol", tol, "solver tolerance");
    solve_cmd->add_option("--out", solve_out, "output directory");
    solve_cmd->add_flag("--export-vtk", export_vtk, "write one VTK file per eigenfunction");
    solve_cmd->add_flag("--dump-matrices", dump_matrices, "write A and B in MatrixMarket format");

    std::string study_domain = "unit-square";
    std::string study_family = "triangle";
    std::vector<int> levels;
    double study_index = 16.0;
    int study_nev = 4;
    double study_tol = 1e-10;
    std::uint64_t study_seed = 12345;
    std::string study_out = "study";
    CLI::App* study_cmd = app.add_subcommand("study", "mesh-refinement convergence study");
    study_cmd->add_option("--domain", study_domain,
                          "unit-square | centered-square | disk | l-shape");
    study_cmd->add_option("--family", study_family,
                          "triangle | quad | hex | distorted-hex | polar");
    study_cmd->add_option("--n", levels, "refinement levels, e.g. --n 16,32,64")
        ->delimiter(',')->expected(1, -1);
    study_cmd->add_option("--index-n", study_index, "index of refraction (> 1)");
    study_cmd->add_option("--nev", study_nev, "number of tracked eigenvalues");
    study_cmd->add_option("--tol", study_tol, "solver tolerance");
    study_cmd->add_option("--seed", study_seed, "jitter seed (distorted-hex)");
    study_cmd->add_option("--out", study_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (mesh_cmd->parsed()) return cmd_mesh(mesh_spec, out_path, c_t);
        if (solve_cmd->parsed())
            return cmd_solve(solve_spec, n_index, nev, tol, solve_out, export_vtk,
                             dump_matrices);
        if (study_cmd->parsed())
            return cmd_study(study_domain, study_family, levels, study_index,
                             study_nev, study_tol, study_seed, study_out);
    } catch (const tevem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tevem::MeshError& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return kExitMesh;
    } catch (const tevem::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
