// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "tevem/errors.hpp"
#include "tevem/mesh.hpp"

namespace tevem {

namespace {

// Reads the next content line, skipping blanks and # comments. Comments of the
// form "# key: value" are collected as metadata.
class MeshReader {
public:
    MeshReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    bool next_line(std::string& line) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_number_;
            std::string trimmed = trim(raw);
            if (trimmed.empty()) continue;
            if (trimmed[0] == '#') {
                parse_metadata(trimmed);
                continue;
            }
            line = trimmed;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw MeshError(name_ + ":" + std::to_string(line_number_) + ": " + what);
    }

    const std::map<std::string, std::string>& metadata() const { return metadata_; }

private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return {};
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    void parse_metadata(const std::string& comment) {
        const auto colon = comment.find(':');
        if (colon == std::string::npos) return;
        const std::string key = trim(comment.substr(1, colon - 1));
        const std::string value = trim(comment.substr(colon + 1));
        if (!key.empty() && !value.empty()) metadata_[key] = value;
    }

    std::istream& in_;
    std::string name_;
    int line_number_ = 0;
    std::map<std::string, std::string> metadata_;
};

} // namespace

PolygonalMesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file '" + path.string() + "'");
    MeshReader reader(in, path.filename().string());

    std::string line;
    if (!reader.next_line(line)) reader.fail("missing header");
    if (line != "tevem-mesh 1")
        reader.fail("expected header 'tevem-mesh 1', got '" + line + "'");

    if (!reader.next_line(line)) reader.fail("missing vertex/cell counts");
    long long nv = 0, nc = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> nv >> nc) || nv < 3 || nc < 1)
            reader.fail("invalid vertex/cell counts '" + line + "'");
    }

    PolygonalMesh mesh;
    mesh.vertices.reserve(nv);
    for (long long i = 0; i < nv; ++i) {
        if (!reader.next_line(line)) reader.fail("unexpected end of file in vertex list");
        std::istringstream ss(line);
        double x, y;
        if (!(ss >> x >> y)) reader.fail("malformed vertex line '" + line + "'");
        mesh.vertices.push_back({x, y});
    }
    for (long long c = 0; c < nc; ++c) {
        if (!reader.next_line(line)) reader.fail("unexpected end of file in cell list");
        std::istringstream ss(line);
        int k = 0;
        if (!(ss >> k) || k < 3) reader.fail("malformed cell line '" + line + "'");
        std::vector<int> cell(k);
        for (int i = 0; i < k; ++i) {
            if (!(ss >> cell[i])) reader.fail("cell line has fewer than " +
                                              std::to_string(k) + " indices");
            if (cell[i] < 0 || cell[i] >= nv)
                reader.fail("cell " + std::to_string(c) + " references invalid vertex " +
                            std::to_string(cell[i]));
        }
        mesh.cells.push_back(std::move(cell));
    }
    if (reader.next_line(line)) reader.fail("trailing content '" + line + "'");

    const auto& meta = reader.metadata();
    if (auto it = meta.find("domain"); it != meta.end()) {
        try {
            mesh.domain = domain_from_string(it->second);
        } catch (const ConfigError&) {
            mesh.domain = DomainTag::custom;
        }
    }
    if (auto it = meta.find("seed"); it != meta.end())
        mesh.seed = std::strtoull(it->second.c_str(), nullptr, 10);

    mark_boundary(mesh);
    check_mesh(mesh);
    return mesh;
}

void save_mesh(const PolygonalMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh file '" + path.string() + "'");
    out << "tevem-mesh 1\n";
    out << "# domain: " << to_string(mesh.domain) << "\n";
    if (mesh.seed != 0) out << "# seed: " << mesh.seed << "\n";
    out << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
    out << std::setprecision(17);
    for (const Point2& p : mesh.vertices) out << p.x << ' ' << p.y << '\n';
    for (const auto& cell : mesh.cells) {
        out << cell.size();
        for (int v : cell) out << ' ' << v;
        out << '\n';
    }
    if (!out) throw MeshError("write failure on '" + path.string() + "'");
}

} // namespace tevem
