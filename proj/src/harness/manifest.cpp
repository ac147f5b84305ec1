#include "harness/manifest.hpp"

#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace rladnet {

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path q(p);
        return q.is_absolute() ? q : base / q;
    };
    std::vector<ManifestEntry> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> fields;
        for (std::string f; ls >> f;) fields.push_back(f);
        if (fields.empty()) continue;
        if (fields.size() < 3 || fields.size() > 4)
            throw ParseError(path.string(), lineno, "expected 'id category path [gt_path]'");
        ManifestEntry e{fields[0], fields[1], resolve(fields[2]), std::nullopt};
        if (fields.size() == 4) e.gt_path = resolve(fields[3]);
        out.push_back(std::move(e));
    }
    return out;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest " + path.string());
    for (const auto& e : entries) {
        out << e.id << ' ' << e.category << ' ' << e.path.string();
        if (e.gt_path) out << ' ' << e.gt_path->string();
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace rladnet
