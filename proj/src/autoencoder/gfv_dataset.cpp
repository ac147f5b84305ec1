#include "autoencoder/gfv_dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "common/error.hpp"

namespace rladnet {
namespace {

void check_token(const std::string& s, const char* what) {
    if (s.empty() || s.find_first_of(" \t\r\n") != std::string::npos)
        throw InvalidArgument(std::string(what) + " must be non-empty and contain no whitespace: '" + s + "'");
}

}  // namespace

std::vector<GfvRecord> export_gfv_dataset(const AEModel& model, const std::vector<Completion>& completions) {
    std::set<std::string> seen;
    std::vector<GfvRecord> out;
    out.reserve(completions.size());
    for (const auto& c : completions) {
        if (!seen.insert(c.id).second) throw InvalidArgument("duplicate completion id: " + c.id);
        out.push_back({c.id, c.category, encode(model, c.baseline), c.baseline_path, c.gt_path});
    }
    std::sort(out.begin(), out.end(), [](const GfvRecord& a, const GfvRecord& b) { return a.id < b.id; });
    return out;
}

void write_gfv_dataset(const std::filesystem::path& path, const std::vector<GfvRecord>& records) {
    std::set<std::string> seen;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "GFV128 v1 count=" << records.size() << '\n';
    out << std::setprecision(std::numeric_limits<float>::max_digits10);
    for (const auto& r : records) {
        check_token(r.id, "record id");
        check_token(r.category, "category");
        check_token(r.baseline_path.string(), "baseline path");
        if (!seen.insert(r.id).second) throw InvalidArgument("duplicate record id: " + r.id);
        out << r.id << ' ' << r.category;
        for (float v : r.z.values()) out << ' ' << v;
        out << ' ' << r.baseline_path.string();
        if (r.gt_path) {
            check_token(r.gt_path->string(), "ground-truth path");
            out << ' ' << r.gt_path->string();
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<GfvRecord> read_gfv_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string src = path.string();
    std::string line;
    if (!std::getline(in, line)) throw ParseError(src, 1, "missing header");
    std::size_t count = 0;
    {
        const std::string prefix = "GFV128 v1 count=";
        if (line.rfind(prefix, 0) != 0) throw ParseError(src, 1, "expected header 'GFV128 v1 count=<k>'");
        const char* b = line.data() + prefix.size();
        const char* e = line.data() + line.size();
        auto [p, ec] = std::from_chars(b, e, count);
        if (ec != std::errc() || p != e) throw ParseError(src, 1, "bad record count");
    }
    std::vector<GfvRecord> out;
    std::set<std::string> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;) tok.push_back(std::move(t));
        if (tok.size() != kGfvDim + 3 && tok.size() != kGfvDim + 4)
            throw ParseError(src, lineno, "expected id, category, 128 floats and 1-2 paths; got " +
                                              std::to_string(tok.size()) + " fields");
        GfvRecord r;
        r.id = tok[0];
        r.category = tok[1];
        std::array<float, kGfvDim> z{};
        for (std::size_t i = 0; i < kGfvDim; ++i) {
            const std::string& t = tok[2 + i];
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), z[i]);
            if (ec != std::errc() || p != t.data() + t.size())
                throw ParseError(src, lineno, "bad float '" + t + "'");
        }
        try {
            r.z = Gfv::from_span(z);
        } catch (const InvalidArgument& e) {
            throw ParseError(src, lineno, e.what());
        }
        r.baseline_path = tok[2 + kGfvDim];
        if (tok.size() == kGfvDim + 4) r.gt_path = tok[3 + kGfvDim];
        if (!seen.insert(r.id).second) throw ParseError(src, lineno, "duplicate id " + r.id);
        out.push_back(std::move(r));
    }
    if (out.size() != count)
        throw ParseError(src, lineno, "header declares " + std::to_string(count) + " records, found " +
                                          std::to_string(out.size()));
    return out;
}

}  // namespace rladnet
