#include "harness/cloud_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace rladnet {

CloudFormat format_for(const std::filesystem::path& path) {
    return path.extension() == ".pcf" ? CloudFormat::Pcf : CloudFormat::Xyz;
}

CloudFormat parse_cloud_format(const std::string& name) {
    if (name == "xyz") return CloudFormat::Xyz;
    if (name == "pcf") return CloudFormat::Pcf;
    throw InvalidArgument("unknown cloud format '" + name + "' (expected xyz or pcf)");
}

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    if (format == CloudFormat::Pcf) {
        out.write("PCF1", 4);
        write_u32_le(out, static_cast<std::uint32_t>(cloud.size()));
        for (const auto& p : cloud)
            for (double c : p) write_f32_le(out, static_cast<float>(c));
    } else {
        char buf[96];
        for (const auto& p : cloud) {
            const int n = std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p[0], p[1], p[2]);
            out.write(buf, n);
        }
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
    save_cloud(path, cloud, format_for(path));
}

namespace {

PointCloud load_pcf(std::istream& in, const std::string& src) {
    ByteReader r(in, src);
    char magic[4];
    r.read_bytes(magic, 4);
    if (std::string(magic, 4) != "PCF1") throw ParseError(src, 0, "bad magic, expected PCF1", false);
    const std::uint32_t count = r.u32();
    if (count == 0) throw InvalidArgument(src + ": cloud declares zero points");
    std::vector<Point3> pts(count);
    for (auto& p : pts)
        for (double& c : p) c = static_cast<double>(r.f32());
    if (!r.at_end()) throw ParseError(src, r.offset(), "trailing bytes after declared points", false);
    try {
        return PointCloud(std::move(pts));
    } catch (const InvalidArgument& e) {
        throw ParseError(src, 8, e.what(), false);
    }
}

PointCloud load_xyz(std::istream& in, const std::string& src) {
    std::vector<Point3> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        Point3 p{};
        const char* c = line.data();
        const char* e = line.data() + line.size();
        int fields = 0;
        while (c < e) {
            while (c < e && (*c == ' ' || *c == '\t')) ++c;
            if (c == e) break;
            double v = 0.0;
            auto [next, ec] = std::from_chars(c, e, v);
            if (ec != std::errc()) throw ParseError(src, lineno, "not a number");
            if (fields < 3) p[static_cast<std::size_t>(fields)] = v;
            ++fields;
            c = next;
        }
        if (fields != 3) throw ParseError(src, lineno, "expected 3 fields, found " + std::to_string(fields));
        pts.push_back(p);
    }
    if (pts.empty()) throw InvalidArgument(src + ": cloud file contains no points");
    try {
        return PointCloud(std::move(pts));
    } catch (const InvalidArgument& e) {
        throw ParseError(src, lineno, e.what());
    }
}

}  // namespace

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return format == CloudFormat::Pcf ? load_pcf(in, path.string()) : load_xyz(in, path.string());
}

PointCloud load_cloud(const std::filesystem::path& path) { return load_cloud(path, format_for(path)); }

}  // namespace rladnet
