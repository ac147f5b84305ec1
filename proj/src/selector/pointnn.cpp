#include "selector/pointnn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "common/error.hpp"
#include "geometry/metrics.hpp"
#include "geometry/sampling.hpp"

namespace rladnet {
namespace {

constexpr std::size_t kEncodingPerAxis = 2;  // sin, cos

std::size_t encoding_dim(const PointNNConfig& cfg) { return 3 * cfg.bands * kEncodingPerAxis; }

void encode_position(const Point3& v, const PointNNConfig& cfg, double* out) {
    for (int axis = 0; axis < 3; ++axis) {
        double f = cfg.base_frequency * std::numbers::pi;
        for (std::size_t b = 0; b < cfg.bands; ++b, f *= 2.0) {
            *out++ = std::sin(f * v[axis]);
            *out++ = std::cos(f * v[axis]);
        }
    }
}

// Row-major n x dim feature table.
struct Features {
    std::size_t dim = 0;
    std::vector<double> data;
    const double* row(std::size_t i) const { return data.data() + i * dim; }
};

std::size_t fps_start(const PointCloud& pts) {
    const Point3 c = centroid(pts);
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = squared_distance(pts[i], c);
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

void max_mean_pool(const std::vector<const double*>& rows, std::size_t dim, double* out_max, double* out_mean) {
    for (std::size_t d = 0; d < dim; ++d) {
        double mx = -std::numeric_limits<double>::infinity(), sum = 0.0;
        for (const double* r : rows) {
            mx = std::max(mx, r[d]);
            sum += r[d];
        }
        out_max[d] = mx;
        out_mean[d] = sum / static_cast<double>(rows.size());
    }
}

}  // namespace

void PointNNConfig::validate() const {
    if (stage_sizes.empty()) throw InvalidArgument("PointNN needs at least one stage");
    for (std::size_t i = 0; i < stage_sizes.size(); ++i) {
        if (stage_sizes[i] < 1) throw InvalidArgument("PointNN stage sizes must be positive");
        if (i > 0 && stage_sizes[i] >= stage_sizes[i - 1])
            throw InvalidArgument("PointNN stage sizes must be strictly decreasing");
    }
    if (k < 1) throw InvalidArgument("PointNN k must be >= 1");
    if (bands < 1) throw InvalidArgument("PointNN needs at least one frequency band");
}

std::size_t PointNNConfig::descriptor_dim() const {
    const std::size_t pe = 3 * bands * kEncodingPerAxis;
    std::size_t d = pe;
    for (std::size_t s = 0; s < stage_sizes.size(); ++s) d = 2 * (d + pe);
    return 2 * d;
}

std::vector<double> pointnn_embed(const PointCloud& cloud, const PointNNConfig& cfg) {
    cfg.validate();
    if (cloud.size() < cfg.stage_sizes.back())
        throw InvalidArgument("PointNN: cloud has " + std::to_string(cloud.size()) + " points, last stage needs " +
                              std::to_string(cfg.stage_sizes.back()));
    const std::size_t pe = encoding_dim(cfg);

    PointCloud pts = cloud;
    Features feat{pe, std::vector<double>(cloud.size() * pe)};
    for (std::size_t i = 0; i < cloud.size(); ++i) encode_position(cloud[i], cfg, feat.data.data() + i * pe);

    std::vector<double> offset_code(pe);
    for (std::size_t stage_size : cfg.stage_sizes) {
        const std::size_t m = std::min(stage_size, pts.size());
        const std::size_t k = std::min(cfg.k, pts.size());
        const auto centres = farthest_point_sample(pts, m, fps_start(pts));

        std::vector<std::vector<std::size_t>> groups(m);
        double radius = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            groups[j] = knn(pts, pts[centres[j]], k);
            for (std::size_t n : groups[j]) radius = std::max(radius, squared_distance(pts[n], pts[centres[j]]));
        }
        radius = radius > 0.0 ? std::sqrt(radius) : 1.0;

        const std::size_t in_dim = feat.dim + pe;
        Features next{2 * in_dim, std::vector<double>(m * 2 * in_dim)};
        std::vector<double> group_rows(k * in_dim);
        std::vector<const double*> rows(k);
        std::vector<Point3> centre_pts;
        centre_pts.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            const Point3& c = pts[centres[j]];
            centre_pts.push_back(c);
            for (std::size_t g = 0; g < k; ++g) {
                const std::size_t n = groups[j][g];
                double* r = group_rows.data() + g * in_dim;
                std::copy_n(feat.row(n), feat.dim, r);
                const Point3 off{(pts[n][0] - c[0]) / radius, (pts[n][1] - c[1]) / radius, (pts[n][2] - c[2]) / radius};
                encode_position(off, cfg, r + feat.dim);
                rows[g] = r;
            }
            double* out = next.data.data() + j * next.dim;
            max_mean_pool(rows, in_dim, out, out + in_dim);
        }
        pts = PointCloud(std::move(centre_pts));
        feat = std::move(next);
    }

    std::vector<double> desc(2 * feat.dim);
    std::vector<const double*> all(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) all[i] = feat.row(i);
    max_mean_pool(all, feat.dim, desc.data(), desc.data() + feat.dim);

    double norm = 0.0;
    for (double v : desc) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& v : desc) v /= norm;
    return desc;
}

FeatureBank build_feature_bank(const std::vector<PointCloud>& shapes, const std::string& category,
                               const PointNNConfig& cfg) {
    if (shapes.empty()) throw InvalidArgument("feature bank needs at least one shape");
    FeatureBank bank{category, cfg.descriptor_dim(), {}};
    for (const auto& s : shapes) bank.descriptors.push_back(pointnn_embed(s, cfg));
    return bank;
}

void write_feature_bank(const std::filesystem::path& path, const FeatureBank& bank) {
    if (bank.category.empty() || bank.category.find_first_of(" \t\r\n") != std::string::npos)
        throw InvalidArgument("bank category must be a single non-empty token");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "PNNBANK v1 dim=" << bank.dim << " count=" << bank.descriptors.size() << " category=" << bank.category
        << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& d : bank.descriptors) {
        if (d.size() != bank.dim) throw InvalidArgument("bank descriptor dimension mismatch");
        for (std::size_t i = 0; i < d.size(); ++i) out << (i ? " " : "") << d[i];
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

FeatureBank read_feature_bank(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string src = path.string();
    std::string line;
    if (!std::getline(in, line)) throw ParseError(src, 1, "missing header");
    std::istringstream hs(line);
    std::string magic, version, dim_tok, count_tok, cat_tok;
    hs >> magic >> version >> dim_tok >> count_tok >> cat_tok;
    auto field = [&](const std::string& tok, const std::string& key) {
        if (tok.rfind(key + "=", 0) != 0) throw ParseError(src, 1, "expected " + key + "=");
        return tok.substr(key.size() + 1);
    };
    if (magic != "PNNBANK" || version != "v1") throw ParseError(src, 1, "expected 'PNNBANK v1' header");
    FeatureBank bank;
    std::size_t count = 0;
    try {
        bank.dim = std::stoul(field(dim_tok, "dim"));
        count = std::stoul(field(count_tok, "count"));
    } catch (const std::logic_error&) {
        throw ParseError(src, 1, "bad dim/count in header");
    }
    bank.category = field(cat_tok, "category");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> d;
        d.reserve(bank.dim);
        const char* p = line.data();
        const char* e = line.data() + line.size();
        while (p < e) {
            while (p < e && *p == ' ') ++p;
            if (p == e) break;
            double v = 0.0;
            auto [q, ec] = std::from_chars(p, e, v);
            if (ec != std::errc()) throw ParseError(src, lineno, "bad number");
            d.push_back(v);
            p = q;
        }
        if (d.size() != bank.dim)
            throw ParseError(src, lineno, "expected " + std::to_string(bank.dim) + " values, got " +
                                              std::to_string(d.size()));
        bank.descriptors.push_back(std::move(d));
    }
    if (bank.descriptors.size() != count) throw ParseError(src, lineno, "descriptor count does not match header");
    if (bank.descriptors.empty()) throw ParseError(src, lineno, "bank is empty");
    return bank;
}

double quality_from_descriptor(const std::vector<double>& descriptor, const FeatureBank& bank) {
    if (bank.descriptors.empty()) throw InvalidArgument("quality_score: empty feature bank");
    if (descriptor.size() != bank.dim)
        throw InvalidArgument("quality_score: descriptor dimension " + std::to_string(descriptor.size()) +
                              " does not match bank dimension " + std::to_string(bank.dim));
    double best = -1.0;
    for (const auto& b : bank.descriptors) {
        double dot = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) dot += b[i] * descriptor[i];
        best = std::max(best, dot);
    }
    return std::clamp((1.0 + best) / 2.0, 0.0, 1.0);
}

double quality_score(const PointCloud& cloud, const FeatureBank& bank, const PointNNConfig& cfg) {
    if (cfg.descriptor_dim() != bank.dim)
        throw InvalidArgument("quality_score: configuration does not match bank dimension");
    return quality_from_descriptor(pointnn_embed(cloud, cfg), bank);
}

const char* choice_name(Choice c) noexcept { return c == Choice::Refined ? "refined" : "baseline"; }
const char* criterion_name(Criterion c) noexcept { return c == Criterion::Dual ? "dual" : "score-only"; }

Choice decide(double q_base, double q_ref, std::optional<double> cd_base, std::optional<double> cd_ref) {
    if (cd_base && cd_ref) {
        // Both signals agree on refined, or they disagree and CD decides:
        // either way the outcome is "refined iff its CD is lower".
        return *cd_ref < *cd_base ? Choice::Refined : Choice::Baseline;
    }
    return q_ref > q_base ? Choice::Refined : Choice::Baseline;
}

bool SelectionRecord::consistent() const {
    if (criterion == Criterion::Dual && !(cd_base && cd_ref)) return false;
    return chosen == decide(q_base, q_ref, criterion == Criterion::Dual ? cd_base : std::nullopt,
                            criterion == Criterion::Dual ? cd_ref : std::nullopt);
}

SelectionRecord select(const std::string& id, const PointCloud& base, const PointCloud& refined,
                       const FeatureBank& bank, const PointCloud* gt, const PointNNConfig& cfg) {
    SelectionRecord r;
    r.id = id;
    r.q_base = quality_score(base, bank, cfg);
    r.q_ref = quality_score(refined, bank, cfg);
    if (gt) {
        r.criterion = Criterion::Dual;
        r.cd_base = chamfer_l2(base, *gt);
        r.cd_ref = chamfer_l2(refined, *gt);
    }
    r.chosen = decide(r.q_base, r.q_ref, r.cd_base, r.cd_ref);
    return r;
}

}  // namespace rladnet
