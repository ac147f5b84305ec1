#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geometry/point_cloud.hpp"

namespace rladnet {

struct PointNNConfig {
    std::vector<std::size_t> stage_sizes{512, 128};  // FPS centres per stage, strictly decreasing
    std::size_t k = 16;                              // neighbours per group
    std::size_t bands = 6;                           // sin/cos frequency bands, spaced x2
    double base_frequency = 1.0;

    void validate() const;
    std::size_t descriptor_dim() const;
};

// Parameter-free global descriptor: trigonometric encoding of coordinates,
// then per stage FPS centres, k-NN groups, encoding of radius-normalised
// offsets and max+mean pooling, then a final max+mean pool. Unit L2 norm.
// FPS starts at the point farthest from the centroid.
std::vector<double> pointnn_embed(const PointCloud& cloud, const PointNNConfig& cfg);

struct FeatureBank {
    std::string category;
    std::size_t dim = 0;
    std::vector<std::vector<double>> descriptors;  // unit-normalised
};

FeatureBank build_feature_bank(const std::vector<PointCloud>& shapes, const std::string& category,
                               const PointNNConfig& cfg);

// Bank file: header "PNNBANK v1 dim=<d> count=<n> category=<c>", then n lines
// of d decimal values.
void write_feature_bank(const std::filesystem::path& path, const FeatureBank& bank);
FeatureBank read_feature_bank(const std::filesystem::path& path);

// q = (1 + max cosine similarity to the bank) / 2, in [0, 1].
double quality_from_descriptor(const std::vector<double>& descriptor, const FeatureBank& bank);
double quality_score(const PointCloud& cloud, const FeatureBank& bank, const PointNNConfig& cfg);

enum class Choice { Baseline, Refined };
enum class Criterion { ScoreOnly, Dual };

const char* choice_name(Choice c) noexcept;
const char* criterion_name(Criterion c) noexcept;

struct SelectionRecord {
    std::string id;
    Choice chosen = Choice::Baseline;
    double q_base = 0.0;
    double q_ref = 0.0;
    std::optional<double> cd_base;
    std::optional<double> cd_ref;
    Criterion criterion = Criterion::ScoreOnly;

    // Re-evaluates the governing rule from the stored fields.
    bool consistent() const;
    friend bool operator==(const SelectionRecord&, const SelectionRecord&) = default;
};

// Score-only: refined iff q_ref > q_base. Dual (both CDs given): refined iff
// cd_ref < cd_base; when CD and score disagree the lower CD wins.
Choice decide(double q_base, double q_ref, std::optional<double> cd_base = {}, std::optional<double> cd_ref = {});

SelectionRecord select(const std::string& id, const PointCloud& base, const PointCloud& refined,
                       const FeatureBank& bank, const PointCloud* gt, const PointNNConfig& cfg);

}  // namespace rladnet
