#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "autoencoder/gfv.hpp"
#include "harness/config.hpp"
#include "selector/pointnn.hpp"

namespace rladnet {

struct MetricsRow {
    std::string category;
    std::string method;  // baseline | refined | selected
    double mean_cd_l2 = 0.0;
    double mean_fscore = 0.0;
    std::size_t n = 0;
    std::size_t selected_refined = 0;  // per category, repeated on each row
};

struct SampleOutcome {
    std::string category;
    SelectionRecord selection;
    double cd_base = 0.0;
    double cd_ref = 0.0;
    double cd_selected = 0.0;
    double fscore_base = 0.0;
    double fscore_ref = 0.0;
    double fscore_selected = 0.0;
    Gfv z_before;
    Gfv z_after;
};

struct PipelineResult {
    std::vector<MetricsRow> metrics;
    std::vector<SampleOutcome> samples;  // category order, then id order
};

// Deterministic split: FNV-1a(id) mod 10000 below test_fraction * 10000.
bool is_test_sample(const std::string& id, double test_fraction);

// Per category: ingest and normalise shapes, crop, complete, train or load
// the AE / policy / bank, then for each test sample encode, refine, decode,
// select and score. Writes metrics.csv, selections.csv, trajectories.txt and
// per-category artifacts under out_dir.
PipelineResult run_pipeline(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                            std::ostream* log = nullptr);

// Header "category,method,mean_cd_l2,mean_fscore,n,selected_refined".
void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);
void write_selections_csv(const std::filesystem::path& path, const std::vector<SampleOutcome>& samples);
// One line per test sample: the 128 floats of z_before then the 128 of z_after.
void write_trajectories(const std::filesystem::path& path, const std::vector<SampleOutcome>& samples);

}  // namespace rladnet
