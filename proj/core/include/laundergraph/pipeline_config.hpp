#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "laundergraph/community.hpp"
#include "laundergraph/features.hpp"
#include "laundergraph/holdout.hpp"
#include "laundergraph/labels.hpp"
#include "laundergraph/train_config.hpp"

namespace laundergraph {

// Every knob of the pipeline. Config files are JSON objects whose keys are
// exactly these field names; unknown keys are rejected.
struct PipelineConfig {
    // extraction
    int k = 3;
    std::vector<std::size_t> n_max{40};
    std::vector<double> w_min{0.01};
    double theta = 0.5;
    bool component_shortcut = true;
    // features
    std::int64_t bin_width = 86400;
    double burst_c = 2.0;
    // learning
    std::string model_kind = "random_forest";
    int n_trees = 100;
    int mtry = 0;
    int min_leaf = 1;
    double c = 1.0;
    int max_epochs = 50000;
    double tolerance = 1e-12;
    std::uint64_t seed = 1;
    // evaluation and operation
    double tau = 0.5;
    double beta = 0.1;
    std::size_t negative_sample_size = 20000;
    int folds = 10;
    double train_fraction = 0.7;
    std::size_t window_size = 1000;
    std::int64_t window_seconds = 86400;
    // files
    std::string reports_path;
    std::string snapshot_path;
    std::string model_path;
    std::string ground_truth_path;
    std::string output_path;
    unsigned workers = 1;

    ExtractionParams extraction() const;
    FeatureOptions features() const;
    TrainConfig training() const;
    LabelingConfig labeling() const;
    EvalConfig evaluation() const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Throws FormatError on bad JSON, unknown keys or mistyped values.
PipelineConfig parse_pipeline_config(std::string_view json_text);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
std::string to_json(const PipelineConfig& config);

}  // namespace laundergraph
