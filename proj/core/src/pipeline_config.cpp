#include "laundergraph/pipeline_config.hpp"

#include <fstream>
#include <iterator>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "laundergraph/error.hpp"

namespace laundergraph {

namespace {

using nlohmann::json;

// Single field table drives both directions of the JSON mapping.
template <typename Visitor>
void visit_fields(PipelineConfig& c, Visitor&& v) {
    v("k", c.k);
    v("n_max", c.n_max);
    v("w_min", c.w_min);
    v("theta", c.theta);
    v("component_shortcut", c.component_shortcut);
    v("bin_width", c.bin_width);
    v("burst_c", c.burst_c);
    v("model_kind", c.model_kind);
    v("n_trees", c.n_trees);
    v("mtry", c.mtry);
    v("min_leaf", c.min_leaf);
    v("c", c.c);
    v("max_epochs", c.max_epochs);
    v("tolerance", c.tolerance);
    v("seed", c.seed);
    v("tau", c.tau);
    v("beta", c.beta);
    v("negative_sample_size", c.negative_sample_size);
    v("folds", c.folds);
    v("train_fraction", c.train_fraction);
    v("window_size", c.window_size);
    v("window_seconds", c.window_seconds);
    v("reports_path", c.reports_path);
    v("snapshot_path", c.snapshot_path);
    v("model_path", c.model_path);
    v("ground_truth_path", c.ground_truth_path);
    v("output_path", c.output_path);
    v("workers", c.workers);
}

}  // namespace

ExtractionParams PipelineConfig::extraction() const {
    return ExtractionParams::make(k, n_max, w_min, component_shortcut);
}

FeatureOptions PipelineConfig::features() const { return {bin_width, burst_c}; }

TrainConfig PipelineConfig::training() const {
    TrainConfig t;
    t.kind = parse_model_kind(model_kind);
    t.n_trees = n_trees;
    t.mtry = mtry;
    t.min_leaf = min_leaf;
    t.c = c;
    t.max_epochs = max_epochs;
    t.tolerance = tolerance;
    t.seed = seed;
    t.workers = workers;
    return t;
}

LabelingConfig PipelineConfig::labeling() const {
    LabelingConfig l;
    l.negative_sample_size = negative_sample_size;
    l.seed = seed;
    l.w_min = extraction().min_weight();
    return l;
}

EvalConfig PipelineConfig::evaluation() const {
    EvalConfig e;
    e.folds = folds;
    e.train_fraction = train_fraction;
    e.seed = seed;
    e.workers = workers;
    return e;
}

void PipelineConfig::validate() const {
    extraction().validate();
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    if (bin_width <= 0) throw std::invalid_argument("bin_width must be positive");
    if (!(burst_c > 0.0)) throw std::invalid_argument("burst_c must be positive");
    const TrainConfig t = training();
    t.validate();
    if (t.kind == ModelKind::random_forest && !(tau >= 0.0 && tau <= 1.0)) {
        throw std::invalid_argument("tau must lie in [0, 1] for random forest models");
    }
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (negative_sample_size == 0) throw std::invalid_argument("negative_sample_size must be positive");
    evaluation().validate();
    if (window_size == 0) throw std::invalid_argument("window_size must be positive");
    if (window_seconds <= 0) throw std::invalid_argument("window_seconds must be positive");
}

PipelineConfig parse_pipeline_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError("config: top level must be an object");
    PipelineConfig config;
    std::size_t matched = 0;
    visit_fields(config, [&](const char* name, auto& field) {
        auto it = doc.find(name);
        if (it == doc.end()) return;
        ++matched;
        try {
            using T = std::remove_reference_t<decltype(field)>;
            if constexpr (std::is_same_v<T, std::vector<std::size_t>> || std::is_same_v<T, std::vector<double>>) {
                // A scalar applies to every round.
                field = it->is_array() ? it->template get<T>() : T{it->template get<typename T::value_type>()};
            } else {
                field = it->template get<T>();
            }
        } catch (const json::exception& e) {
            throw FormatError(std::string("config: field '") + name + "': " + e.what());
        }
    });
    if (matched != doc.size()) {
        PipelineConfig probe;
        for (const auto& [key, value] : doc.items()) {
            bool known = false;
            visit_fields(probe, [&](const char* name, auto&) { known = known || key == name; });
            if (!known) throw FormatError("config: unknown key '" + key + "'");
        }
    }
    return config;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path.string() + "'");
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_pipeline_config(text);
}

std::string to_json(const PipelineConfig& config) {
    json doc = json::object();
    PipelineConfig copy = config;
    visit_fields(copy, [&](const char* name, auto& field) { doc[name] = field; });
    return doc.dump(2) + "\n";
}

}  // namespace laundergraph
