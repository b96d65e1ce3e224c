#include "laundergraph/classifier.hpp"

#include <cstdio>
#include <string>

#include "binary_io.hpp"
#include "laundergraph/error.hpp"

namespace laundergraph {

namespace {

using detail::ByteReader;
using detail::ByteWriter;
using detail::fourcc;

constexpr std::string_view kMagic = "LGMD";
constexpr std::uint32_t kHead = fourcc("HEAD");
constexpr std::uint32_t kForest = fourcc("RFST");
constexpr std::uint32_t kSvm = fourcc("SVMW");

void put_doubles(ByteWriter& w, const std::vector<double>& values) {
    w.put(static_cast<std::uint64_t>(values.size()));
    for (double v : values) w.put(v);
}

std::vector<double> get_doubles(ByteReader& r, std::size_t expected) {
    const auto n = r.get<std::uint64_t>();
    if (n != expected) throw FormatError("model: vector length does not match feature width");
    std::vector<double> out(expected);
    for (auto& v : out) v = r.get<double>();
    return out;
}

std::string forest_payload(const RandomForestModel& m) {
    ByteWriter w;
    w.put(static_cast<std::uint32_t>(m.trees.size()));
    w.put(static_cast<std::int32_t>(m.mtry));
    w.put(static_cast<std::int32_t>(m.min_leaf));
    w.put(std::uint32_t{0});
    w.put(m.seed);
    for (const auto& tree : m.trees) {
        w.put(static_cast<std::uint32_t>(tree.nodes.size()));
        for (const auto& node : tree.nodes) {
            w.put(node.feature);
            w.put(node.left);
            w.put(node.right);
            w.put(node.negatives);
            w.put(node.positives);
            w.put(node.threshold);
        }
    }
    return std::move(w.bytes());
}

RandomForestModel read_forest(std::string_view payload, const SchemaTag& schema) {
    ByteReader r(payload);
    RandomForestModel m;
    m.schema = schema;
    const auto n_trees = r.get<std::uint32_t>();
    m.mtry = r.get<std::int32_t>();
    m.min_leaf = r.get<std::int32_t>();
    r.get<std::uint32_t>();
    m.seed = r.get<std::uint64_t>();
    if (n_trees == 0) throw FormatError("model: forest has no trees");
    m.trees.resize(n_trees);
    for (auto& tree : m.trees) {
        const auto count = r.get<std::uint32_t>();
        if (count == 0 || count > r.remaining() / 28) throw FormatError("model: bad tree node count");
        tree.nodes.resize(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            TreeNode& node = tree.nodes[i];
            node.feature = r.get<std::int32_t>();
            node.left = r.get<std::int32_t>();
            node.right = r.get<std::int32_t>();
            node.negatives = r.get<std::uint32_t>();
            node.positives = r.get<std::uint32_t>();
            node.threshold = r.get<double>();
            if (node.feature >= 0) {
                // Children must point forward so traversal always terminates.
                const auto self = static_cast<std::int32_t>(i);
                if (static_cast<std::size_t>(node.feature) >= schema.width || node.left <= self ||
                    node.right <= self || node.left >= static_cast<std::int32_t>(count) ||
                    node.right >= static_cast<std::int32_t>(count)) {
                    throw FormatError("model: malformed tree node");
                }
            }
        }
    }
    return m;
}

std::string svm_payload(const LinearSvmModel& m) {
    ByteWriter w;
    w.put(m.c);
    w.put(m.bias);
    put_doubles(w, m.weights);
    put_doubles(w, m.standardizer.mean);
    put_doubles(w, m.standardizer.stddev);
    return std::move(w.bytes());
}

LinearSvmModel read_svm(std::string_view payload, const SchemaTag& schema) {
    ByteReader r(payload);
    LinearSvmModel m;
    m.schema = schema;
    m.c = r.get<double>();
    m.bias = r.get<double>();
    m.weights = get_doubles(r, schema.width);
    m.standardizer.mean = get_doubles(r, schema.width);
    m.standardizer.stddev = get_doubles(r, schema.width);
    return m;
}

}  // namespace

ModelKind kind_of(const Classifier& model) {
    return std::holds_alternative<RandomForestModel>(model) ? ModelKind::random_forest : ModelKind::linear_svm;
}

const SchemaTag& schema_of(const Classifier& model) {
    return std::visit([](const auto& m) -> const SchemaTag& { return m.schema; }, model);
}

double score(const Classifier& model, std::span<const double> x) {
    if (const auto* rf = std::get_if<RandomForestModel>(&model)) return rf_score(*rf, x);
    return svm_score(std::get<LinearSvmModel>(model), x);
}

Classifier train(const Matrix& x, std::span<const int> y, const TrainConfig& config, SchemaTag schema) {
    if (config.kind == ModelKind::random_forest) return train_random_forest(x, y, config, schema);
    return train_linear_svm(x, y, config, schema);
}

std::string serialize_model(const Classifier& model) {
    const SchemaTag& schema = schema_of(model);
    ByteWriter head;
    head.put(static_cast<std::uint32_t>(kind_of(model)));
    head.put(schema.version);
    head.put(schema.hash);
    head.put(static_cast<std::uint64_t>(schema.width));

    std::vector<detail::Section> sections;
    sections.push_back({kHead, std::move(head.bytes())});
    if (const auto* rf = std::get_if<RandomForestModel>(&model)) {
        sections.push_back({kForest, forest_payload(*rf)});
    } else {
        sections.push_back({kSvm, svm_payload(std::get<LinearSvmModel>(model))});
    }
    return detail::write_container(kMagic, kModelFormatVersion, sections);
}

Classifier deserialize_model(std::string_view bytes, std::optional<SchemaTag> expected) {
    const auto view = detail::read_container(bytes, kMagic, kModelFormatVersion, "model");
    ByteReader head(view.section(kHead));
    const auto kind = head.get<std::uint32_t>();
    SchemaTag schema;
    schema.version = head.get<std::uint32_t>();
    schema.hash = head.get<std::uint64_t>();
    schema.width = static_cast<std::size_t>(head.get<std::uint64_t>());
    if (expected && *expected != schema) {
        throw SchemaMismatchError("model was trained on feature schema version " + std::to_string(schema.version) +
                                  " (width " + std::to_string(schema.width) + "), expected version " +
                                  std::to_string(expected->version) + " (width " +
                                  std::to_string(expected->width) + ")");
    }
    if (schema.width == 0) throw FormatError("model: zero feature width");
    switch (static_cast<ModelKind>(kind)) {
        case ModelKind::random_forest: return read_forest(view.section(kForest), schema);
        case ModelKind::linear_svm: return read_svm(view.section(kSvm), schema);
    }
    throw FormatError("model: unknown model kind " + std::to_string(kind));
}

void save_model(const Classifier& model, const std::filesystem::path& path) {
    detail::write_file(path, serialize_model(model));
}

Classifier load_model(const std::filesystem::path& path, std::optional<SchemaTag> expected) {
    return deserialize_model(detail::read_file(path), expected);
}

std::string model_id(const Classifier& model) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(detail::crc64(serialize_model(model))));
    return std::string(kind_of(model) == ModelKind::random_forest ? "rf-" : "svm-") + hex;
}

}  // namespace laundergraph
