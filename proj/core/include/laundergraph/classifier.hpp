#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "laundergraph/linear_svm.hpp"
#include "laundergraph/random_forest.hpp"

namespace laundergraph {

inline constexpr std::uint32_t kModelFormatVersion = 1;

using Classifier = std::variant<RandomForestModel, LinearSvmModel>;

ModelKind kind_of(const Classifier& model);
const SchemaTag& schema_of(const Classifier& model);

/// RF vote fraction or SVM decision value.
double score(const Classifier& model, std::span<const double> x);

/// Dispatches on config.kind.
Classifier train(const Matrix& x, std::span<const int> y, const TrainConfig& config,
                 SchemaTag schema = SchemaTag{});

/// Binary container "LGMD": version, kind, schema tag, model tables, CRC-64.
std::string serialize_model(const Classifier& model);
/// Throws ChecksumError/VersionError/FormatError, or SchemaMismatchError when
/// `expected` is given and differs from the stored tag.
Classifier deserialize_model(std::string_view bytes, std::optional<SchemaTag> expected = std::nullopt);

void save_model(const Classifier& model, const std::filesystem::path& path);
Classifier load_model(const std::filesystem::path& path, std::optional<SchemaTag> expected = std::nullopt);

/// Short stable identifier: kind plus checksum of the serialized model.
std::string model_id(const Classifier& model);

}  // namespace laundergraph
