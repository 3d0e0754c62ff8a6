#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "starprod/algebra.hpp"
#include "starprod/geodesic.hpp"

namespace starprod {

inline constexpr int kSchemaVersion = 1;

/// In-memory form of an algebra file: the algebra data, the product
/// tensor under test (the base product unless the file says otherwise),
/// an optional product curve, and any validation warnings gathered at
/// load time. Validation failures do not abort the load.
struct ParsedAlgebra {
  AlgebraSpec spec;
  ProductTensor product;
  std::optional<ProductCurve> curve;
  std::vector<std::string> warnings;
};

/// Reads and validates an algebra file. Shape errors raise ParseError
/// with a path into the document; unsupported versions raise
/// VersionError. Axiom residuals above axiom_tol become warnings.
ParsedAlgebra parse_algebra_file(const std::filesystem::path& path, double axiom_tol = 1e-12);
ParsedAlgebra parse_algebra_json(const nlohmann::json& doc, double axiom_tol = 1e-12);

/// Serializes the algebra (with optional curve and an optional product
/// tensor distinct from the base product) in the schema parsed above.
nlohmann::json algebra_to_json(const AlgebraSpec& alg, const ProductCurve* curve = nullptr,
                               const ProductTensor* product = nullptr);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Nested-array form of a rank-3 product tensor (complex entries as
/// [re, im] pairs).
nlohmann::json tensor_to_json(const ProductTensor& p);
ProductTensor tensor_from_json(const nlohmann::json& node, int dim, Field field,
                               const std::string& path);

nlohmann::json trajectory_to_json(const TrajectoryRecord& record, int record_every = 1);

/// One pass/fail decision derived from a recorded value and threshold.
struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
};

/// Machine-readable outcome of one CLI command. Everything except the
/// timings section is a deterministic function of the inputs.
struct RunReport {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::vector<Verdict> verdicts;
  nlohmann::json timings = nlohmann::json::object();

  bool pass() const;
  nlohmann::json to_json() const;
};

}  // namespace starprod
