#include "starprod/io.hpp"

#include <fstream>

#include "starprod/errors.hpp"

namespace starprod {

namespace {

using nlohmann::json;

json scalar_to_json(std::complex<double> z, Field field) {
  if (field == Field::Real) return z.real();
  return json::array({z.real(), z.imag()});
}

std::complex<double> scalar_from_json(const json& node, Field field, const std::string& path) {
  if (field == Field::Real) {
    if (!node.is_number()) throw ParseError("expected a number", path);
    return {node.get<double>(), 0.0};
  }
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number())
    throw ParseError("expected a [re, im] pair", path);
  return {node[0].get<double>(), node[1].get<double>()};
}

const json& require_field(const json& doc, const std::string& key, const std::string& path) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError("missing field '" + key + "'", path);
  return *it;
}

ElementVector vector_from_json(const json& node, int dim, Field field, const std::string& path) {
  if (!node.is_array() || static_cast<int>(node.size()) != dim)
    throw ParseError("expected an array of length " + std::to_string(dim), path);
  ElementVector v(dim);
  for (int i = 0; i < dim; ++i)
    v[i] = scalar_from_json(node[i], field, path + "[" + std::to_string(i) + "]");
  return v;
}

json vector_to_json(const ElementVector& v, Field field) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v[i], field));
  return out;
}

Eigen::MatrixXcd matrix_from_json(const json& node, int dim, Field field,
                                  const std::string& path) {
  if (!node.is_array() || static_cast<int>(node.size()) != dim)
    throw ParseError("expected " + std::to_string(dim) + " rows", path);
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = node[r];
    std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw ParseError("expected a row of length " + std::to_string(dim), rp);
    for (int c = 0; c < dim; ++c)
      m(r, c) = scalar_from_json(row[c], field, rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXcd& m, Field field) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c), field));
    out.push_back(row);
  }
  return out;
}

}  // namespace

json tensor_to_json(const ProductTensor& p) {
  json out = json::array();
  for (int a = 0; a < p.dim(); ++a) {
    json block = json::array();
    for (int b = 0; b < p.dim(); ++b) {
      json row = json::array();
      for (int c = 0; c < p.dim(); ++c) row.push_back(scalar_to_json(p.coeff(a, b, c), p.field()));
      block.push_back(row);
    }
    out.push_back(block);
  }
  return out;
}

ProductTensor tensor_from_json(const json& node, int dim, Field field, const std::string& path) {
  if (!node.is_array() || static_cast<int>(node.size()) != dim)
    throw ParseError("expected " + std::to_string(dim) + " component blocks", path);
  ProductTensor p(dim, field);
  for (int a = 0; a < dim; ++a) {
    std::string pa = path + "[" + std::to_string(a) + "]";
    const json& block = node[a];
    if (!block.is_array() || static_cast<int>(block.size()) != dim)
      throw ParseError("expected " + std::to_string(dim) + " rows", pa);
    for (int b = 0; b < dim; ++b) {
      std::string pb = pa + "[" + std::to_string(b) + "]";
      const json& row = block[b];
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw ParseError("expected a row of length " + std::to_string(dim), pb);
      for (int c = 0; c < dim; ++c)
        p.set_coeff(a, b, c,
                    scalar_from_json(row[c], field, pb + "[" + std::to_string(c) + "]"));
    }
  }
  return p;
}

nlohmann::json algebra_to_json(const AlgebraSpec& alg, const ProductCurve* curve,
                               const ProductTensor* product) {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["dim"] = alg.dim;
  doc["field"] = alg.field == Field::Real ? "real" : "complex";
  doc["basisNames"] = alg.basis_names;
  doc["product"] = tensor_to_json(product != nullptr ? *product : alg.bullet);
  doc["unit"] = vector_to_json(alg.unit, alg.field);
  doc["involution"] = {{"matrix", matrix_to_json(alg.involution.matrix, alg.field)},
                       {"conjugates", alg.involution.conjugates}};
  doc["poisson"] = tensor_to_json(alg.poisson);
  doc["bracketMode"] =
      alg.bracket_mode == BracketMode::Bosonic ? "bosonic" : "fermionic-tangent";
  if (curve != nullptr) {
    json coeffs = json::array();
    for (const ProductTensor& c : curve->coefficients()) coeffs.push_back(tensor_to_json(c));
    doc["curve"] = coeffs;
  }
  return doc;
}

ParsedAlgebra parse_algebra_json(const json& doc, double axiom_tol) {
  if (!doc.is_object()) throw ParseError("expected a JSON object", "$");
  int version = require_field(doc, "schemaVersion", "$").get<int>();
  if (version != kSchemaVersion)
    throw VersionError("unsupported schemaVersion " + std::to_string(version));

  ParsedAlgebra out;
  AlgebraSpec& alg = out.spec;
  alg.dim = require_field(doc, "dim", "$").get<int>();
  if (alg.dim <= 0) throw ParseError("dim must be positive", "dim");

  std::string field_name = require_field(doc, "field", "$").get<std::string>();
  if (field_name == "real") {
    alg.field = Field::Real;
  } else if (field_name == "complex") {
    alg.field = Field::Complex;
  } else {
    throw ParseError("field must be \"real\" or \"complex\"", "field");
  }

  if (doc.contains("basisNames")) {
    alg.basis_names = doc["basisNames"].get<std::vector<std::string>>();
    if (static_cast<int>(alg.basis_names.size()) != alg.dim)
      throw ParseError("basisNames must have one entry per basis element", "basisNames");
  }

  out.product = tensor_from_json(require_field(doc, "product", "$"), alg.dim, alg.field,
                                 "product");
  alg.unit = vector_from_json(require_field(doc, "unit", "$"), alg.dim, alg.field, "unit");

  const json& invol = require_field(doc, "involution", "$");
  alg.involution.matrix =
      matrix_from_json(require_field(invol, "matrix", "involution"), alg.dim, alg.field,
                       "involution.matrix");
  alg.involution.conjugates = invol.value("conjugates", true);

  alg.poisson = tensor_from_json(require_field(doc, "poisson", "$"), alg.dim, alg.field,
                                 "poisson");

  std::string mode = doc.value("bracketMode", std::string("bosonic"));
  if (mode == "bosonic") {
    alg.bracket_mode = BracketMode::Bosonic;
  } else if (mode == "fermionic-tangent") {
    alg.bracket_mode = BracketMode::FermionicTangent;
  } else {
    throw ParseError("bracketMode must be \"bosonic\" or \"fermionic-tangent\"", "bracketMode");
  }

  if (doc.contains("curve")) {
    const json& cnode = doc["curve"];
    if (!cnode.is_array() || cnode.empty())
      throw ParseError("curve must be a nonempty array of coefficient tensors", "curve");
    std::vector<ProductTensor> coeffs;
    for (std::size_t m = 0; m < cnode.size(); ++m)
      coeffs.push_back(tensor_from_json(cnode[m], alg.dim, alg.field,
                                        "curve[" + std::to_string(m) + "]"));
    out.curve = ProductCurve(alg.dim, alg.field, std::move(coeffs));
  }

  // The base product is the curve at h = 0 when a curve is present;
  // otherwise the file's product tensor doubles as the base product.
  alg.bullet = out.curve ? out.curve->eval(0.0) : out.product;

  // Validation: failures are warnings, never load errors.
  std::vector<std::string> base = validate_algebra(alg, axiom_tol);
  out.warnings.insert(out.warnings.end(), base.begin(), base.end());
  AxiomReport product_report = check_star_axioms(alg, out.product);
  for (const auto& [name, c] : product_report.checks)
    if (c.residual >= axiom_tol)
      out.warnings.push_back("product fails " + name + " (residual " +
                             std::to_string(c.residual) + ", witness " +
                             std::to_string(c.witness[0]) + "," + std::to_string(c.witness[1]) +
                             "," + std::to_string(c.witness[2]) + ")");
  if (out.curve) {
    for (double h : {0.0, 0.3, 1.0, 2.0}) {
      AxiomReport r = check_star_axioms(alg, out.curve->eval(h));
      for (const auto& [name, c] : r.checks)
        if (c.residual >= axiom_tol)
          out.warnings.push_back("curve at h=" + std::to_string(h) + " fails " + name +
                                 " (residual " + std::to_string(c.residual) + ", witness " +
                                 std::to_string(c.witness[0]) + "," +
                                 std::to_string(c.witness[1]) + "," +
                                 std::to_string(c.witness[2]) + ")");
    }
  }
  return out;
}

ParsedAlgebra parse_algebra_file(const std::filesystem::path& path, double axiom_tol) {
  return parse_algebra_json(read_json_file(path), axiom_tol);
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw NumericError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << "\n";
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file " + path.string(), "$");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what(), path.string());
  }
  return doc;
}

json trajectory_to_json(const TrajectoryRecord& record, int record_every) {
  if (record_every < 1) record_every = 1;
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["status"] = to_string(record.status);
  if (!record.message.empty()) doc["message"] = record.message;
  json samples = json::array();
  for (std::size_t i = 0; i < record.samples.size(); ++i) {
    if (i % static_cast<std::size_t>(record_every) != 0 && i + 1 != record.samples.size())
      continue;
    const TrajectorySample& s = record.samples[i];
    json node;
    node["h"] = s.h;
    node["constraintDrift"] = s.constraint_drift;
    node["multiplierNorm"] = s.multiplier_norm;
    node["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
    node["v"] = std::vector<double>(s.v.data(), s.v.data() + s.v.size());
    samples.push_back(node);
  }
  doc["samples"] = samples;
  return doc;
}

bool RunReport::pass() const {
  for (const Verdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

nlohmann::json RunReport::to_json() const {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["command"] = command;
  doc["config"] = config;
  doc["results"] = results;
  json vs = json::array();
  for (const Verdict& v : verdicts)
    vs.push_back({{"name", v.name}, {"pass", v.pass}, {"value", v.value},
                  {"threshold", v.threshold}});
  doc["verdicts"] = vs;
  doc["pass"] = pass();
  doc["timings"] = timings;
  return doc;
}

}  // namespace starprod
