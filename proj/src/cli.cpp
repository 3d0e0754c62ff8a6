#include "starprod/cli.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "starprod/clifford.hpp"
#include "starprod/constraint.hpp"
#include "starprod/errors.hpp"
#include "starprod/geodesic.hpp"
#include "starprod/io.hpp"

namespace starprod {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << v;
  return os.str();
}

/// Algebra + optional curve resolved from --family/--algebra flags.
struct Source {
  AlgebraSpec spec;
  std::optional<ProductCurve> curve;
  ProductTensor product;
  std::vector<std::string> warnings;
  std::string description;
};

Source resolve_source(const std::string& family, int n, const std::string& variant,
                      const std::string& algebra_path, double axiom_tol) {
  if (!algebra_path.empty()) {
    ParsedAlgebra parsed = parse_algebra_file(algebra_path, axiom_tol);
    return {parsed.spec, parsed.curve, parsed.product, parsed.warnings,
            "file:" + algebra_path};
  }
  if (family != "clifford")
    throw ConfigError("unknown family '" + family + "' (supported: clifford)");
  CliffordAlgebra cliff = clifford_algebra(n);
  if (variant == "generated") {
    return {cliff.spec, cliff.curve, cliff.spec.bullet, {},
            "clifford n=" + std::to_string(n)};
  }
  if (variant != "tabulated")
    throw ConfigError("unknown variant '" + variant + "' (generated|tabulated)");
  CliffordAlgebra tab = clifford_tabulated_family(n);
  return {tab.spec, tab.curve, tab.spec.bullet, {},
          "clifford n=" + std::to_string(n) + " (tabulated)"};
}

ConstraintFlags parse_constraint_flags(const std::vector<std::string>& names) {
  if (names.empty()) return {true, false, false};
  ConstraintFlags flags{false, false, false};
  for (const std::string& name : names) {
    if (name == "assoc" || name == "associativity") {
      flags.associativity = true;
    } else if (name == "unit") {
      flags.unit = true;
    } else if (name == "involution") {
      flags.involution = true;
    } else {
      throw ConfigError("unknown constraint '" + name + "' (assoc|unit|involution)");
    }
  }
  return flags;
}

json axiom_report_json(const AxiomReport& report) {
  json out = json::object();
  for (const auto& [name, c] : report.checks)
    out[name] = {{"residual", c.residual},
                 {"witness", {c.witness[0], c.witness[1], c.witness[2]}}};
  return out;
}

void emit_report(const RunReport& report, const std::string& out_path, std::ostream& os) {
  for (const Verdict& v : report.verdicts)
    os << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.name
       << ": value=" << format_value(v.value) << " threshold=" << format_value(v.threshold)
       << "\n";
  std::size_t passed = 0;
  for (const Verdict& v : report.verdicts) passed += v.pass ? 1 : 0;
  os << "verdicts: " << passed << "/" << report.verdicts.size() << " passed\n";
  if (!out_path.empty()) write_json_file(out_path, report.to_json());
}

struct SampleVerification {
  double h = 0.0;
  MultiplierReport paper;
  MultiplierReport full;
  bool has_paper = false;
};

SampleVerification verify_sample(const QuadraticConstraintSystem& system,
                                 const ProductCurve& curve, double h, double rank_tol,
                                 double tol) {
  SampleVerification out;
  out.h = h;
  Eigen::VectorXd x = curve.eval(h).ambient_coordinates();
  Eigen::VectorXd xdd = curve.eval(h, 2).ambient_coordinates();
  if (system.associator_block() != nullptr) {
    out.paper = verify_geodesic_point(system, x, xdd, MultiplierOperatorKind::PaperTwoTerm,
                                      rank_tol, tol);
    out.has_paper = true;
  }
  out.full = verify_geodesic_point(system, x, xdd, MultiplierOperatorKind::FullJacobian,
                                   rank_tol, tol);
  return out;
}

json sample_verification_json(const SampleVerification& s) {
  json node;
  node["h"] = s.h;
  if (s.has_paper)
    node["paperTwoTerm"] = {{"relativeResidual", s.paper.relative_residual},
                            {"rank", s.paper.rank},
                            {"multiplierNorm", s.paper.lambda.norm()},
                            {"consistent", s.paper.consistent}};
  node["fullJacobian"] = {{"relativeResidual", s.full.relative_residual},
                          {"rank", s.full.rank},
                          {"multiplierNorm", s.full.lambda.norm()},
                          {"consistent", s.full.consistent}};
  return node;
}

int finish(const RunReport& report, const std::string& out_path, std::ostream& os) {
  emit_report(report, out_path, os);
  return report.pass() ? kExitPass : kExitVerdictFail;
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int cmd_gen_clifford(int n, double h, const std::string& variant, const std::string& out_path,
                     std::ostream& os) {
  Source src = resolve_source("clifford", n, variant, "", 1e-12);
  ProductTensor at_h = src.curve->eval(h);
  json doc = algebra_to_json(src.spec, &*src.curve, &at_h);
  doc["generatedAt"] = {{"h", h}, {"variant", variant}};
  write_json_file(out_path, doc);
  os << "wrote " << src.description << " (dim " << src.spec.dim << ", product at h=" << h
     << ") to " << out_path << "\n";
  return kExitPass;
}

int cmd_check_axioms(const std::string& path, double tol, const std::string& out_path,
                     std::ostream& os) {
  Clock::time_point start = Clock::now();
  ParsedAlgebra parsed = parse_algebra_file(path, tol);

  RunReport report;
  report.command = "check-axioms";
  report.config = {{"algebra", path}, {"tol", tol}};

  for (const std::string& w : parsed.warnings) os << "warning: " << w << "\n";
  report.results["warnings"] = parsed.warnings;

  AxiomReport product_report = check_star_axioms(parsed.spec, parsed.product);
  report.results["product"] = axiom_report_json(product_report);
  for (const auto& [name, c] : product_report.checks)
    report.verdicts.push_back({"product " + name, c.residual < tol, c.residual, tol});

  if (parsed.spec.bracket_mode == BracketMode::Bosonic) {
    AxiomReport bracket_report = check_poisson_axioms(parsed.spec);
    report.results["bracket"] = axiom_report_json(bracket_report);
    for (const auto& [name, c] : bracket_report.checks)
      report.verdicts.push_back({"bracket " + name, c.residual < tol, c.residual, tol});
  }

  if (parsed.curve) {
    json curve_results = json::array();
    for (double h : {0.0, 0.3, 1.0, 2.0}) {
      AxiomReport r = check_star_axioms(parsed.spec, parsed.curve->eval(h));
      json node = axiom_report_json(r);
      node["h"] = h;
      curve_results.push_back(node);
      for (const auto& [name, c] : r.checks)
        report.verdicts.push_back(
            {"curve h=" + std::to_string(h) + " " + name, c.residual < tol, c.residual, tol});
    }
    report.results["curve"] = curve_results;
  }

  report.timings["totalSeconds"] = seconds_since(start);
  return finish(report, out_path, os);
}

int cmd_associator(const std::string& path, double h, double tol, const std::string& out_path,
                   std::ostream& os) {
  Clock::time_point start = Clock::now();
  ParsedAlgebra parsed = parse_algebra_file(path, tol);
  ProductTensor p = parsed.curve ? parsed.curve->eval(h) : parsed.product;

  DenseTensor assoc = associator_form(p, p);
  double worst = 0.0;
  std::array<int, 4> witness{-1, -1, -1, -1};
  const int n = p.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          double m = std::abs(assoc.at({static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                                        static_cast<std::size_t>(d),
                                        static_cast<std::size_t>(e)}));
          if (m > worst) {
            worst = m;
            witness = {a, b, d, e};
          }
        }

  RunReport report;
  report.command = "associator";
  report.config = {{"algebra", path}, {"h", h}, {"tol", tol}};
  report.results = {{"maxAbs", worst},
                    {"witness", {witness[0], witness[1], witness[2], witness[3]}}};
  report.verdicts.push_back({"associativity", worst < tol, worst, tol});
  report.timings["totalSeconds"] = seconds_since(start);
  os << "max |associator| = " << format_value(worst) << " at (component " << witness[0]
     << "; arguments " << witness[1] << "," << witness[2] << "," << witness[3] << ")\n";
  return finish(report, out_path, os);
}

int cmd_verify_geodesic(const std::string& family, int n, const std::string& variant,
                        const std::string& algebra_path, std::vector<double> samples,
                        const std::string& op_name, double rank_tol, double tol,
                        const std::vector<std::string>& constraints,
                        const std::string& out_path, std::ostream& os) {
  Clock::time_point start = Clock::now();
  Source src = resolve_source(family, n, variant, algebra_path, 1e-12);
  if (!src.curve) throw ConfigError("verify-geodesic requires a product curve");
  bool gate_on_paper = op_name == "paper" || op_name == "two-term";
  if (!gate_on_paper && op_name != "full")
    throw ConfigError("unknown operator '" + op_name + "' (paper|full)");

  QuadraticConstraintSystem system =
      build_constraint_system(src.spec, parse_constraint_flags(constraints));

  RunReport report;
  report.command = "verify-geodesic";
  report.config = {{"source", src.description}, {"samples", samples},
                   {"operator", gate_on_paper ? "paper" : "full"},
                   {"rankTol", rank_tol},      {"tol", tol},
                   {"constraints", constraints.empty()
                                       ? std::vector<std::string>{"assoc"}
                                       : constraints}};
  json sample_results = json::array();
  for (double h : samples) {
    Clock::time_point sample_start = Clock::now();
    SampleVerification s = verify_sample(system, *src.curve, h, rank_tol, tol);
    json node = sample_verification_json(s);
    sample_results.push_back(node);
    const MultiplierReport& gate = gate_on_paper ? s.paper : s.full;
    if (gate_on_paper && !s.has_paper)
      throw ConfigError("the paper operator requires an associativity constraint block");
    report.verdicts.push_back({"sample h=" + std::to_string(h) + " (" +
                                   to_string(gate.operator_kind) + ")",
                               gate.consistent, gate.relative_residual, tol});
    os << "h=" << h << ": ";
    if (s.has_paper)
      os << "paper-two-term rel=" << format_value(s.paper.relative_residual)
         << " rank=" << s.paper.rank << " | ";
    os << "full-jacobian rel=" << format_value(s.full.relative_residual)
       << " rank=" << s.full.rank << "\n";
    report.timings["sample h=" + std::to_string(h)] = seconds_since(sample_start);
  }
  report.results["samples"] = sample_results;
  report.timings["totalSeconds"] = seconds_since(start);
  return finish(report, out_path, os);
}

int cmd_sweep(const std::string& family, int n, const std::string& variant,
              const std::string& algebra_path, double h_min, double h_max, int count,
              const std::string& op_name, double rank_tol, double tol,
              const std::string& out_path, std::ostream& os) {
  Clock::time_point start = Clock::now();
  if (count < 1) throw ConfigError("sweep requires count >= 1");
  Source src = resolve_source(family, n, variant, algebra_path, 1e-12);
  if (!src.curve) throw ConfigError("sweep requires a product curve");
  bool gate_on_paper = op_name == "paper" || op_name == "two-term";
  if (!gate_on_paper && op_name != "full")
    throw ConfigError("unknown operator '" + op_name + "' (paper|full)");

  QuadraticConstraintSystem system = build_constraint_system(src.spec, {true, false, false});

  std::vector<double> samples(count);
  for (int i = 0; i < count; ++i)
    samples[i] = count == 1 ? h_min : h_min + (h_max - h_min) * i / (count - 1);

  // Independent samples fan out; output is assembled in input order.
  std::vector<std::future<SampleVerification>> futures;
  futures.reserve(samples.size());
  for (double h : samples)
    futures.push_back(std::async(std::launch::async, [&, h] {
      return verify_sample(system, *src.curve, h, rank_tol, tol);
    }));

  RunReport report;
  report.command = "sweep";
  report.config = {{"source", src.description}, {"hMin", h_min}, {"hMax", h_max},
                   {"count", count},            {"operator", gate_on_paper ? "paper" : "full"},
                   {"rankTol", rank_tol},       {"tol", tol}};
  json sample_results = json::array();
  for (std::future<SampleVerification>& f : futures) {
    SampleVerification s = f.get();
    sample_results.push_back(sample_verification_json(s));
    const MultiplierReport& gate = gate_on_paper ? s.paper : s.full;
    report.verdicts.push_back({"sample h=" + std::to_string(s.h) + " (" +
                                   to_string(gate.operator_kind) + ")",
                               gate.consistent, gate.relative_residual, tol});
  }
  report.results["samples"] = sample_results;
  report.timings["totalSeconds"] = seconds_since(start);
  return finish(report, out_path, os);
}

int cmd_integrate(const std::string& family, int n, const std::string& variant,
                  const std::string& algebra_path, const std::vector<std::string>& constraints,
                  double h_max, double step, int project_every,
                  const std::vector<double>& tangent_factor, double projection_tol,
                  double rank_tol, double drift_tol, double energy_tol, bool compare_curve,
                  double distance_tol, int record_every, const std::string& out_path,
                  const std::string& report_path, std::ostream& os) {
  Clock::time_point start = Clock::now();
  Source src = resolve_source(family, n, variant, algebra_path, 1e-12);

  QuadraticConstraintSystem system =
      build_constraint_system(src.spec, parse_constraint_flags(constraints));

  std::optional<std::complex<double>> factor;
  if (!tangent_factor.empty()) {
    if (tangent_factor.size() > 2)
      throw ConfigError("--tangent-factor takes one or two comma-separated numbers");
    factor = std::complex<double>(tangent_factor[0],
                                  tangent_factor.size() > 1 ? tangent_factor[1] : 0.0);
  }

  IntegratorConfig cfg;
  cfg.step_size = step;
  cfg.h_max = h_max;
  cfg.projection_tol = projection_tol;
  cfg.rank_tol = rank_tol;
  cfg.project_every = project_every;
  if (factor) cfg.tangent_factor = *factor;
  cfg.validate();

  GeodesicState state0 = quantum_product_initial_data(system, src.spec, factor);
  TrajectoryRecord record = integrate_geodesic(system, state0, cfg);

  RunReport report;
  report.command = "integrate";
  report.config = {{"source", src.description},
                   {"constraints", constraints.empty() ? std::vector<std::string>{"assoc"}
                                                       : constraints},
                   {"hMax", h_max},
                   {"step", step},
                   {"projectEvery", project_every},
                   {"projectionTol", projection_tol},
                   {"rankTol", rank_tol},
                   {"recordEvery", record_every}};

  double max_drift = 0.0;
  for (const TrajectorySample& s : record.samples)
    max_drift = std::max(max_drift, s.constraint_drift);
  double v0 = record.samples.empty() ? 0.0 : record.samples.front().v.norm();
  double energy_dev = 0.0;
  if (v0 > 0.0)
    for (const TrajectorySample& s : record.samples)
      energy_dev = std::max(energy_dev, std::abs(s.v.norm() - v0) / v0);

  report.results["status"] = to_string(record.status);
  report.results["steps"] = record.samples.empty() ? 0 : record.samples.size() - 1;
  report.results["maxConstraintDrift"] = max_drift;
  report.results["tangentNormRelativeDeviation"] = energy_dev;

  report.verdicts.push_back({"termination completed",
                             record.status == TerminationStatus::Completed,
                             record.status == TerminationStatus::Completed ? 0.0 : 1.0, 0.5});
  report.verdicts.push_back({"constraint drift", max_drift <= drift_tol, max_drift, drift_tol});
  report.verdicts.push_back(
      {"tangent norm conservation", energy_dev <= energy_tol, energy_dev, energy_tol});

  if (src.curve && !record.samples.empty()) {
    const TrajectorySample& last = record.samples.back();
    double distance =
        (last.x - src.curve->eval(last.h).ambient_coordinates()).norm();
    report.results["distanceToCurveAtEnd"] = distance;
    os << "distance to curve at h=" << last.h << ": " << format_value(distance) << "\n";
    if (compare_curve)
      report.verdicts.push_back(
          {"endpoint distance to curve", distance < distance_tol, distance, distance_tol});
  }

  if (!out_path.empty()) write_json_file(out_path, trajectory_to_json(record, record_every));
  report.timings["totalSeconds"] = seconds_since(start);
  return finish(report, report_path, os);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"geodesics on the manifold of associative star products"};
  app.require_subcommand(1);
  // Subcommands use --h as a parameter name, so keep help long-form only.
  app.option_defaults()->ignore_case(false);
  app.set_help_flag("--help", "print help");

  // gen-clifford
  auto* gen = app.add_subcommand("gen-clifford", "generate a Clifford algebra file");
  int gen_n = 2;
  double gen_h = 0.0;
  std::string gen_variant = "generated";
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of generators (1..8)")->required();
  gen->add_option("--h", gen_h, "evaluation point for the file's product tensor");
  gen->add_option("--variant", gen_variant, "generated|tabulated")
      ->check(CLI::IsMember({"generated", "tabulated"}));
  gen->add_option("--out", gen_out, "output file")->required();

  // check-axioms
  auto* check = app.add_subcommand("check-axioms", "validate an algebra file");
  std::string check_path, check_out;
  double check_tol = 1e-12;
  check->add_option("file", check_path, "algebra file")->required();
  check->add_option("--tol", check_tol, "axiom tolerance")->check(CLI::PositiveNumber);
  check->add_option("--out", check_out, "machine-readable report file");

  // associator
  auto* assoc = app.add_subcommand("associator", "associativity residual of a product");
  std::string assoc_path, assoc_out;
  double assoc_h = 0.0, assoc_tol = 1e-12;
  assoc->add_option("file", assoc_path, "algebra file")->required();
  assoc->add_option("--h", assoc_h, "curve evaluation point");
  assoc->add_option("--tol", assoc_tol, "associativity tolerance")->check(CLI::PositiveNumber);
  assoc->add_option("--out", assoc_out, "machine-readable report file");

  // verify-geodesic
  auto* verify = app.add_subcommand("verify-geodesic",
                                    "multiplier consistency of a product curve");
  std::string v_family = "clifford", v_variant = "generated", v_algebra, v_out;
  std::string v_operator = "paper";
  int v_n = 2;
  double v_rank_tol = kDefaultRankTol, v_tol = 1e-10;
  std::vector<double> v_samples;
  std::vector<std::string> v_constraints;
  verify->add_option("--family", v_family, "curve family (clifford)");
  verify->add_option("--n", v_n, "Clifford generator count");
  verify->add_option("--variant", v_variant, "generated|tabulated")
      ->check(CLI::IsMember({"generated", "tabulated"}));
  verify->add_option("--algebra", v_algebra, "algebra file with a curve");
  verify->add_option("--samples", v_samples, "curve parameters to test")
      ->required()
      ->delimiter(',');
  verify->add_option("--operator", v_operator, "verdict operator: paper|full");
  verify->add_option("--rank-tol", v_rank_tol, "relative singular value cutoff")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tol", v_tol, "consistency threshold on the relative residual")
      ->check(CLI::PositiveNumber);
  verify->add_option("--constraints", v_constraints, "assoc,unit,involution")->delimiter(',');
  verify->add_option("--out", v_out, "machine-readable report file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "verify many parameters in parallel");
  std::string s_family = "clifford", s_variant = "generated", s_algebra, s_out;
  std::string s_operator = "paper";
  int s_n = 2, s_count = 11;
  double s_hmin = 0.0, s_hmax = 1.0, s_rank_tol = kDefaultRankTol, s_tol = 1e-10;
  sweep->add_option("--family", s_family, "curve family (clifford)");
  sweep->add_option("--n", s_n, "Clifford generator count");
  sweep->add_option("--variant", s_variant, "generated|tabulated")
      ->check(CLI::IsMember({"generated", "tabulated"}));
  sweep->add_option("--algebra", s_algebra, "algebra file with a curve");
  sweep->add_option("--h-min", s_hmin, "first sample");
  sweep->add_option("--h-max", s_hmax, "last sample")->required();
  sweep->add_option("--count", s_count, "number of samples")->check(CLI::PositiveNumber);
  sweep->add_option("--operator", s_operator, "verdict operator: paper|full");
  sweep->add_option("--rank-tol", s_rank_tol, "relative singular value cutoff")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--tol", s_tol, "consistency threshold")->check(CLI::PositiveNumber);
  sweep->add_option("--out", s_out, "machine-readable report file");

  // integrate
  auto* integ = app.add_subcommand("integrate", "integrate the quantization geodesic");
  std::string i_family = "clifford", i_variant = "generated", i_algebra, i_out, i_report;
  std::vector<std::string> i_constraints;
  std::vector<double> i_factor;
  int i_n = 2, i_project_every = 1, i_record_every = 1;
  double i_hmax = 1.0, i_step = 1e-3, i_proj_tol = 1e-10, i_rank_tol = kDefaultRankTol;
  double i_drift_tol = 1e-8, i_energy_tol = 1e-6, i_distance_tol = 1e-3;
  bool i_compare = false;
  integ->add_option("--family", i_family, "curve family (clifford)");
  integ->add_option("--n", i_n, "Clifford generator count");
  integ->add_option("--variant", i_variant, "generated|tabulated")
      ->check(CLI::IsMember({"generated", "tabulated"}));
  integ->add_option("--algebra", i_algebra, "algebra file");
  integ->add_option("--constraints", i_constraints, "assoc,unit,involution")->delimiter(',');
  integ->add_option("--h-max", i_hmax, "integration span")->required();
  integ->add_option("--step", i_step, "step size")->required()->check(CLI::PositiveNumber);
  integ->add_option("--project-every", i_project_every, "projection cadence in steps (0 = off)");
  integ->add_option("--tangent-factor", i_factor,
                    "initial tangent factor re[,im] applied to the bracket")
      ->delimiter(',');
  integ->add_option("--projection-tol", i_proj_tol, "projection tolerance")
      ->check(CLI::PositiveNumber);
  integ->add_option("--rank-tol", i_rank_tol, "relative singular value cutoff")
      ->check(CLI::PositiveNumber);
  integ->add_option("--drift-tol", i_drift_tol, "constraint drift verdict threshold")
      ->check(CLI::PositiveNumber);
  integ->add_option("--energy-tol", i_energy_tol,
                    "tangent norm conservation verdict threshold")
      ->check(CLI::PositiveNumber);
  integ->add_flag("--compare-curve", i_compare,
                  "assert the endpoint distance to the source curve");
  integ->add_option("--distance-tol", i_distance_tol, "endpoint distance threshold")
      ->check(CLI::PositiveNumber);
  integ->add_option("--record-every", i_record_every, "sample thinning for the trajectory file")
      ->check(CLI::PositiveNumber);
  integ->add_option("--out", i_out, "trajectory file");
  integ->add_option("--report", i_report, "machine-readable report file");

  std::vector<std::string> argv_copy = args;
  try {
    std::vector<const char*> argv;
    argv.push_back("starprod");
    for (const std::string& a : argv_copy) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_clifford(gen_n, gen_h, gen_variant, gen_out, out);
    if (check->parsed()) return cmd_check_axioms(check_path, check_tol, check_out, out);
    if (assoc->parsed()) return cmd_associator(assoc_path, assoc_h, assoc_tol, assoc_out, out);
    if (verify->parsed())
      return cmd_verify_geodesic(v_family, v_n, v_variant, v_algebra, v_samples, v_operator,
                                 v_rank_tol, v_tol, v_constraints, v_out, out);
    if (sweep->parsed())
      return cmd_sweep(s_family, s_n, s_variant, s_algebra, s_hmin, s_hmax, s_count, s_operator,
                       s_rank_tol, s_tol, s_out, out);
    if (integ->parsed())
      return cmd_integrate(i_family, i_n, i_variant, i_algebra, i_constraints, i_hmax, i_step,
                           i_project_every, i_factor, i_proj_tol, i_rank_tol, i_drift_tol,
                           i_energy_tol, i_compare, i_distance_tol, i_record_every, i_out,
                           i_report, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "no subcommand given\n";
  return kExitUsage;
}

}  // namespace starprod
