#ifndef DETVEC_CLI_HPP
#define DETVEC_CLI_HPP

// Scenario-driven front end. A scenario is a YAML document:
//
//   schema: 1
//   id: un2
//   seed: 42
//   group: U(2)                      # or {family: U, param: 2}
//   chart: {kind: euclidean, dim: 4} # default: the group's representation space
//   fields:
//     - pair: un_pair(2)             # adds un_pair(2).X and un_pair(2).X1
//     - {name: Z, dsl: "Kfield()"}
//   plan: {domain: ball, radius: 3, count: 100}
//   tolerances: {preserve: 1e-8, violate: 1e-4}
//   verify:
//     - {map: identity, expect: Preserves}
//     - {map: {linear: [[...], ...]}, fields: [Z], expect: Violates}
//     - {map: {haar: 50}, expect: Preserves}
//     - {map: {outside: {superset: O(4), samples: 50}}, expect: Violates}
//     - {map: {outside: {nonorthogonal: true, samples: 50}}, expect: Violates}
//     - {map: hopf_twist, plan: {domain: annulus, r1: 0.5, r2: 3}, expect: Preserves}
//   invariants: {degree: 3, expect_dimension: 2, compare_with: O(3), expect_equal: true}
//   dense: {A: [...], B: [...], expect: Dense}
//   flow: {chart: {kind: product, k: 1, s: 1}, field: "[x1, 1]", p0: [1, 0], t: 1, tol: 1e-10, expect_final: [...]}
//   straighten: {k: 1, s: 1, W: "[0, ...]", a: 1, b: 2, drop_cutoff: false}
//   nullspace: {k: 1, s: 1, V: [...], V1: [...], h: "jet5(x)", deg_x: 4, max_freq: 3, expect_dimension: 2}
//   counterexample: {n: 2, degree: 5}
//
// Exit codes: 0 ok, 1 expectation mismatch, 2 parse or configuration error,
// 3 numeric failure.

#include "detvec/autcheck.hpp"
#include "detvec/constructions.hpp"
#include "detvec/errors.hpp"
#include "detvec/flows.hpp"
#include "detvec/lie.hpp"
#include "detvec/parser.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace detvec::cli {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kMismatch = 1, kConfig = 2, kNumeric = 3 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Scenario parsing
// ---------------------------------------------------------------------------

struct NamedField {
  std::string name;
  VFieldExpr field;
};

struct Scenario {
  YAML::Node root;
  std::string id;
  std::uint64_t seed = 0;
  std::optional<GroupSpec> group;
  Chart chart;
  std::vector<NamedField> fields;
  SamplePlan plan;
  Thresholds thresholds;
};

inline GroupSpec parse_group(const YAML::Node& n) {
  if (n.IsScalar()) {
    const std::string s = n.as<std::string>();
    const auto open = s.find('('), close = s.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
      throw ConfigError("group '" + s + "' is not of the form Family(n)");
    int param = 0;
    try {
      param = std::stoi(s.substr(open + 1, close - open - 1));
    } catch (const std::exception&) {
      throw ConfigError("group '" + s + "' has a non-integer parameter");
    }
    return make_group(parse_family(s.substr(0, open)), param);
  }
  if (n.IsMap()) return make_group(parse_family(n["family"].as<std::string>()), n["param"].as<int>());
  throw ConfigError("group must be a string like U(2) or a map {family, param}");
}

inline Chart parse_chart(const YAML::Node& n) {
  const std::string kind = n["kind"] ? n["kind"].as<std::string>() : "euclidean";
  if (kind == "euclidean") {
    if (!n["dim"]) throw ConfigError("euclidean chart needs dim");
    return Chart::euclidean(n["dim"].as<int>(), n["punctured"] && n["punctured"].as<bool>());
  }
  if (kind == "product") {
    if (!n["k"] || !n["s"]) throw ConfigError("product chart needs k and s");
    return Chart::product(n["k"].as<int>(), n["s"].as<int>());
  }
  throw ConfigError("unknown chart kind '" + kind + "'");
}

inline SamplePlan parse_plan(const YAML::Node& n, const SamplePlan& base) {
  SamplePlan p = base;
  if (!n) return p;
  if (!n.IsMap()) throw ConfigError("plan must be a map");
  if (n["domain"]) {
    const std::string d = n["domain"].as<std::string>();
    if (d == "ball") p.domain = SamplePlan::Domain::Ball;
    else if (d == "sphere") p.domain = SamplePlan::Domain::Sphere;
    else if (d == "annulus") p.domain = SamplePlan::Domain::Annulus;
    else if (d == "box") p.domain = SamplePlan::Domain::ProductBox;
    else throw ConfigError("unknown plan domain '" + d + "'");
  }
  if (n["radius"]) p.r1 = n["radius"].as<double>();
  if (n["r1"]) p.r1 = n["r1"].as<double>();
  if (n["r2"]) p.r2 = n["r2"].as<double>();
  if (n["count"]) p.count = n["count"].as<int>();
  p.validate();
  return p;
}

inline std::vector<double> parse_vector(const YAML::Node& n, const std::string& what) {
  if (!n || !n.IsSequence()) throw ConfigError(what + " must be a list of numbers");
  std::vector<double> v;
  for (const auto& e : n) v.push_back(e.as<double>());
  return v;
}

inline VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline MatrixXd parse_matrix(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() == 0) throw ConfigError("matrix must be a non-empty list of rows");
  const auto rows = n.size();
  const auto cols = n[0].size();
  MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (n[i].size() != cols) throw ConfigError("matrix rows have different lengths");
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = n[i][j].as<double>();
  }
  return m;
}

inline FieldPair named_pair(const std::string& s) {
  const auto open = s.find('('), close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos) throw ConfigError("pair '" + s + "' is not of the form name(n)");
  const std::string name = s.substr(0, open);
  const int n = std::stoi(s.substr(open + 1, close - open - 1));
  if (name == "un_pair") return un_pair(n);
  if (name == "sp_pair") return sp_pair(n);
  throw ConfigError("unknown pair constructor '" + name + "'");
}

inline Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override) {
  Scenario sc;
  try {
    sc.root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read scenario file '" + path + "'");
  }
  const auto& r = sc.root;
  if (!r.IsMap()) throw ConfigError("scenario must be a map");
  if (!r["schema"] || r["schema"].as<int>() != 1) throw ConfigError("scenario schema must be 1");
  if (!r["id"]) throw ConfigError("scenario needs an id");
  sc.id = r["id"].as<std::string>();
  sc.seed = r["seed"] ? r["seed"].as<std::uint64_t>() : 0;
  if (seed_override) sc.seed = *seed_override;
  if (r["group"]) sc.group = parse_group(r["group"]);
  if (r["chart"]) sc.chart = parse_chart(r["chart"]);
  else if (sc.group) sc.chart = representation_chart(*sc.group);
  sc.plan = parse_plan(r["plan"], SamplePlan::ball(1.0, 100, sc.seed));
  sc.plan.seed = sc.seed;
  if (const auto& t = r["tolerances"]) {
    if (t["preserve"]) sc.thresholds.preserve_tol = t["preserve"].as<double>();
    if (t["violate"]) sc.thresholds.violate_floor = t["violate"].as<double>();
    if (!(sc.thresholds.preserve_tol > 0 && sc.thresholds.preserve_tol <= sc.thresholds.violate_floor))
      throw ConfigError("tolerances must satisfy 0 < preserve <= violate");
  }
  if (const auto& fs = r["fields"]) {
    if (!fs.IsSequence()) throw ConfigError("fields must be a list");
    for (const auto& f : fs) {
      if (f.IsScalar()) {
        sc.fields.push_back({"X" + std::to_string(sc.fields.size()), parse_field(f.as<std::string>(), sc.chart)});
      } else if (f["pair"]) {
        const std::string p = f["pair"].as<std::string>();
        const FieldPair fp = named_pair(p);
        sc.fields.push_back({p + ".X", fp.X});
        sc.fields.push_back({p + ".X1", fp.X1});
      } else if (f["dsl"]) {
        const std::string name = f["name"] ? f["name"].as<std::string>() : "X" + std::to_string(sc.fields.size());
        sc.fields.push_back({name, parse_field(f["dsl"].as<std::string>(), sc.chart)});
      } else {
        throw ConfigError("field entries need dsl or pair");
      }
    }
  }
  return sc;
}

inline const YAML::Node section(const Scenario& sc, const std::string& name) {
  const YAML::Node n = sc.root[name];
  if (!n) throw ConfigError("scenario has no '" + name + "' section");
  return n;
}

inline const GroupSpec& require_group(const Scenario& sc) {
  if (!sc.group) throw ConfigError("scenario has no group");
  return *sc.group;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json vector_json(const VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json case_json(const CaseReport& c) {
  Json j;
  j["map"] = c.map;
  j["field"] = c.field;
  j["max"] = c.max;
  j["mean"] = c.mean;
  j["argmax"] = vector_json(c.argmax);
  j["verdict"] = to_string(c.verdict);
  return j;
}

struct Output {
  std::string text;
  int code = kOk;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline std::vector<VFieldExpr> select_fields(const Scenario& sc, const YAML::Node& names, std::vector<std::string>& out_names) {
  std::vector<VFieldExpr> out;
  out_names.clear();
  if (!names) {
    for (const auto& f : sc.fields) {
      out.push_back(f.field);
      out_names.push_back(f.name);
    }
  } else {
    for (const auto& n : names) {
      const std::string want = n.as<std::string>();
      bool found = false;
      for (const auto& f : sc.fields)
        if (f.name == want) {
          out.push_back(f.field);
          out_names.push_back(f.name);
          found = true;
        }
      if (!found) throw ConfigError("unknown field '" + want + "'");
    }
  }
  if (out.empty()) throw ConfigError("no fields to check");
  return out;
}

inline Output cmd_verify(const Scenario& sc, int jobs) {
  const YAML::Node checks = section(sc, "verify");
  if (!checks.IsSequence()) throw ConfigError("verify must be a list of checks");
  Json rep;
  rep["scenario_id"] = sc.id;
  rep["seed"] = sc.seed;
  rep["cases"] = Json::array();
  Json summary = Json::array();
  std::vector<CaseReport> all;
  bool matched = true;
  for (std::size_t ci = 0; ci < checks.size(); ++ci) {
    const YAML::Node ch = checks[ci];
    const YAML::Node m = ch["map"];
    if (!m) throw ConfigError("verify check without map");
    SamplePlan plan = parse_plan(ch["plan"], sc.plan);
    plan.seed = derive_seed(sc.seed, ci);
    std::vector<std::string> names;
    const auto fields = select_fields(sc, ch["fields"], names);
    ResidualReport r;
    std::string label;
    if (m.IsScalar() && m.as<std::string>() == "identity") {
      label = "identity";
      r = check_automorphism(MapExpr::identity(fields.front().chart), fields, plan, jobs, label, names, sc.thresholds);
    } else if (m.IsScalar() && m.as<std::string>() == "hopf_twist") {
      label = "hopf_twist";
      r = check_automorphism(hopf_twist(), fields, plan, jobs, label, names, sc.thresholds);
    } else if (m.IsMap() && m["hopf_twist"]) {
      label = "hopf_twist";
      const Expr mu = parse_scalar(m["hopf_twist"]["mu"].as<std::string>(), Chart::euclidean(2));
      r = check_automorphism(hopf_twist(mu), fields, plan, jobs, label, names, sc.thresholds);
    } else if (m.IsMap() && m["linear"]) {
      label = "linear";
      r = check_automorphism(MapExpr::make_linear(parse_matrix(m["linear"]), fields.front().chart), fields, plan, jobs,
                             label, names, sc.thresholds);
    } else if (m.IsMap() && m["dsl"]) {
      label = "dsl";
      r = check_automorphism(parse_map(m["dsl"].as<std::string>(), fields.front().chart), fields, plan, jobs, label, names,
                             sc.thresholds);
    } else if (m.IsMap() && m["haar"]) {
      label = "haar";
      r = group_preserves(require_group(sc), fields, m["haar"].as<int>(), plan, jobs, names, sc.thresholds);
    } else if (m.IsMap() && m["outside"]) {
      const YAML::Node o = m["outside"];
      const int samples = o["samples"] ? o["samples"].as<int>() : 50;
      OutsideSampler sampler;
      if (o["superset"]) sampler = complement_sampler(parse_group(o["superset"]), require_group(sc));
      else if (o["nonorthogonal"]) sampler = nonorthogonal_sampler(fields.front().dim());
      else throw ConfigError("outside map needs superset or nonorthogonal");
      label = sampler.name;
      r = probe_outside(fields, samples, sampler, plan, jobs, names, sc.thresholds);
    } else {
      throw ConfigError("unknown map descriptor in verify check " + std::to_string(ci));
    }
    for (const auto& c : r.cases) rep["cases"].push_back(case_json(c));
    all.insert(all.end(), r.cases.begin(), r.cases.end());
    Json s;
    s["check"] = ci;
    s["map"] = label;
    s["verdict"] = to_string(r.verdict);
    if (ch["expect"]) {
      const Verdict want = parse_verdict(ch["expect"].as<std::string>());
      s["expected"] = to_string(want);
      if (want != r.verdict) matched = false;
    }
    summary.push_back(s);
  }
  rep["verdict"] = to_string(combine_verdicts(all));
  rep["checks"] = summary;
  rep["matched"] = matched;
  return {rep.dump(2) + "\n", matched ? kOk : kMismatch};
}

inline Output cmd_invariants(const Scenario& sc, int /*jobs*/) {
  const YAML::Node n = section(sc, "invariants");
  const GroupSpec g = n["group"] ? parse_group(n["group"]) : require_group(sc);
  const int d = n["degree"] ? n["degree"].as<int>() : 3;
  const InvariantSpace s = invariant_field_space(g, d);
  Json rep;
  rep["scenario_id"] = sc.id;
  rep["group"] = to_string(g.id);
  rep["degree"] = d;
  rep["dimension"] = s.dimension;
  rep["basis"] = Json::array();
  for (const auto& b : s.basis) rep["basis"].push_back(to_string(b));
  bool ok = true;
  if (n["expect_dimension"] && n["expect_dimension"].as<int>() != s.dimension) ok = false;
  if (n["compare_with"]) {
    const GroupSpec other = parse_group(n["compare_with"]);
    const bool eq = compare_invariant_spaces(g, other, d);
    rep["compare_with"] = to_string(other.id);
    rep["equal"] = eq;
    if (n["expect_equal"] && n["expect_equal"].as<bool>() != eq) ok = false;
  }
  rep["matched"] = ok;
  return {rep.dump(2) + "\n", ok ? kOk : kMismatch};
}

inline Output cmd_dense(const Scenario& sc, int /*jobs*/) {
  const YAML::Node n = section(sc, "dense");
  const GroupSpec g = n["group"] ? parse_group(n["group"]) : require_group(sc);
  const VectorXd a = to_eigen(parse_vector(n["A"], "A")), b = to_eigen(parse_vector(n["B"], "B"));
  if (a.size() != g.algebra_dim || b.size() != g.algebra_dim)
    throw ConfigError("A and B need " + std::to_string(g.algebra_dim) + " algebra coordinates");
  const Density d = is_dense_couple(g, algebra_from_coords(g, a), algebra_from_coords(g, b));
  Json rep;
  rep["scenario_id"] = sc.id;
  rep["group"] = to_string(g.id);
  rep["verdict"] = to_string(d);
  bool ok = true;
  if (n["expect"] && n["expect"].as<std::string>() != to_string(d)) ok = false;
  rep["matched"] = ok;
  return {rep.dump(2) + "\n", ok ? kOk : kMismatch};
}

inline Output cmd_flow(const Scenario& sc, int /*jobs*/) {
  const YAML::Node n = section(sc, "flow");
  const Chart c = n["chart"] ? parse_chart(n["chart"]) : sc.chart;
  if (!n["field"]) throw ConfigError("flow needs a field");
  const VFieldExpr X = parse_field(n["field"].as<std::string>(), c);
  const VectorXd p0 = to_eigen(parse_vector(n["p0"], "p0"));
  if (p0.size() != c.dim()) throw ConfigError("p0 has the wrong dimension for the chart");
  if (!n["t"]) throw ConfigError("flow needs t");
  FlowOptions opt;
  opt.tol = n["tol"] ? n["tol"].as<double>() : 1e-10;
  opt.record = true;
  const Trajectory tr = integrate_trajectory(X, p0, n["t"].as<double>(), opt);
  int code = kOk;
  if (n["expect_final"]) {
    const VectorXd want = to_eigen(parse_vector(n["expect_final"], "expect_final"));
    if (want.size() != c.dim()) throw ConfigError("expect_final has the wrong dimension");
    VectorXd diff = tr.points.back() - want;
    for (int r = 0; r < c.s; ++r) diff(c.k + r) = std::remainder(diff(c.k + r), 2 * std::numbers::pi);
    if (diff.norm() >= 10.0 * opt.tol) code = kMismatch;
  }
  return {trajectory_csv(tr, c), code};
}

inline Output cmd_straighten(const Scenario& sc, int /*jobs*/) {
  const YAML::Node n = section(sc, "straighten");
  const int k = n["k"].as<int>(), s = n["s"].as<int>();
  const Chart c = Chart::product(k, s);
  const VFieldExpr W = parse_field(n["W"].as<std::string>(), c);
  const bool drop = n["drop_cutoff"] && n["drop_cutoff"].as<bool>();
  const Straightening st = straighten_lemma37(W, n["a"].as<double>(), n["b"].as<double>(), drop);
  const int count = n["points"] ? n["points"].as<int>() : 200;
  const StraighteningReport r = check_straightening(st, sc.seed, count);
  Json rep;
  rep["scenario_id"] = sc.id;
  rep["seed"] = sc.seed;
  rep["a"] = st.a;
  rep["b"] = st.b;
  rep["c"] = st.c;
  rep["W_tilde"] = to_string(st.W_tilde);
  rep["points"] = r.points;
  rep["identity_defect"] = r.identity_defect;
  rep["residual"] = r.residual;
  rep["tail"] = r.tail;
  rep["bundle_defect"] = r.bundle_defect;
  const bool ok = r.identity_defect == 0.0 && r.residual < 1e-6 && r.tail < 1e-9 && r.bundle_defect < 1e-12;
  rep["ok"] = ok;
  return {rep.dump(2) + "\n", ok ? kOk : kMismatch};
}

inline Output cmd_nullspace(const Scenario& sc, int /*jobs*/) {
  const YAML::Node n = section(sc, "nullspace");
  const int k = n["k"].as<int>(), s = n["s"].as<int>();
  const VectorXd V = to_eigen(parse_vector(n["V"], "V")), V1 = to_eigen(parse_vector(n["V1"], "V1"));
  const Expr h = n["h"] ? parse_scalar(n["h"].as<std::string>(), Chart::product(k, s)) : jet5(k);
  const Lemma31Result r =
      lemma31_nullspace(k, s, V, V1, h, n["deg_x"] ? n["deg_x"].as<int>() : 4, n["max_freq"] ? n["max_freq"].as<int>() : 3);
  Json rep;
  rep["scenario_id"] = sc.id;
  rep["dimension"] = r.dimension;
  rep["expected"] = r.expected;
  rep["couple"] = to_string(r.couple);
  rep["unknowns"] = r.unknowns;
  rep["basis"] = Json::array();
  for (const auto& b : r.basis) rep["basis"].push_back(to_string(b));
  bool ok = true;
  if (n["expect_dimension"] && n["expect_dimension"].as<int>() != r.dimension) ok = false;
  rep["matched"] = ok;
  return {rep.dump(2) + "\n", ok ? kOk : kMismatch};
}

inline Output cmd_counterexample(const Scenario& sc, int jobs) {
  const YAML::Node n = section(sc, "counterexample");
  const int dim = n["n"] ? n["n"].as<int>() : 2;
  const int degree = n["degree"] ? n["degree"].as<int>() : 5;
  const CounterexampleReport r = hopf_counterexample(dim, sc.seed, jobs, degree);
  Json rep;
  rep["scenario_id"] = sc.id;
  rep["seed"] = sc.seed;
  rep["n"] = r.n;
  rep["invariant_dimension"] = r.invariant_dimension;
  rep["cases"] = Json::array();
  for (const auto& c : r.invariant_fields.cases) rep["cases"].push_back(case_json(c));
  for (const auto& c : r.xi_and_Y.cases) rep["cases"].push_back(case_json(c));
  rep["linear_fit_error"] = r.linear_fit_error;
  rep["support_points"] = r.support_points;
  rep["preserves_invariant_fields"] = r.preserves;
  rep["nonlinear"] = r.nonlinear;
  rep["verdict"] = r.ok() ? "Preserves" : "Violates";
  return {rep.dump(2) + "\n", r.ok() ? kOk : kMismatch};
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

struct Invocation {
  std::string command;
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
};

/// Runs one command and writes its report. Errors go to `err`.
inline int execute(const Invocation& inv, std::ostream& err, std::string* report = nullptr) {
  try {
    if (inv.out.empty()) throw ConfigError("--out is required");
    const Scenario sc = load_scenario(inv.scenario, inv.seed);
    const int jobs = resolve_jobs(inv.jobs);
    Output o;
    if (inv.command == "verify") o = cmd_verify(sc, jobs);
    else if (inv.command == "invariants") o = cmd_invariants(sc, jobs);
    else if (inv.command == "dense") o = cmd_dense(sc, jobs);
    else if (inv.command == "flow") o = cmd_flow(sc, jobs);
    else if (inv.command == "straighten") o = cmd_straighten(sc, jobs);
    else if (inv.command == "nullspace") o = cmd_nullspace(sc, jobs);
    else if (inv.command == "counterexample") o = cmd_counterexample(sc, jobs);
    else throw ConfigError("unknown command '" + inv.command + "'");
    std::ofstream f(inv.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + inv.out + "'");
    f << o.text;
    if (report) *report = o.text;
    if (o.code == kMismatch) err << "detvec: expectations not met for scenario '" << sc.id << "'\n";
    return o.code;
  } catch (const YAML::Exception& e) {
    err << "detvec: scenario error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    err << "detvec: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericError& e) {
    err << "detvec: numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const DomainError& e) {
    err << "detvec: numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}

/// Parses argv-style arguments (args[0] is the program name) and executes.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"detvec: automorphism groups of vector-field families"};
  app.require_subcommand(1);
  Invocation inv;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"verify", "invariants", "dense", "flow", "straighten", "nullspace", "counterexample"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " section of a scenario");
    sub->add_option("--scenario", inv.scenario, "scenario file (YAML, schema 1)")->required();
    sub->add_option("--out", inv.out, "report path");
    sub->add_option("--seed", seed, "override the scenario seed");
    sub->add_option("--jobs", inv.jobs, "worker threads (default: $DETVEC_JOBS or 1)");
  }
  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "detvec: " << e.what() << "\n" << app.help();
    return kConfig;
  }
  inv.command = app.get_subcommands().front()->get_name();
  inv.seed = seed;
  return execute(inv, err);
}

}  // namespace detvec::cli

#endif  // DETVEC_CLI_HPP
