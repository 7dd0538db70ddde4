// Copyright 2026 The Fairrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairrep/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "fairrep/bounds.h"
#include "fairrep/designs.h"
#include "fairrep/distribution_io.h"
#include "fairrep/errors.h"
#include "fairrep/info.h"
#include "fairrep/oracle.h"
#include "json.hpp"

namespace fairrep {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string> kP1Designs = {"A", "B", "C", "HIGHRATE"};

json Num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(FormatNumber(v));
}

json Num(const std::optional<double>& v) { return v ? Num(*v) : json(nullptr); }

std::string Cell(const std::optional<double>& v) { return v ? FormatNumber(*v) : ""; }

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
}

Problem ProblemOf(Design d) { return d == Design::kP2 ? Problem::kP2 : Problem::kP1; }

double LowerTheoryP2(const BoundSetP2& b, std::string* id) {
  switch (b.regime) {
    case P2Regime::kFull:
      *id = "exact_value";
      return *b.exact_value;
    case P2Regime::kMid:
      *id = "L1c";
      return std::max(0.0, b.L1c);
    case P2Regime::kOpen:
      break;
  }
  *id = "none";
  return 0.0;
}

json BoundsP1Json(const BoundSetP1& b) {
  return {{"regime", ToString(b.regime)}, {"alpha", Num(b.alpha)},   {"L1", Num(b.L1)},
          {"L2", Num(b.L2)},              {"L3", Num(b.L3)},         {"L1_prime", Num(b.L1_prime)},
          {"upper", Num(b.upper)},        {"best_id", b.best_id},    {"best_lower", Num(b.best_lower)}};
}

json BoundsP2Json(const BoundSetP2& b) {
  return {{"regime", ToString(b.regime)},   {"exact_value", Num(b.exact_value)},
          {"L1c", Num(b.L1c)},              {"threshold", Num(b.threshold)},
          {"H(X|T,S)", Num(b.h_x_given_ts)}, {"upper", Num(b.upper)}};
}

struct CsvRow {
  double r;
  std::string design;
  std::string line;
};

}  // namespace

std::string FormatNumber(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

std::vector<double> ExpandGrid(double min, double max, int steps) {
  if (steps < 1) throw InvalidArgument("grid steps must be >= 1");
  if (!(max >= min)) throw InvalidArgument("grid needs min <= max");
  std::vector<double> out;
  for (int k = 0; k <= steps; ++k) out.push_back(min + (max - min) * k / steps);
  return out;
}

ExperimentConfig ParseConfig(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  ExperimentConfig c;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return (path.is_relative() && !base_dir.empty() ? fs::path(base_dir) / path : path)
        .lexically_normal()
        .string();
  };
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "source") {
        c.source = resolve(v.get<std::string>());
      } else if (key == "problem") {
        c.problem = v.get<std::string>();
      } else if (key == "rates") {
        if (v.is_array()) {
          c.rates = v.get<std::vector<double>>();
        } else if (v.is_object()) {
          c.rates = ExpandGrid(v.at("min").get<double>(), v.at("max").get<double>(),
                               v.at("steps").get<int>());
        } else {
          throw ParseError("'rates' must be a list or {min, max, steps}");
        }
      } else if (key == "designs") {
        c.designs = v.get<std::vector<std::string>>();
      } else if (key == "oracle") {
        c.oracle.enabled = v.value("enabled", c.oracle.enabled);
        c.oracle.budget = v.value("budget", c.oracle.budget);
        c.oracle.seed = v.value("seed", c.oracle.seed);
      } else if (key == "arithmetic") {
        const std::string a = v.get<std::string>();
        if (a != "exact" && a != "float") throw ParseError("arithmetic must be exact or float");
        c.exact = a == "exact";
      } else if (key == "output") {
        c.output = resolve(v.get<std::string>());
      } else if (key == "seed") {
        c.seed = v.get<uint64_t>();
      } else if (key == "sfrl_budget") {
        c.sfrl_budget = v.get<long>();
      } else if (key == "known_optimum") {
        for (auto k = v.begin(); k != v.end(); ++k) {
          if (k.key() == "p1") {
            c.known_optimum_p1 = k.value().get<double>();
          } else if (k.key() == "p2") {
            c.known_optimum_p2 = k.value().get<double>();
          } else {
            throw ParseError("known_optimum keys are p1 and p2");
          }
        }
      } else {
        throw ParseError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig LoadConfig(const std::string& path) {
  return ParseConfig(ReadFile(path), fs::path(path).parent_path().string());
}

void ValidateConfig(const ExperimentConfig& c) {
  if (c.source.empty()) throw InvalidArgument("no source distribution given");
  if (c.problem != "p1" && c.problem != "p2" && c.problem != "both") {
    throw InvalidArgument("problem must be p1, p2 or both");
  }
  if (c.rates.empty()) throw InvalidArgument("no rates given");
  for (double r : c.rates) {
    if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("rates must be finite and >= 0");
  }
  for (const std::string& d : c.designs) ParseDesign(d);
  if (c.oracle.budget < 0 || c.sfrl_budget < 1) throw InvalidArgument("budgets must be positive");
}

JointPMF LoadSource(const std::string& path, bool exact) {
  return ParseDistribution(ReadFile(path), exact);
}

std::string InfoReport(const JointPMF& p) {
  const SourceQuantities q = ComputeSourceQuantities(p);
  InfoEngine e(p);
  auto h = [&](RoleSet a, RoleSet b = {}) { return Num(e.Measure(MeasureQuery::H(a, b))); };
  auto i = [&](RoleSet a, RoleSet b, RoleSet c = {}) {
    return Num(e.Measure(MeasureQuery::I(a, b, c)));
  };
  json doc;
  doc["arithmetic"] = p.is_exact() ? "exact" : "float";
  doc["alphabet_sizes"] = {{"S", p.axis(0).alphabet.size()},
                           {"X", p.axis(1).alphabet.size()},
                           {"T", p.axis(2).alphabet.size()}};
  doc["entropies"] = {{"H(S)", h({"S"})},
                      {"H(X)", h({"X"})},
                      {"H(T)", h({"T"})},
                      {"H(S,X)", h({"S", "X"})},
                      {"H(S,T)", h({"S", "T"})},
                      {"H(X,T)", h({"X", "T"})},
                      {"H(S,X,T)", h({"S", "X", "T"})},
                      {"H(X|S)", h({"X"}, {"S"})},
                      {"H(T|S)", h({"T"}, {"S"})},
                      {"H(S|T)", h({"S"}, {"T"})},
                      {"H(T|X,S)", h({"T"}, {"X", "S"})},
                      {"H(X,S|T)", h({"X", "S"}, {"T"})},
                      {"H(X,T|S)", h({"X", "T"}, {"S"})},
                      {"H(X|T,S)", h({"X"}, {"T", "S"})}};
  doc["mutual_information"] = {{"I(S;X)", i({"S"}, {"X"})},
                               {"I(S;T)", i({"S"}, {"T"})},
                               {"I(X;T)", i({"X"}, {"T"})},
                               {"I(X,S;T)", i({"X", "S"}, {"T"})},
                               {"I(X;T|S)", i({"X"}, {"T"}, {"S"})},
                               {"I(S;T|X)", i({"S"}, {"T"}, {"X"})},
                               {"I(S;X|T)", i({"S"}, {"X"}, {"T"})}};
  json atoms = json::array();
  for (const Atom& a : IMeasureAtoms(p)) atoms.push_back({{"atom", a.label}, {"bits", Num(a.bits)}});
  doc["atoms"] = std::move(atoms);
  doc["thresholds"] = {{"H(X|S)", Num(q.h_x_given_s)},
                       {"H(X)", Num(q.h_x)},
                       {"H(X|T,S)", Num(q.h_x_given_ts)},
                       {"log2(I(X;T|S)+1)+4", Num(BoundsP2(q, 0.0).threshold)}};
  return doc.dump(2) + "\n";
}

RunSummary CmdRun(const ExperimentConfig& config, std::ostream& log) {
  ValidateConfig(config);
  const JointPMF p = LoadSource(config.source, config.exact);
  const SourceQuantities q = ComputeSourceQuantities(p);

  std::vector<double> rates = config.rates;
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end()), rates.end());
  std::vector<std::string> names = config.designs;
  if (names.empty()) {
    if (config.problem != "p2") names = kP1Designs;
    if (config.problem != "p1") names.push_back("P2");
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  // One monotone oracle sweep per problem that any design needs.
  std::map<Problem, std::vector<OracleResult>> oracle;
  if (config.oracle.enabled) {
    OracleOptions opt;
    opt.budget = config.oracle.budget;
    opt.seed = config.oracle.seed;
    for (const std::string& n : names) {
      const Problem pr = ProblemOf(ParseDesign(n));
      if (oracle.count(pr)) continue;
      log << "oracle sweep " << ToString(pr) << " over " << rates.size() << " rates\n";
      oracle.emplace(pr, OracleSweep(p, pr, rates, opt));
    }
  }

  fs::create_directories(config.output);
  RunSummary summary;
  std::vector<CsvRow> rows;
  DesignOptions dopt;
  dopt.seed = config.seed;
  dopt.sfrl_budget = config.sfrl_budget;

  for (size_t ri = 0; ri < rates.size(); ++ri) {
    const double r = rates[ri];
    const BoundSetP1 b1 = BoundsP1(q, r);
    const BoundSetP2 b2 = BoundsP2(q, r);
    for (const std::string& name : names) {
      const Design design = ParseDesign(name);
      const Problem pr = ProblemOf(design);
      ++summary.runs;
      json doc;
      doc["r"] = Num(r);
      doc["design"] = name;
      doc["problem"] = ToString(pr);
      doc["arithmetic"] = config.exact ? "exact" : "float";
      doc["source"] = fs::path(config.source).filename().string();
      doc["seed"] = config.seed;
      doc["sfrl_budget"] = config.sfrl_budget;
      doc["bounds_p1"] = BoundsP1Json(b1);
      doc["bounds_p2"] = BoundsP2Json(b2);

      std::string lower_id;
      const double lower = pr == Problem::kP1 ? b1.best_lower_usable : LowerTheoryP2(b2, &lower_id);
      if (pr == Problem::kP1) lower_id = b1.best_id;
      const std::optional<double> known =
          pr == Problem::kP1 ? config.known_optimum_p1 : config.known_optimum_p2;
      std::optional<double> oracle_u;
      if (auto it = oracle.find(pr); it != oracle.end()) {
        const OracleResult& o = it->second[ri];
        oracle_u = o.best_utility;
        doc["oracle"] = {{"utility", Num(o.best_utility)}, {"rate", Num(o.best_rate)},
                         {"method", ToString(o.method)},   {"budget_used", o.budget_used},
                         {"seed", o.seed},                 {"outputs", o.best_mechanism.num_outputs()},
                         {"warnings", o.warnings}};
      } else {
        doc["oracle"] = nullptr;
      }

      std::string status = "ok";
      std::optional<MechanismReport> m;
      std::vector<std::string> violations;
      try {
        BuildResult b = BuildP1(p, r, design, dopt);
        m = Evaluate(p, b.mechanism, r);
        doc["log"] = b.log;
        doc["mechanism"] = {{"outputs", b.mechanism.num_outputs()},
                            {"exact", b.mechanism.is_exact()}};
        doc["alpha"] = b.alpha ? json{{"value", Num(b.alpha->to_double())},
                                      {"exact", b.alpha->is_exact() ? b.alpha->str() : ""}}
                               : json(nullptr);
        doc["sfrl"] = b.sfrl_excess ? json{{"excess", Num(*b.sfrl_excess)},
                                           {"target", Num(b.sfrl_target)},
                                           {"met_target", b.sfrl_met_target}}
                                    : json(nullptr);
        const double u = pr == Problem::kP1 ? m->utility_p1 : m->utility_p2;
        const bool feasible = pr == Problem::kP1 ? m->feasible_p1 : m->feasible_p2;
        if (!b.guarantee.empty()) {
          const bool met = u >= *b.guaranteed_value - 1e-9;
          doc["guarantee"] = {{"id", b.guarantee}, {"value", Num(b.guaranteed_value)}, {"met", met}};
          if (!met) violations.push_back("utility below its guaranteed " + b.guarantee);
        } else {
          doc["guarantee"] = nullptr;
        }
        const bool claims_feasible =
            pr == Problem::kP1 || b2.regime == P2Regime::kFull ||
            (b2.regime == P2Regime::kMid && b.sfrl_met_target);
        if (claims_feasible && !feasible) violations.push_back("construction is infeasible");
        if (u > q.h_t_given_s + kSandwichTolerance) violations.push_back("utility > upper");
        if (oracle_u) {
          if (feasible && u > *oracle_u + kSandwichTolerance) {
            violations.push_back("lower_constructed > oracle");
          }
        }
        if (known && feasible && u > *known + kSandwichTolerance) {
          violations.push_back("lower_constructed > known_optimum");
        }
      } catch (const SearchFailed& e) {
        status = "search_failed";
        ++summary.construction_failures;
        doc["error"] = e.what();
        doc["sfrl"] = {{"excess", Num(e.best_excess())}, {"target", Num(e.target())},
                       {"met_target", false}};
      } catch (const RegimeError& e) {
        status = "not_applicable";
        doc["error"] = e.what();
      } catch (const DegenerateSource& e) {
        status = "not_applicable";
        doc["error"] = e.what();
      }
      if (oracle_u) {
        if (lower > *oracle_u + kSandwichTolerance) violations.push_back("lower_theory > oracle");
        if (*oracle_u > q.h_t_given_s + kSandwichTolerance) violations.push_back("oracle > upper");
      }
      if (lower > q.h_t_given_s + kSandwichTolerance) violations.push_back("lower_theory > upper");
      if (known) {
        if (lower > *known + kSandwichTolerance) violations.push_back("lower_theory > known_optimum");
        if (oracle_u && *oracle_u > *known + kSandwichTolerance) {
          violations.push_back("oracle > known_optimum");
        }
        if (*known > q.h_t_given_s + kSandwichTolerance) violations.push_back("known_optimum > upper");
      }
      if (!violations.empty()) {
        status = "violation";
        ++summary.violations;
      }
      doc["status"] = status;
      doc["checks"] = {{"lower_theory", Num(lower)}, {"lower_theory_id", lower_id},
                       {"oracle", Num(oracle_u)},    {"upper", Num(q.h_t_given_s)},
                       {"known_optimum", Num(known)}, {"violations", violations}};
      if (m) {
        doc["measures"] = {{"utility_p1", Num(m->utility_p1)}, {"utility_p2", Num(m->utility_p2)},
                           {"secrecy", Num(m->secrecy)},       {"rate_p1", Num(m->rate_p1)},
                           {"rate_p2", Num(m->rate_p2)},       {"secrecy_zero", m->secrecy_zero}};
        doc["feasible_p1"] = m->feasible_p1;
        doc["feasible_p2"] = m->feasible_p2;
      }

      const std::string file = "run_r" + FormatNumber(r) + "_" + name + ".json";
      WriteFile(fs::path(config.output) / file, doc.dump(2) + "\n");
      summary.files.push_back(file);
      log << file << ": " << status << "\n";

      std::ostringstream line;
      auto opt_m = [&](double MechanismReport::*f) {
        return m ? std::optional<double>((*m).*f) : std::nullopt;
      };
      std::string feasible_cell;
      if (m) {
        feasible_cell = (pr == Problem::kP1 ? m->feasible_p1 : m->feasible_p2) ? "true" : "false";
      }
      line << FormatNumber(r) << ',' << name << ',' << Cell(opt_m(&MechanismReport::utility_p1))
           << ',' << Cell(opt_m(&MechanismReport::utility_p2)) << ','
           << Cell(opt_m(&MechanismReport::secrecy)) << ','
           << Cell(opt_m(&MechanismReport::rate_p1)) << ','
           << Cell(opt_m(&MechanismReport::rate_p2)) << ',' << Cell(b1.L1) << ','
           << Cell(b1.L2) << ',' << Cell(b1.L3) << ',' << Cell(b1.L1_prime) << ','
           << Cell(q.h_t_given_s) << ',' << Cell(oracle_u) << ','
           << feasible_cell << ',' << status;
      rows.push_back({r, name, line.str()});
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
    return a.r != b.r ? a.r < b.r : a.design < b.design;
  });
  std::string csv =
      "r,design,utility_p1,utility_p2,secrecy,rate_p1,rate_p2,L1,L2,L3,L1_prime,upper,"
      "oracle,feasible,status\n";
  for (const CsvRow& row : rows) csv += row.line + "\n";
  WriteFile(fs::path(config.output) / "summary.csv", csv);
  summary.files.push_back("summary.csv");

  if (summary.violations > 0) {
    summary.exit_code = kExitViolation;
  } else if (summary.construction_failures > 0) {
    summary.exit_code = kExitConstruction;
  }
  return summary;
}

}  // namespace fairrep
