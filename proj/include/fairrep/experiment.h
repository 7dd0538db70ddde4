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

#ifndef FAIRREP_EXPERIMENT_H_
#define FAIRREP_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairrep/joint_pmf.h"

namespace fairrep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;        // parse / config errors
inline constexpr int kExitConstruction = 3;  // a requested design failed to build
inline constexpr int kExitViolation = 4;     // a bound ordering broke; wins over 3

struct OracleConfig {
  bool enabled = true;
  long budget = 20000;
  uint64_t seed = 0;
};

// Config file (JSON):
//   {"source": "d2.json",               // relative to the config file
//    "problem": "p1" | "p2" | "both",
//    "rates": [0.5, 1.0] | {"min": 0, "max": 1, "steps": 4},
//    "designs": ["A", "B", "C", "HIGHRATE", "P2"],
//    "oracle": {"enabled": true, "budget": 20000, "seed": 0},
//    "arithmetic": "exact" | "float",
//    "output": "out", "seed": 0, "sfrl_budget": 10000,
//    "known_optimum": {"p1": 1.0, "p2": 1.0}}
// A grid gives steps + 1 evenly spaced rates from min to max.
// known_optimum is a reference value of the optimal utility (valid for every
// rate in the run, e.g. a closed form); anything feasible or any lower bound
// above it counts as a violation.
struct ExperimentConfig {
  std::string source;
  std::string problem = "both";
  std::vector<double> rates;
  std::vector<std::string> designs;  // empty: every design of the problem(s)
  OracleConfig oracle;
  bool exact = true;
  std::string output = "out";
  uint64_t seed = 0;
  long sfrl_budget = 10000;
  std::optional<double> known_optimum_p1, known_optimum_p2;
};

// Throws ParseError / InvalidArgument.
ExperimentConfig ParseConfig(const std::string& text, const std::string& base_dir = "");
ExperimentConfig LoadConfig(const std::string& path);
std::vector<double> ExpandGrid(double min, double max, int steps);
// Rejects negative or non-finite rates, unknown designs or problems.
void ValidateConfig(const ExperimentConfig& config);

// Reads and parses a distribution file. Throws ParseError if unreadable.
JointPMF LoadSource(const std::string& path, bool exact);

// Entropies, mutual informations, information-diagram atoms and regime
// thresholds of a source, as pretty JSON.
std::string InfoReport(const JointPMF& p);

struct RunSummary {
  int exit_code = kExitOk;
  size_t runs = 0;
  size_t construction_failures = 0;
  size_t violations = 0;
  std::vector<std::string> files;  // written, relative to the output dir
};

// Builds, evaluates, bounds and (optionally) brackets every (rate, design)
// pair; writes run_r<r>_<design>.json per pair and summary.csv sorted by
// (r, design). Progress lines go to `log`. Errors in the config or source
// propagate as exceptions.
RunSummary CmdRun(const ExperimentConfig& config, std::ostream& log);

// Shared number rendering for reports: 12 significant digits.
std::string FormatNumber(double v);

}  // namespace fairrep

#endif  // FAIRREP_EXPERIMENT_H_
