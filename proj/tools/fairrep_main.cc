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

// fairrep: bounds, constructions and brute-force brackets for fair
// representations under perfect demographic parity.
//
//   fairrep info --source d2.json
//   fairrep run --config sweep.json [--rate R]... [--design D]... [--out DIR]

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairrep/errors.h"
#include "fairrep/experiment.h"

namespace {

using fairrep::ExperimentConfig;

struct Flags {
  std::string config, source, out, problem;
  std::vector<double> rates;
  std::vector<std::string> designs;
  long oracle_budget = -1;
  long long seed = -1;
  bool exact = false, use_float = false, no_oracle = false;
};

void AddCommon(CLI::App* cmd, Flags* f) {
  cmd->add_option("--config", f->config, "experiment config (JSON)");
  cmd->add_option("--source", f->source, "distribution file (JSON); overrides the config");
  auto* exact = cmd->add_flag("--exact", f->exact, "exact rational arithmetic (default)");
  cmd->add_flag("--float", f->use_float, "double-precision arithmetic")->excludes(exact);
}

ExperimentConfig Resolve(const Flags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : fairrep::LoadConfig(f.config);
  if (!f.source.empty()) c.source = f.source;
  if (!f.out.empty()) c.output = f.out;
  if (!f.problem.empty()) c.problem = f.problem;
  if (!f.rates.empty()) c.rates = f.rates;
  if (!f.designs.empty()) c.designs = f.designs;
  if (f.oracle_budget >= 0) c.oracle.budget = f.oracle_budget;
  if (f.seed >= 0) c.seed = c.oracle.seed = static_cast<uint64_t>(f.seed);
  if (f.exact) c.exact = true;
  if (f.use_float) c.exact = false;
  if (f.no_oracle) c.oracle.enabled = false;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair representation bounds, constructions and oracle brackets"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* info = app.add_subcommand("info", "entropies, atoms and regime thresholds");
  AddCommon(info, &f);

  CLI::App* run = app.add_subcommand("run", "build, evaluate and bracket designs");
  AddCommon(run, &f);
  run->add_option("--rate", f.rates, "rate in bits (repeatable)");
  run->add_option("--design", f.designs, "A, B, C, HIGHRATE or P2 (repeatable)");
  run->add_option("--problem", f.problem, "p1, p2 or both");
  run->add_option("--oracle-budget", f.oracle_budget, "oracle local-search moves");
  run->add_option("--seed", f.seed, "seed for the SFRL search and the oracle");
  run->add_option("--out", f.out, "output directory");
  run->add_flag("--no-oracle", f.no_oracle, "skip the oracle bracket");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fairrep::kExitConfig;
  }

  try {
    ExperimentConfig c = Resolve(f);
    if (*info) {
      if (c.source.empty()) throw fairrep::InvalidArgument("info needs --source or --config");
      std::cout << fairrep::InfoReport(fairrep::LoadSource(c.source, c.exact));
      return fairrep::kExitOk;
    }
    fairrep::RunSummary s = fairrep::CmdRun(c, std::cerr);
    std::cerr << s.runs << " runs, " << s.construction_failures << " construction failures, "
              << s.violations << " violations -> " << c.output << "\n";
    return s.exit_code;
  } catch (const fairrep::NormalizationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairrep::kExitConfig;
  } catch (const fairrep::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairrep::kExitConfig;
  } catch (const fairrep::DuplicateSymbol& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairrep::kExitConfig;
  } catch (const fairrep::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairrep::kExitConfig;
  } catch (const fairrep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairrep::kExitConstruction;
  }
}
