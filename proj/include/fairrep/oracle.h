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

#ifndef FAIRREP_ORACLE_H_
#define FAIRREP_ORACLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairrep/designs.h"
#include "fairrep/joint_pmf.h"
#include "fairrep/mechanism.h"

namespace fairrep {

// P1: maximize I(Y;T) s.t. I(Y;S) = 0, I(X;Y) <= r.
// P2: maximize I(Y;T|S) s.t. I(Y;S) = 0, I(X;Y|S,T) <= r.
enum class Problem { kP1, kP2 };
std::string ToString(Problem p);
// "P1"/"p1", "P2"/"p2"; throws InvalidArgument.
Problem ParseProblem(const std::string& name);

enum class OracleMethod { kLocalSearch, kLpVertex };
std::string ToString(OracleMethod m);

struct OracleOptions {
  long budget = 20000;  // local-search move evaluations, split over starts
  uint64_t seed = 0;
  // Structured LP columns beyond this count are sampled instead of listed.
  long column_limit = 5000;
  int random_starts = 3;
  // Extra mechanisms (inputs S, X, T; independent of S) whose posteriors
  // enter the search. They only ever raise the result.
  std::vector<Mechanism> warm_starts;
};

struct OracleResult {
  OracleResult(Problem pr, double rate, Mechanism m)
      : problem(pr), r(rate), best_mechanism(std::move(m)) {}

  Problem problem;
  double r = 0.0;
  Mechanism best_mechanism;    // float kernel over (S, X, T)
  double best_utility = 0.0;   // measured on the returned mechanism
  double best_rate = 0.0;
  OracleMethod method = OracleMethod::kLocalSearch;
  long budget_used = 0;
  uint64_t seed = 0;
  double lp_utility = 0.0;     // LP over structured posteriors alone
  bool improved_over_constant = false;
  std::vector<std::string> warnings;  // "BudgetTooSmall", ...
};

// Best feasible point found: an LP over mixtures of structured posteriors
// (each s either fixes (x,t), fixes only t, fixes only x, or nothing), then
// a multi-start local search over couplings P(z,y|s) = P(z|s) P(y|s,z)
// with a shared y-marginal, then a final LP over every posterior seen.
// |Y| stays within |S||X||T| + 2. A lower bound on the true optimum.
// Source axes must be (S, X, T). Throws InvalidArgument.
OracleResult OracleSearch(const JointPMF& p, Problem problem, double r,
                          const OracleOptions& options = {});

// Runs OracleSearch over `rates` in increasing order, feeding each result
// to the next as a warm start, so the utilities are nondecreasing.
// Results come back in the order of `rates`.
std::vector<OracleResult> OracleSweep(const JointPMF& p, Problem problem,
                                      const std::vector<double>& rates,
                                      const OracleOptions& options = {});

// sup I(Y;T) s.t. I(Y;S) = 0 with no rate constraint, exactly: an optimal Y
// can take each value on a vertex of {Q : Q_S = P_S}, i.e. pick one (x,t)
// per s, and the mixture weights solve a transport LP.
// Throws TooLarge when more than 8 cells of the source have positive mass
// (the vertex count only depends on the supports).
OracleResult LpVertices(const JointPMF& p);

inline constexpr double kSandwichTolerance = 1e-6;

struct SandwichReport {
  Problem problem = Problem::kP1;
  double r = 0.0;
  double lower_theory = 0.0;  // best bound, clipped at 0
  std::string lower_theory_id;
  double lower_constructed = 0.0;
  std::string constructed_by;  // design name, or "constant"
  double oracle = 0.0;
  double upper_theory = 0.0;
  std::vector<std::string> notes;       // designs skipped and why
  std::vector<std::string> violations;  // broken orderings

  bool ok() const { return violations.empty(); }
};

struct SandwichOptions {
  OracleOptions oracle;
  DesignOptions design;
};

// Fills `violations` for any of lower_theory <= lower_constructed <= oracle
// <= upper_theory broken by more than kSandwichTolerance.
void CheckOrdering(SandwichReport* report);

// Builds every design that applies at r (plus P2's mechanism for P1),
// keeps the best feasible measured utility, runs the oracle and bounds.
SandwichReport Sandwich(const JointPMF& p, Problem problem, double r,
                        const SandwichOptions& options = {});

}  // namespace fairrep

#endif  // FAIRREP_ORACLE_H_
