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

#ifndef FAIRREP_DESIGNS_H_
#define FAIRREP_DESIGNS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairrep/frl.h"
#include "fairrep/joint_pmf.h"
#include "fairrep/mechanism.h"
#include "fairrep/prob.h"
#include "fairrep/sfrl.h"

namespace fairrep {

// U' = U with probability alpha, otherwise a fresh symbol c.
struct ErasedWitness {
  FrlWitness base;
  Prob alpha;
  std::string erasure_symbol;
  Alphabet u_prime;  // base cells, then the erasure symbol
  // P(u' | u) at [u * |U'| + u'].
  std::vector<Prob> channel;

  size_t num_base() const { return base.num_aux(); }
  size_t erasure_index() const { return num_base(); }
  const Prob& at(size_t u, size_t u_prime_index) const {
    return channel[u * u_prime.size() + u_prime_index];
  }
};

// `reserved` lists further alphabets the erasure symbol must avoid (the
// designs pass S and X). Throws AlphaOutOfRange.
ErasedWitness Erase(const FrlWitness& base, const Prob& alpha,
                    const std::vector<const Alphabet*>& reserved = {});

// "c" with a reserved marker appended until it is in none of `alphabets`.
std::string FreshSymbol(const std::vector<const Alphabet*>& alphabets);

enum class Design { kA, kB, kC, kHighRate, kP2 };
std::string ToString(Design d);
// "A", "B", "C", "HIGHRATE", "P2"; throws InvalidArgument.
Design ParseDesign(const std::string& name);

struct DesignOptions {
  uint64_t seed = 0;
  long sfrl_budget = 10000;
};

// A built mechanism plus what the construction claims about it.
struct BuildResult {
  BuildResult(Mechanism m, Design d, double rate)
      : mechanism(std::move(m)), design(d), r(rate) {}

  Mechanism mechanism;
  Design design;
  double r = 0.0;
  std::optional<Prob> alpha;       // erasure probability actually used
  std::optional<double> sfrl_excess;
  std::optional<double> sfrl_target;
  bool sfrl_met_target = true;
  std::string guarantee;           // bound id the utility must reach, or ""
  std::optional<double> guaranteed_value;
  std::vector<std::string> log;
};

// Problem 1 designs over a source with axes (S, X, T).
//   A         U = FRL(S -> X), U' = erase(U, a), Y' = FRL((S,X,U') -> T),
//             Y = (U', Y').  Needs 0 <= r <= H(X|S), H(X|S) > 0.
//   B         Y = SFRL((S,X) -> T).  Any r >= 0.
//   C         U' as in A, Y' = conditional SFRL((S,X) -> T | U').
//   HIGHRATE  Y = (U, Y') with Y' = FRL((S,X,U) -> T).
//             Needs H(X|S) <= r < H(X).
// a is the simplest rational in [r/H(X|S) - 1e-12, r/H(X|S)] (clipped to
// [0,1]), so I(X;Y) <= r holds without rounding slack.
// Throws RegimeError, DegenerateSource, SearchFailed.
BuildResult BuildP1(const JointPMF& p, double r, Design design,
                    const DesignOptions& options = {});

// Problem 2: FULL regime (r >= H(X|T,S)) uses Y = FRL(S -> T); otherwise
// the conditional SFRL with C = X, D = T, V = S. Throws SearchFailed.
BuildResult BuildP2(const JointPMF& p, double r, const DesignOptions& options = {});

struct MechanismReport {
  double r = 0.0;
  double utility_p1 = 0.0;  // I(Y;T)
  double utility_p2 = 0.0;  // I(Y;T|S)
  double secrecy = 0.0;     // I(Y;S)
  double rate_p1 = 0.0;     // I(X;Y)
  double rate_p2 = 0.0;     // I(X;Y|S,T)
  bool secrecy_zero = false;
  bool feasible_p1 = false;
  bool feasible_p2 = false;
};

// Exact zero is required for secrecy on exact joints and 1e-9 on float
// joints; rates get 1e-9 slack in both modes. Throws AlphabetMismatch.
MechanismReport Evaluate(const JointPMF& p, const Mechanism& mech, double r);

}  // namespace fairrep

#endif  // FAIRREP_DESIGNS_H_
