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

#ifndef FAIRREP_SFRL_H_
#define FAIRREP_SFRL_H_

#include <cstdint>

#include "fairrep/frl.h"
#include "fairrep/info.h"
#include "fairrep/joint_pmf.h"

namespace fairrep {

struct SfrlOptions {
  // Pricing evaluations plus pivots allowed per conditioning slice.
  long budget = 10000;
  uint64_t seed = 0;
  // Pricing enumerates every function column when the slice has at most
  // this many; larger slices use seeded coordinate-descent restarts.
  long enumeration_limit = 4096;
  // Throw SearchFailed when the excess misses the target bound. When false
  // the witness is returned with met_target = false.
  bool throw_on_miss = true;
};

// A functional witness that also keeps the excess leakage I(C;Z|D[,V])
// small. Z is independent of C (and V) exactly and D is a function of
// (Z, C[, V]) exactly.
struct SfrlWitness : FunctionalWitness {
  double achieved_excess = 0.0;  // I(C;Z|D[,V]) on the induced joint
  double target_bound = 0.0;     // log2(I(C;D[|V]) + 1) + 4
  double start_excess = 0.0;     // the FRL starting point's excess
  long moves_used = 0;
  bool met_target = true;
};

// Strong functional representation for a joint over exactly (C, D).
//
// The set of witnesses {Z indep. of C, D = f(Z, C)} is the polytope of
// weightings of "function columns" g: C -> D whose pushforwards reproduce
// every P(D|C=c). On it the excess equals H(D|Z) - I(C;D), which is linear
// in the column weights, so the search is a column-generation simplex
// started from the FRL refinement (a vertex). The final basis is re-solved
// in exact arithmetic. Deterministic for a given seed.
SfrlWitness SfrlConstruct(const JointPMF& joint_cd, const SfrlOptions& options = {});

// Conditional variant for a joint over exactly (C, D, V): Z independent of
// (C, V), D = f(Z, C, V), small I(C;Z|D,V). The objective separates over v,
// so each slice is solved on its own and the slice solutions are coupled
// through one shared Z by inverse-CDF refinement.
SfrlWitness ConditionalSfrlConstruct(const JointPMF& joint_cdv,
                                     const SfrlOptions& options = {});

// log2(I + 1) + 4 for the mutual information named by `mi` (which must be an
// I(.;.) or I(.;.|.) query). Throws UnknownAxis / InvalidArgument.
double SfrlExcessBound(const JointPMF& joint, const MeasureQuery& mi);

}  // namespace fairrep

#endif  // FAIRREP_SFRL_H_
