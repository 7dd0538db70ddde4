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

#ifndef FAIRREP_FRL_H_
#define FAIRREP_FRL_H_

#include <optional>
#include <string>
#include <vector>

#include "fairrep/joint_pmf.h"
#include "fairrep/prob.h"

namespace fairrep {

// An auxiliary variable Z together with its coupling to (C, D[, V]) such that
// Z is independent of C (and V) and D is a deterministic function of
// (Z, C[, V]). Conditioning rows are indexed cv = c * |V| + v (|V| = 1 when
// there is no side variable).
struct FunctionalWitness {
  Axis cond;
  Axis data;
  std::optional<Axis> side;
  Alphabet aux;
  std::vector<Prob> p_aux;
  // f(z, cv) -> index into data; -1 for conditioning rows of zero mass.
  std::vector<int> map_f;
  // P(z | c, d[, v]) at [(cv * |D| + d) * |Z| + z]. Rows of zero mass hold
  // p_aux so every row is a distribution.
  std::vector<Prob> coupling;

  size_t num_aux() const { return aux.size(); }
  size_t num_side() const { return side ? side->alphabet.size() : 1; }
  size_t num_cond_rows() const { return cond.alphabet.size() * num_side(); }
  int f(size_t z, size_t cv) const { return map_f[z * num_cond_rows() + cv]; }
  const Prob& coupling_at(size_t cv, size_t d, size_t z) const {
    return coupling[(cv * data.alphabet.size() + d) * num_aux() + z];
  }

  // Joint over (C, D[, V], aux_role) from a joint over (C, D[, V]) whose
  // axes match the witness. Throws AlphabetMismatch.
  JointPMF JointWith(const JointPMF& source,
                     const std::string& aux_role = "U") const;
};

// Output of the plain functional representation construction.
struct FrlWitness : FunctionalWitness {};

// Inverse-CDF common refinement: for every c of positive mass, [0,1) is cut
// at the cumulative sums of P(D|C=c) (in the order of D's alphabet); U ranges
// over the cells of the union of all cuts. Exact in exact mode.
//
// `joint_cd` must have exactly two axes, C first. Throws InvalidArgument,
// DegenerateConditional.
FrlWitness FrlConstruct(const JointPMF& joint_cd);

// Certificates for a functional witness, all in bits.
struct WitnessReport {
  double independence_residual;  // I(Z; C[,V])
  double determinism_residual;   // H(D | Z, C[, V])
  double aux_data_information;   // I(Z; D)
  double data_given_cond;        // H(D | C[, V])
  double excess;                 // I(C; Z | D[, V])
};

// Rebuilds the joint (C, D[, V], Z) and measures the lemma guarantees.
// `source` must match the witness axes; throws AlphabetMismatch.
WitnessReport WitnessVerify(const FunctionalWitness& w, const JointPMF& source);

}  // namespace fairrep

#endif  // FAIRREP_FRL_H_
