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

#ifndef FAIRREP_INFO_H_
#define FAIRREP_INFO_H_

#include <map>
#include <string>
#include <vector>

#include "fairrep/joint_pmf.h"
#include "fairrep/mechanism.h"

namespace fairrep {

using RoleSet = std::vector<std::string>;

// One Shannon quantity over role tags of a joint: H(L), H(L|G), I(L;R),
// I(L;R|G). All values are in bits.
struct MeasureQuery {
  enum class Kind {
    kEntropy,
    kConditionalEntropy,
    kMutualInformation,
    kConditionalMutualInformation,
  };
  Kind kind;
  RoleSet left;
  RoleSet right;
  RoleSet given;

  static MeasureQuery H(RoleSet left, RoleSet given = {});
  static MeasureQuery I(RoleSet left, RoleSet right, RoleSet given = {});

  std::string ToString() const;
};

// Evaluates measures over one joint, caching marginal entropies. Not
// thread-safe; construct one per thread.
//
// In exact mode a measure is returned as exactly 0.0 if and only if the
// underlying determinism / conditional independence holds exactly in the
// rational masses; otherwise the double evaluation is returned, floored at
// the smallest positive double. In float mode the raw double evaluation is
// returned (it may be a rounding-level negative).
class InfoEngine {
 public:
  explicit InfoEngine(const JointPMF& joint) : joint_(joint) {}

  // Throws UnknownAxis / InvalidArgument (overlapping role sets).
  double Measure(const MeasureQuery& q);
  double Entropy(const RoleSet& roles);

  // Exact-zero certificate for q (exact joints only; float joints compare
  // with kFloatZero).
  bool IsExactlyZero(const MeasureQuery& q);

  const JointPMF& joint() const { return joint_; }

 private:
  RoleSet Canonical(const RoleSet& roles) const;
  bool DeterministicGiven(const RoleSet& data, const RoleSet& given);
  bool IndependentGiven(const RoleSet& a, const RoleSet& b,
                        const RoleSet& given);

  const JointPMF& joint_;
  std::map<RoleSet, double> entropy_cache_;
};

double InfoMeasure(const JointPMF& joint, const MeasureQuery& q);

// Shorthands: H(left|given), I(left;right|given).
double H(const JointPMF& joint, const RoleSet& left, const RoleSet& given = {});
double I(const JointPMF& joint, const RoleSet& left, const RoleSet& right,
         const RoleSet& given = {});

// Joint of source and mechanism: mass(inputs, y) = source(inputs) * kernel.
// The source axes must equal the mechanism inputs (roles, order, symbols);
// throws AlphabetMismatch otherwise.
JointPMF Induce(const JointPMF& source, const Mechanism& mech);

// |I(Y;T) - [I(X,S;Y) + H(T|X,S) - H(T|Y,X,S) - I(X,S;Y|T)]| on a joint with
// axes S, X, T, Y. Exact mode reduces both sides to the same linear form in
// joint entropies and evaluates the cancelled form (exactly 0 for this
// identity); float mode evaluates each term separately.
double KeyIdentityResidual(const JointPMF& joint4);

// One information-diagram cell for the variables in `members`, conditioned
// on the remaining axes.
struct Atom {
  unsigned mask;  // bit i set = axis i of the joint is inside the cell
  std::string label;
  double bits;
};

// All 2^n - 1 atoms of a joint with 2 to 4 axes, ordered by mask. Computed by
// inclusion-exclusion over joint entropies. Throws TooManyAxes.
std::vector<Atom> IMeasureAtoms(const JointPMF& joint);

}  // namespace fairrep

#endif  // FAIRREP_INFO_H_
