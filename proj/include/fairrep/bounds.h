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

#ifndef FAIRREP_BOUNDS_H_
#define FAIRREP_BOUNDS_H_

#include <optional>
#include <string>
#include <vector>

#include "fairrep/joint_pmf.h"

namespace fairrep {

// Source entropies that every bound formula is built from (bits).
struct SourceQuantities {
  double h_t;            // H(T)
  double h_s;            // H(S)
  double h_x;            // H(X)
  double h_xs;           // H(X,S)
  double h_x_given_s;    // H(X|S)
  double h_t_given_s;    // H(T|S)
  double h_t_given_xs;   // H(T|X,S)
  double h_xs_given_t;   // H(X,S|T)
  double h_s_given_t;    // H(S|T)
  double h_xt_given_s;   // H(X,T|S)
  double h_x_given_ts;   // H(X|T,S)
  double i_xs_t;         // I(X,S;T)
  double i_x_t_given_s;  // I(X;T|S)
};

// Requires axes S, X, T. Throws UnknownAxis.
SourceQuantities ComputeSourceQuantities(const JointPMF& p);

enum class RateRegime { kLow, kHigh, kUnconstrained };
std::string ToString(RateRegime r);

// Lower and upper bounds on the rate-limited perfect-privacy utility.
//
//   L1  = H(T|X,S) + r - H(X,S|T)
//   L2  = H(T|X,S) - log2(I(X,S;T) + 1) - 4
//   L3  = H(T|X,S) + r - a H(X,S|T)
//         - log2((1 - a) I(X,S;T) + a min{H(T), H(X,S)} + 1) - 4
//   L1' = H(T) - H(S)
//   upper = H(T|S)
//
// with a = r / H(X|S). LOW is 0 <= r <= H(X|S) and reports L1, L2, L3 (and
// L1' too at r = H(X|S), where both regimes apply). HIGH is H(X|S) < r <
// H(X) and UNCONSTRAINED is r >= H(X); both report L1' and L2.
struct BoundSetP1 {
  double r = 0.0;
  RateRegime regime = RateRegime::kLow;
  std::optional<double> alpha;
  std::optional<double> L1;
  double L2 = 0.0;
  std::optional<double> L3;
  std::optional<double> L1_prime;
  double upper = 0.0;
  double best_lower = 0.0;         // max of the reported lower bounds
  double best_lower_usable = 0.0;  // best_lower clipped at 0
  std::string best_id;             // "L1", "L2", "L3" or "L1_prime"
};

// Throws InvalidArgument for r < 0 or non-finite r.
BoundSetP1 BoundsP1(const JointPMF& p, double r);
BoundSetP1 BoundsP1(const SourceQuantities& q, double r);

enum class P2Regime { kFull, kMid, kOpen };
std::string ToString(P2Regime r);

// Bounds on the utility I(Y;T|S) under I(Y;S)=0, I(X;Y|S,T) <= r.
// FULL: r >= H(X|T,S), exact value H(T|S). MID: threshold <= r < H(X|T,S)
// with threshold = log2(I(X;T|S) + 1) + 4. OPEN: below both.
struct BoundSetP2 {
  double r = 0.0;
  P2Regime regime = P2Regime::kOpen;
  std::optional<double> exact_value;
  double L1c = 0.0;  // H(T|S,X) - log2(I(X;T|S) + 1) - 4
  double upper = 0.0;
  double threshold = 0.0;
  double h_x_given_ts = 0.0;
};

BoundSetP2 BoundsP2(const JointPMF& p, double r);
BoundSetP2 BoundsP2(const SourceQuantities& q, double r);

// One published comparison between lower bounds.
struct DominanceBranch {
  std::string id;
  std::string hypothesis;  // human-readable
  std::string relation;    // e.g. "L2 <= L1"
  bool provable = false;   // false: the comparison is a heuristic ("can")
  bool hypothesis_holds = false;
  bool relation_holds = false;
};

// Predicates on the three LOW-regime bounds. Thresholds for the heuristic
// branches: "r small" is a <= 1/8 with r > 0, "much greater than 4" is >= 8.
struct DominanceReport {
  double r = 0.0;
  double L1 = 0.0, L2 = 0.0, L3 = 0.0;
  std::string argmax;  // "L1", "L2" or "L3"; ties go to the earlier name
  std::vector<DominanceBranch> branches;
  // r = H(X|S) and H(S|T) < 4: L1 dominates. The two differences are
  // reported both as measured and from their closed forms.
  bool full_rate_case_applies = false;
  double l1_minus_l2 = 0.0;
  double l1_minus_l2_closed_form = 0.0;
  double l1_minus_l3 = 0.0;
  double l1_minus_l3_closed_form = 0.0;
};

// Throws RegimeError when r is not in the LOW regime.
DominanceReport Dominance(const JointPMF& p, double r);

}  // namespace fairrep

#endif  // FAIRREP_BOUNDS_H_
