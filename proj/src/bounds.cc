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

#include "fairrep/bounds.h"

#include <algorithm>
#include <cmath>

#include "fairrep/errors.h"
#include "fairrep/info.h"

namespace fairrep {
namespace {

// Slack for deciding which side of a regime boundary r falls on; r is often
// passed as a computed entropy itself.
constexpr double kBoundarySlack = 1e-12;

double Log2p1(double x) { return std::log2(std::max(0.0, x) + 1.0); }

void CheckRate(double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw InvalidArgument("rate must be a finite nonnegative number of bits");
  }
}

double L3Value(const SourceQuantities& q, double r, double a) {
  return q.h_t_given_xs + r - a * q.h_xs_given_t -
         Log2p1((1.0 - a) * q.i_xs_t + a * std::min(q.h_t, q.h_xs)) - 4.0;
}

}  // namespace

SourceQuantities ComputeSourceQuantities(const JointPMF& p) {
  InfoEngine e(p);
  SourceQuantities q;
  q.h_t = e.Measure(MeasureQuery::H({"T"}));
  q.h_s = e.Measure(MeasureQuery::H({"S"}));
  q.h_x = e.Measure(MeasureQuery::H({"X"}));
  q.h_xs = e.Measure(MeasureQuery::H({"X", "S"}));
  q.h_x_given_s = e.Measure(MeasureQuery::H({"X"}, {"S"}));
  q.h_t_given_s = e.Measure(MeasureQuery::H({"T"}, {"S"}));
  q.h_t_given_xs = e.Measure(MeasureQuery::H({"T"}, {"X", "S"}));
  q.h_xs_given_t = e.Measure(MeasureQuery::H({"X", "S"}, {"T"}));
  q.h_s_given_t = e.Measure(MeasureQuery::H({"S"}, {"T"}));
  q.h_xt_given_s = e.Measure(MeasureQuery::H({"X", "T"}, {"S"}));
  q.h_x_given_ts = e.Measure(MeasureQuery::H({"X"}, {"T", "S"}));
  q.i_xs_t = e.Measure(MeasureQuery::I({"X", "S"}, {"T"}));
  q.i_x_t_given_s = e.Measure(MeasureQuery::I({"X"}, {"T"}, {"S"}));
  return q;
}

std::string ToString(RateRegime r) {
  switch (r) {
    case RateRegime::kLow:
      return "LOW";
    case RateRegime::kHigh:
      return "HIGH";
    case RateRegime::kUnconstrained:
      return "UNCONSTRAINED";
  }
  return "?";
}

std::string ToString(P2Regime r) {
  switch (r) {
    case P2Regime::kFull:
      return "FULL";
    case P2Regime::kMid:
      return "MID";
    case P2Regime::kOpen:
      return "OPEN";
  }
  return "?";
}

BoundSetP1 BoundsP1(const JointPMF& p, double r) {
  return BoundsP1(ComputeSourceQuantities(p), r);
}

BoundSetP1 BoundsP1(const SourceQuantities& q, double r) {
  CheckRate(r);
  BoundSetP1 b;
  b.r = r;
  b.upper = q.h_t_given_s;
  b.L2 = q.h_t_given_xs - Log2p1(q.i_xs_t) - 4.0;
  const double hxs = q.h_x_given_s;
  std::vector<std::pair<std::string, double>> candidates;
  if (r <= hxs + kBoundarySlack) {
    b.regime = RateRegime::kLow;
    // H(X|S) = 0 forces r = 0 here; the erasure then keeps nothing.
    const double a = hxs > 0.0 ? std::min(1.0, r / hxs) : 0.0;
    b.alpha = a;
    b.L1 = q.h_t_given_xs + r - q.h_xs_given_t;
    b.L3 = L3Value(q, r, a);
    candidates = {{"L1", *b.L1}, {"L2", b.L2}, {"L3", *b.L3}};
    if (std::fabs(r - hxs) <= kBoundarySlack) {
      b.L1_prime = q.h_t - q.h_s;
      candidates.push_back({"L1_prime", *b.L1_prime});
    }
  } else {
    b.regime = r < q.h_x ? RateRegime::kHigh : RateRegime::kUnconstrained;
    b.L1_prime = q.h_t - q.h_s;
    candidates = {{"L2", b.L2}, {"L1_prime", *b.L1_prime}};
  }
  b.best_id = candidates[0].first;
  b.best_lower = candidates[0].second;
  for (const auto& [id, v] : candidates) {
    if (v > b.best_lower) {
      b.best_lower = v;
      b.best_id = id;
    }
  }
  b.best_lower_usable = std::max(0.0, b.best_lower);
  return b;
}

BoundSetP2 BoundsP2(const JointPMF& p, double r) {
  return BoundsP2(ComputeSourceQuantities(p), r);
}

BoundSetP2 BoundsP2(const SourceQuantities& q, double r) {
  CheckRate(r);
  BoundSetP2 b;
  b.r = r;
  b.upper = q.h_t_given_s;
  b.threshold = Log2p1(q.i_x_t_given_s) + 4.0;
  b.h_x_given_ts = q.h_x_given_ts;
  b.L1c = q.h_t_given_xs - b.threshold;
  if (r >= q.h_x_given_ts - kBoundarySlack) {
    b.regime = P2Regime::kFull;
    b.exact_value = b.upper;
  } else if (r >= b.threshold) {
    b.regime = P2Regime::kMid;
  } else {
    b.regime = P2Regime::kOpen;
  }
  return b;
}

DominanceReport Dominance(const JointPMF& p, double r) {
  const SourceQuantities q = ComputeSourceQuantities(p);
  const BoundSetP1 b = BoundsP1(q, r);
  if (b.regime != RateRegime::kLow) {
    throw RegimeError("dominance comparisons need 0 <= r <= H(X|S)");
  }
  DominanceReport d;
  d.r = r;
  d.L1 = *b.L1;
  d.L2 = b.L2;
  d.L3 = *b.L3;
  d.argmax = "L1";
  double best = d.L1;
  if (d.L2 > best) {
    best = d.L2;
    d.argmax = "L2";
  }
  if (d.L3 > best) d.argmax = "L3";

  const double a = *b.alpha;
  const bool r_small = r > 0.0 && a <= 0.125;
  d.branches.push_back({"xt_given_s_at_most_4", "H(X,T|S) <= 4", "L2 <= L1", false,
                        q.h_xt_given_s <= 4.0, d.L2 <= d.L1});
  d.branches.push_back({"small_r_large_xt_given_s", "r small and H(X,T|S) >> 4",
                        "L2 >= L1", false, r_small && q.h_xt_given_s >= 8.0,
                        d.L2 >= d.L1});
  d.branches.push_back({"x_given_s_at_most_xs_given_t", "H(X|S) <= H(X,S|T)",
                        "L2 >= L3", true,
                        q.h_x_given_s <= q.h_xs_given_t + kBoundarySlack,
                        d.L2 >= d.L3 - kBoundarySlack});
  d.branches.push_back({"x_given_s_at_least_xs_given_t", "H(X|S) >= H(X,S|T)",
                        "L2 <= L3", false,
                        q.h_x_given_s >= q.h_xs_given_t - kBoundarySlack,
                        d.L2 <= d.L3 + kBoundarySlack});
  d.branches.push_back({"small_r_large_xs_given_t", "r small and H(X,S|T) >> 4",
                        "L1 <= L3", false, r_small && q.h_xs_given_t >= 8.0,
                        d.L1 <= d.L3});

  d.full_rate_case_applies = std::fabs(r - q.h_x_given_s) <= kBoundarySlack &&
                       q.h_s_given_t < 4.0;
  d.l1_minus_l2 = d.L1 - d.L2;
  d.l1_minus_l3 = d.L1 - d.L3;
  d.l1_minus_l2_closed_form = q.h_t_given_s - q.h_t_given_xs + Log2p1(q.i_xs_t) +
                              4.0 - q.h_s_given_t;
  d.l1_minus_l3_closed_form = Log2p1(std::min(q.h_t, q.h_xs)) + 4.0;
  d.branches.push_back({"full_rate_small_s_given_t", "r = H(X|S) and H(S|T) < 4",
                        "L1 >= max{L2, L3}", true, d.full_rate_case_applies,
                        d.L1 >= std::max(d.L2, d.L3) - kBoundarySlack});
  return d;
}

}  // namespace fairrep
