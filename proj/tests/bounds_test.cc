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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "fairrep/bounds.h"
#include "fairrep/errors.h"
#include "fairrep/info.h"
#include "fairrep/instances.h"
#include "brute.h"
#include "testing_util.h"

namespace fairrep {
namespace {

using testing::BruteH;
using testing::BruteHc;
using testing::BruteI;

TEST(BoundsP1Test, D1AtHalfBit) {
  BoundSetP1 b = BoundsP1(InstanceD1(), 0.5);
  EXPECT_EQ(b.regime, RateRegime::kLow);
  EXPECT_DOUBLE_EQ(*b.alpha, 0.5);
  EXPECT_NEAR(*b.L1, -0.5, 1e-12);
  EXPECT_NEAR(b.L2, -5.0, 1e-12);
  EXPECT_NEAR(*b.L3, -5.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  EXPECT_FALSE(b.L1_prime.has_value());
  EXPECT_EQ(b.best_id, "L1");
  EXPECT_EQ(b.best_lower_usable, 0.0);
}

TEST(BoundsP1Test, D2AtOneBit) {
  BoundSetP1 b = BoundsP1(InstanceD2(), 1.0);
  EXPECT_EQ(b.regime, RateRegime::kLow);
  EXPECT_DOUBLE_EQ(*b.alpha, 1.0);
  EXPECT_NEAR(*b.L1, 1.0, 1e-12);
  EXPECT_NEAR(b.L2, -(std::log2(3.0) + 4.0), 1e-12);
  EXPECT_NEAR(*b.L3, 1.0 - std::log2(3.0) - 4.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  // r = H(X|S): both regimes apply and the two first bounds coincide.
  ASSERT_TRUE(b.L1_prime.has_value());
  EXPECT_NEAR(*b.L1_prime, *b.L1, 1e-12);
  EXPECT_NEAR(b.best_lower, b.upper, 1e-12);
}

TEST(BoundsP1Test, D2HighRate) {
  BoundSetP1 b = BoundsP1(InstanceD2(), 1.5);
  EXPECT_EQ(b.regime, RateRegime::kHigh);
  EXPECT_FALSE(b.L1.has_value());
  EXPECT_FALSE(b.L3.has_value());
  EXPECT_NEAR(*b.L1_prime, 1.0, 1e-12);
  EXPECT_NEAR(b.best_lower, b.upper, 1e-12);
  EXPECT_EQ(b.best_id, "L1_prime");
  EXPECT_EQ(BoundsP1(InstanceD2(), 2.0).regime, RateRegime::kUnconstrained);
}

TEST(BoundsP1Test, DegenerateConditionalEntropy) {
  // D3 has X = S, so H(X|S) = 0.
  BoundSetP1 zero = BoundsP1(InstanceD3(), 0.0);
  EXPECT_EQ(zero.regime, RateRegime::kLow);
  EXPECT_EQ(*zero.alpha, 0.0);
  EXPECT_NEAR(*zero.L3, zero.L2, 1e-12);
  EXPECT_EQ(BoundsP1(InstanceD3(), 0.5).regime, RateRegime::kHigh);
  EXPECT_THROW(BoundsP1(InstanceD3(), -0.1), InvalidArgument);
}

TEST(BoundsP1Test, ClosedFormsAgainstBruteForce) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    JointPMF p = testing::RandomSource(rng, 3, 2);
    const double hxs = BruteHc(p, {"X"}, {"S"});
    if (hxs < 1e-6) continue;
    const double r = hxs * (trial % 10 + 1) / 10.0;
    BoundSetP1 b = BoundsP1(p, r);
    ASSERT_EQ(b.regime, RateRegime::kLow);
    const double a = r / hxs;
    const double ht_xs = BruteHc(p, {"T"}, {"X", "S"});
    const double hxs_t = BruteHc(p, {"X", "S"}, {"T"});
    const double i = BruteI(p, {"X", "S"}, {"T"});
    const double mn = std::min(BruteH(p, {"T"}), BruteH(p, {"X", "S"}));
    EXPECT_NEAR(*b.L1, ht_xs + r - hxs_t, 1e-9);
    EXPECT_NEAR(b.L2, ht_xs - std::log2(i + 1) - 4, 1e-9);
    EXPECT_NEAR(*b.L3, ht_xs + r - a * hxs_t - std::log2((1 - a) * i + a * mn + 1) - 4,
                1e-9);
    EXPECT_NEAR(b.upper, BruteHc(p, {"T"}, {"S"}), 1e-12);
    EXPECT_EQ(b.upper, H(p, {"T"}, {"S"}));
    EXPECT_TRUE(std::isfinite(*b.L3));
  }
}

TEST(BoundsP1Test, L1DominatesL3AtFullRate) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    JointPMF p = testing::RandomSource(rng, 3, 2);
    const double hxs = H(p, {"X"}, {"S"});
    if (hxs <= 0) continue;
    BoundSetP1 b = BoundsP1(p, hxs);
    const double mn = std::min(H(p, {"T"}), H(p, {"X", "S"}));
    EXPECT_NEAR(*b.L1 - *b.L3, std::log2(mn + 1) + 4, 1e-9);
    EXPECT_GE(*b.L1 - *b.L3, 4.0 - 1e-12);
  }
}

TEST(BoundsP1Test, MonotoneInRate) {
  // L1 has slope 1. L3 has slope 1 - H(X,S|T)/H(X|S) minus a log term whose
  // derivative is at most (min{H(T),H(X,S)} - I(X,S;T)) / (H(X|S) ln 2), so
  // it is nondecreasing when H(X|S) - H(X,S|T) covers that.
  std::mt19937_64 rng(43);
  int l3_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    JointPMF p = testing::RandomSource(rng, 3, 2);
    if (trial % 2) {
      // T copies (S, X): the slope of L3 is then exactly 1.
      const size_t ns = p.axes()[0].alphabet.size(), nx = p.axes()[1].alphabet.size();
      JointPMF sx = p.Marginal({"S", "X"});
      std::vector<Prob> mass(ns * nx * ns * nx);
      for (size_t i = 0; i < ns * nx; ++i) mass[i * ns * nx + i] = sx.mass()[i];
      p = JointPMF({p.axes()[0], p.axes()[1], testing::MakeAxis("T", ns * nx)}, mass);
    }
    const SourceQuantities q = ComputeSourceQuantities(p);
    const double hxs = q.h_x_given_s;
    if (hxs <= 0) continue;
    const bool l3_monotone = hxs - q.h_xs_given_t >=
                             (std::min(q.h_t, q.h_xs) - q.i_xs_t) / std::log(2.0) - 1e-12;
    l3_checked += l3_monotone;
    double prev1 = -1e300, prev3 = -1e300;
    for (int k = 0; k <= 20; ++k) {
      BoundSetP1 b = BoundsP1(p, hxs * k / 20.0);
      EXPECT_GE(*b.L1, prev1 - 1e-12);
      if (l3_monotone) EXPECT_GE(*b.L3, prev3 - 1e-12);
      if (k > 0) EXPECT_NEAR(*b.L1 - prev1, hxs / 20.0, 1e-9);
      prev1 = *b.L1;
      prev3 = *b.L3;
    }
  }
  EXPECT_GT(l3_checked, 0);
}

TEST(BoundsP1Test, ThirdBoundCanDecreaseInRate) {
  // S constant, X and T independent fair bits: L3(r) = -3 - log2(r + 1).
  JointPMF p({{"S", Alphabet({"0"})}, {"X", Alphabet({"0", "1"})}, {"T", Alphabet({"0", "1"})}},
             {Prob(1, 4), Prob(1, 4), Prob(1, 4), Prob(1, 4)});
  for (double r : {0.0, 0.25, 0.5, 1.0}) {
    EXPECT_NEAR(*BoundsP1(p, r).L3, -3 - std::log2(r + 1), 1e-12);
  }
  EXPECT_LT(*BoundsP1(p, 1.0).L3, *BoundsP1(p, 0.0).L3);
}

TEST(BoundsP2Test, NamedInstances) {
  for (double r : {0.0, 0.5, 3.0}) {
    BoundSetP2 b = BoundsP2(InstanceD2(), r);
    EXPECT_EQ(b.regime, P2Regime::kFull);
    EXPECT_NEAR(*b.exact_value, 1.0, 1e-12);
  }
  BoundSetP2 d4 = BoundsP2(InstanceD4(), 6.0);
  EXPECT_EQ(d4.regime, P2Regime::kFull);
  EXPECT_NEAR(*d4.exact_value, 1.0, 1e-12);
  EXPECT_EQ(BoundsP2(InstanceD4(), 0.5).regime, P2Regime::kOpen);

  BoundSetP2 d5 = BoundsP2(InstanceD5(), 4.9);
  EXPECT_NEAR(d5.h_x_given_ts, 5.0, 1e-12);
  EXPECT_NEAR(d5.threshold, 5.0, 1e-12);
  EXPECT_EQ(d5.regime, P2Regime::kOpen);
  EXPECT_FALSE(d5.exact_value.has_value());
  EXPECT_NEAR(d5.L1c, -5.0, 1e-12);
  EXPECT_EQ(BoundsP2(InstanceD5(), 5.0).regime, P2Regime::kFull);
}

TEST(BoundsP2Test, MidRegimeWindow) {
  // S, T fair bits and X = (S, T, N1..N7): H(X|T,S) = 7, threshold 5.
  std::vector<std::string> xs;
  for (int v = 0; v < 512; ++v) xs.push_back(std::to_string(v));
  std::vector<Prob> mass(2 * 512 * 2);
  for (size_t v = 0; v < 512; ++v) mass[((v >> 8) * 512 + v) * 2 + ((v >> 7) & 1)] = Prob(1, 512);
  JointPMF p({{"S", Alphabet({"0", "1"})}, {"X", Alphabet(xs)}, {"T", Alphabet({"0", "1"})}},
             mass);
  EXPECT_EQ(BoundsP2(p, 6.0).regime, P2Regime::kMid);
  EXPECT_EQ(BoundsP2(p, 4.0).regime, P2Regime::kOpen);
  EXPECT_EQ(BoundsP2(p, 7.0).regime, P2Regime::kFull);
}

const DominanceBranch& Branch(const DominanceReport& d, const std::string& id) {
  for (const auto& b : d.branches) {
    if (b.id == id) return b;
  }
  throw std::runtime_error("missing branch " + id);
}

TEST(DominanceTest, FullRateCaseOnD2) {
  DominanceReport d = Dominance(InstanceD2(), 1.0);
  EXPECT_TRUE(d.full_rate_case_applies);
  EXPECT_EQ(d.argmax, "L1");
  const DominanceBranch& e = Branch(d, "full_rate_small_s_given_t");
  EXPECT_TRUE(e.hypothesis_holds);
  EXPECT_TRUE(e.relation_holds);
  EXPECT_NEAR(d.l1_minus_l2, d.l1_minus_l2_closed_form, 1e-9);
  EXPECT_NEAR(d.l1_minus_l3, d.l1_minus_l3_closed_form, 1e-9);
  // S is a function of T here: the "L2 <= L3 can happen" branch is visible.
  const DominanceBranch& s_of_t = Branch(d, "x_given_s_at_least_xs_given_t");
  EXPECT_TRUE(s_of_t.hypothesis_holds);
  EXPECT_TRUE(s_of_t.relation_holds);
}

TEST(DominanceTest, TFunctionOfS) {
  DominanceReport d = Dominance(InstanceTS(), 0.5);
  const DominanceBranch& b = Branch(d, "x_given_s_at_most_xs_given_t");
  EXPECT_TRUE(b.provable);
  EXPECT_TRUE(b.hypothesis_holds);
  EXPECT_TRUE(b.relation_holds);
}

TEST(DominanceTest, D1SmallRate) {
  for (double r : {0.1, 0.5, 0.9}) {
    DominanceReport d = Dominance(InstanceD1(), r);
    EXPECT_EQ(d.argmax, "L1");
    EXPECT_NEAR(d.L1, r - 1.0, 1e-12);
    EXPECT_NEAR(d.L2, -5.0, 1e-12);
    EXPECT_TRUE(Branch(d, "xt_given_s_at_most_4").hypothesis_holds);
    EXPECT_TRUE(Branch(d, "xt_given_s_at_most_4").relation_holds);
  }
}

TEST(DominanceTest, ProvableBranchesHoldOnRandomSources) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    JointPMF p = testing::RandomSource(rng, 3, 2);
    const double hxs = H(p, {"X"}, {"S"});
    if (hxs <= 0) continue;
    for (double f : {0.2, 0.6, 1.0}) {
      DominanceReport d = Dominance(p, f * hxs);
      for (const auto& b : d.branches) {
        if (b.provable && b.hypothesis_holds) {
          EXPECT_TRUE(b.relation_holds) << b.id << " trial " << trial;
        }
      }
    }
  }
}

TEST(DominanceTest, OutsideLowRegime) {
  EXPECT_THROW(Dominance(InstanceD2(), 1.5), RegimeError);
}

}  // namespace
}  // namespace fairrep
