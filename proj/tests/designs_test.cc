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
#include <functional>
#include <random>

#include "gtest/gtest.h"
#include "fairrep/bounds.h"
#include "fairrep/designs.h"
#include "fairrep/errors.h"
#include "fairrep/frl.h"
#include "fairrep/info.h"
#include "fairrep/instances.h"
#include "brute.h"
#include "testing_util.h"

namespace fairrep {
namespace {

using testing::BruteI;

// Appends U' drawn from P(u'|u) to a joint whose last axis is U.
JointPMF AppendErased(const JointPMF& j, const ErasedWitness& e) {
  const size_t nu = e.num_base();
  const size_t nup = e.u_prime.size();
  std::vector<Axis> axes = j.axes();
  axes.push_back({"U'", e.u_prime});
  std::vector<Prob> mass(j.num_cells() * nup);
  for (size_t flat = 0; flat < j.num_cells(); ++flat) {
    const size_t u = flat % nu;
    for (size_t v = 0; v < nup; ++v) mass[flat * nup + v] = j.mass()[flat] * e.at(u, v);
  }
  return JointPMF(axes, mass);
}

Mechanism Deterministic(const JointPMF& p, std::function<size_t(size_t, size_t, size_t)> f,
                        size_t ny) {
  std::vector<Prob> kernel;
  for (size_t flat = 0; flat < p.num_cells(); ++flat) {
    auto idx = p.unflatten(flat);
    const size_t y = f(idx[0], idx[1], idx[2]);
    for (size_t k = 0; k < ny; ++k) kernel.push_back(Prob(k == y ? 1 : 0, 1));
  }
  return Mechanism(p.axes(), {"Y", Alphabet::Indexed("y", ny)}, kernel);
}

TEST(EraseTest, IdentityAndConstantCases) {
  JointPMF uv({{"C", Alphabet({"0", "1"})}, {"D", Alphabet({"0", "1"})}},
              {Prob(1, 2), Prob(0, 1), Prob(0, 1), Prob(1, 2)});
  FrlWitness w = FrlConstruct(uv);
  JointPMF full = w.JointWith(uv);
  for (auto [alpha, want] : {std::pair{Prob(1, 1), 1.0}, std::pair{Prob(0, 1), 0.0}}) {
    ErasedWitness e = Erase(w, alpha);
    JointPMF j = AppendErased(full, e);
    EXPECT_NEAR(I(j, {"U'"}, {"C", "D"}), want * I(j, {"U"}, {"C", "D"}), 1e-12);
    EXPECT_NEAR(I(j, {"U'"}, {"U"}), want * H(j, {"U"}), 1e-12);
  }
  EXPECT_THROW(Erase(w, Prob(3, 2)), AlphaOutOfRange);
  EXPECT_THROW(Erase(w, Prob(-1, 2)), AlphaOutOfRange);
}

TEST(EraseTest, FairBitAtHalf) {
  // U = V fair bit: I(U';V) = 1/2.
  JointPMF uv({{"C", Alphabet({"0"})}, {"D", Alphabet({"0", "1"})}}, {Prob(1, 2), Prob(1, 2)});
  FrlWitness w = FrlConstruct(uv);  // U determines D exactly
  ErasedWitness e = Erase(w, Prob(1, 2));
  JointPMF j = AppendErased(w.JointWith(uv), e);
  EXPECT_NEAR(I(j, {"U"}, {"D"}), 1.0, 1e-12);
  EXPECT_NEAR(I(j, {"U'"}, {"D"}), 0.5, 1e-12);
  EXPECT_NEAR(BruteI(j, {"U'"}, {"D"}), 0.5, 1e-12);
}

TEST(EraseTest, IdentityOnRandomPairs) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    JointPMF cd = testing::RandomJoint(
        rng, {{"C", Alphabet::Indexed("c", testing::RandomSize(rng, 1, 3))},
              {"D", Alphabet::Indexed("d", testing::RandomSize(rng, 1, 3))}});
    FrlWitness w = FrlConstruct(cd);
    const Prob alpha(static_cast<long>(testing::RandomSize(rng, 0, 8)), 8);
    ErasedWitness e = Erase(w, alpha);
    JointPMF j = AppendErased(w.JointWith(cd), e);
    for (const RoleSet& v : {RoleSet{"C"}, RoleSet{"D"}, RoleSet{"C", "D"}}) {
      EXPECT_NEAR(I(j, {"U'"}, v), alpha.to_double() * I(j, {"U"}, v), 1e-9);
    }
  }
}

TEST(EraseTest, FreshSymbolAvoidsInputs) {
  Alphabet a({"c", "c~", "x"});
  Alphabet b({"c~~"});
  EXPECT_EQ(FreshSymbol({&a, &b}), "c~~~");
  EXPECT_EQ(FreshSymbol({}), "c");
}

TEST(DesignP1Test, D2DesignA) {
  JointPMF d2 = InstanceD2();
  BuildResult b = BuildP1(d2, 1.0, Design::kA);
  EXPECT_EQ(*b.alpha, Prob(1, 1));
  MechanismReport m = Evaluate(d2, b.mechanism, 1.0);
  EXPECT_NEAR(m.utility_p1, 1.0, 1e-12);
  EXPECT_EQ(m.secrecy, 0.0);
  EXPECT_NEAR(m.rate_p1, 1.0, 1e-12);
  EXPECT_TRUE(m.feasible_p1);
  EXPECT_EQ(b.guarantee, "L1");
  EXPECT_GE(m.utility_p1, *b.guaranteed_value - 1e-9);
  // Y = (U', Y') pairs.
  EXPECT_EQ(b.mechanism.output().alphabet[0].front(), '(');
}

TEST(DesignP1Test, D2HighRate) {
  JointPMF d2 = InstanceD2();
  BuildResult b = BuildP1(d2, 1.5, Design::kHighRate);
  MechanismReport m = Evaluate(d2, b.mechanism, 1.5);
  EXPECT_NEAR(m.utility_p1, 1.0, 1e-12);
  EXPECT_NEAR(m.utility_p1, H(d2, {"T"}) - H(d2, {"S"}), 1e-12);
  EXPECT_TRUE(m.feasible_p1);
}

TEST(DesignP1Test, D3DesignBIsUseless) {
  JointPMF d3 = InstanceD3();
  BuildResult b = BuildP1(d3, 0.5, Design::kB);
  MechanismReport m = Evaluate(d3, b.mechanism, 0.5);
  EXPECT_EQ(m.utility_p1, 0.0);
  EXPECT_EQ(m.secrecy, 0.0);
  EXPECT_EQ(m.rate_p1, 0.0);
}

TEST(DesignP1Test, RegimeAndDegenerateErrors) {
  EXPECT_THROW(BuildP1(InstanceD3(), 0.0, Design::kA), DegenerateSource);
  EXPECT_THROW(BuildP1(InstanceD3(), 0.0, Design::kC), DegenerateSource);
  EXPECT_THROW(BuildP1(InstanceD2(), 1.2, Design::kA), RegimeError);
  EXPECT_THROW(BuildP1(InstanceD2(), 0.5, Design::kHighRate), RegimeError);
  EXPECT_THROW(BuildP1(InstanceD2(), 2.0, Design::kHighRate), RegimeError);
  EXPECT_THROW(BuildP1(InstanceD2(), -1.0, Design::kB), RegimeError);
  EXPECT_NO_THROW(BuildP1(InstanceD3(), 0.0, Design::kB));
}

TEST(DesignP1Test, DesignAInternals) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    JointPMF p = testing::RandomSource(rng, 3, 2);
    const double hxs = H(p, {"X"}, {"S"});
    if (hxs <= 0) continue;
    const double r = hxs * (trial % 4 + 1) / 4.0;
    BuildResult b = BuildP1(p, r, Design::kA);
    JointPMF j = Induce(p, b.mechanism);
    // Y is a relabeling of (U', Y'), and Y' is independent of (S,X,U').
    EXPECT_NEAR(I(j, {"Y"}, {"X", "S"}), r, 1e-9);
    EXPECT_EQ(H(j, {"T"}, {"X", "S", "Y"}), 0.0);
  }
}

TEST(DesignP1Test, HighRateMatchesFullRateDesignA) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    JointPMF p = testing::RandomSource(rng, 3, 2);
    const double hxs = H(p, {"X"}, {"S"});
    if (hxs <= 0 || hxs >= H(p, {"X"})) continue;
    MechanismReport hi = Evaluate(p, BuildP1(p, hxs, Design::kHighRate).mechanism, hxs);
    MechanismReport a = Evaluate(p, BuildP1(p, hxs, Design::kA).mechanism, hxs);
    EXPECT_NEAR(hi.utility_p1, a.utility_p1, 1e-9);
    EXPECT_GE(hi.utility_p1, H(p, {"T"}, {"S"}) - H(p, {"S"}, {"T"}) - 1e-9);
  }
}

TEST(DesignP1Test, UtilitiesMeetBoundsOnRandomSources) {
  std::mt19937_64 rng(54);
  int checked = 0, skipped_c = 0;
  for (int trial = 0; trial < 40; ++trial) {
    JointPMF p = testing::RandomSource(rng);
    const double hxs = H(p, {"X"}, {"S"});
    if (hxs <= 0) continue;
    for (double f : {0.1, 0.4, 0.7, 1.0}) {
      const double r = f * hxs;
      const BoundSetP1 bounds = BoundsP1(p, r);
      for (Design d : {Design::kA, Design::kB, Design::kC}) {
        DesignOptions opt;
        opt.seed = trial;
        BuildResult b = BuildP1(p, r, d, opt);
        MechanismReport m = Evaluate(p, b.mechanism, r);
        EXPECT_EQ(m.secrecy, 0.0);
        EXPECT_LE(m.rate_p1, r + 1e-9);
        EXPECT_TRUE(m.feasible_p1);
        const double target = d == Design::kA   ? *bounds.L1
                              : d == Design::kB ? bounds.L2
                                                : *bounds.L3;
        if (d == Design::kC && !b.sfrl_met_target) {
          ++skipped_c;
          continue;
        }
        EXPECT_GE(m.utility_p1, target - 1e-9) << ToString(d) << " trial " << trial;
        EXPECT_EQ(*b.guaranteed_value, target);
        EXPECT_EQ(KeyIdentityResidual(Induce(p, b.mechanism)), 0.0);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 200);
  EXPECT_EQ(skipped_c, 0);
}

TEST(DesignP1Test, FloatModeFeasibility) {
  std::mt19937_64 rng(55);
  JointPMF p = testing::RandomSource(rng, 3, 3).ToFloat();
  const double hxs = H(p, {"X"}, {"S"});
  ASSERT_GT(hxs, 0);
  for (Design d : {Design::kA, Design::kB, Design::kC}) {
    BuildResult b = BuildP1(p, hxs / 2, d);
    MechanismReport m = Evaluate(p, b.mechanism, hxs / 2);
    EXPECT_LT(std::fabs(m.secrecy), 1e-9);
    EXPECT_TRUE(m.feasible_p1);
  }
}

TEST(DesignP2Test, FullRegimeInstances) {
  for (JointPMF p : {InstanceD1(), InstanceD2()}) {
    BuildResult b = BuildP2(p, 0.0);
    JointPMF j = Induce(p, b.mechanism);
    MechanismReport m = Evaluate(p, b.mechanism, 0.0);
    EXPECT_EQ(m.secrecy, 0.0);
    EXPECT_EQ(H(j, {"T"}, {"Y", "S"}), 0.0);
    EXPECT_NEAR(m.utility_p2, 1.0, 1e-12);
    EXPECT_NEAR(m.utility_p2, H(p, {"T"}, {"S"}), 1e-12);
    EXPECT_EQ(m.rate_p2, 0.0);
    EXPECT_TRUE(m.feasible_p2);
  }
}

TEST(DesignP2Test, D4MidRegimeConstruction) {
  JointPMF d4 = InstanceD4();
  BuildResult b = BuildP2(d4, 0.5);
  JointPMF j = Induce(d4, b.mechanism);
  EXPECT_EQ(I(j, {"Y"}, {"S", "X"}), 0.0);
  EXPECT_EQ(H(j, {"T"}, {"S", "X", "Y"}), 0.0);
  EXPECT_LE(I(j, {"Y"}, {"X"}, {"T", "S"}), 5.0);
  EXPECT_GE(I(j, {"Y"}, {"T"}, {"S"}), H(d4, {"T"}, {"S", "X"}) - 5.0);
}

TEST(DesignP2Test, RandomSourcesConditionalConstruction) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 30; ++trial) {
    JointPMF p = testing::RandomSource(rng, 3, 2);
    const double hx_ts = H(p, {"X"}, {"T", "S"});
    if (hx_ts <= 0) continue;
    BuildResult b = BuildP2(p, hx_ts / 2);
    JointPMF j = Induce(p, b.mechanism);
    EXPECT_EQ(I(j, {"Y"}, {"S", "X"}), 0.0);
    EXPECT_EQ(H(j, {"T"}, {"S", "X", "Y"}), 0.0);
    EXPECT_NEAR(I(j, {"Y"}, {"X"}, {"T", "S"}), *b.sfrl_excess, 1e-9);
    EXPECT_LE(*b.sfrl_excess, *b.sfrl_target);
  }
}

TEST(EvaluateTest, ConstantMechanism) {
  std::mt19937_64 rng(57);
  JointPMF p = testing::RandomSource(rng);
  MechanismReport m = Evaluate(p, Mechanism::Constant(p.axes(), true), 0.0);
  EXPECT_EQ(m.utility_p1, 0.0);
  EXPECT_EQ(m.utility_p2, 0.0);
  EXPECT_EQ(m.secrecy, 0.0);
  EXPECT_EQ(m.rate_p1, 0.0);
  EXPECT_EQ(m.rate_p2, 0.0);
  EXPECT_TRUE(m.feasible_p1);
  EXPECT_TRUE(m.feasible_p2);
}

TEST(EvaluateTest, D1Copies) {
  JointPMF d1 = InstanceD1();
  MechanismReport copy_x =
      Evaluate(d1, Deterministic(d1, [](size_t, size_t x, size_t) { return x; }, 4), 1.0);
  EXPECT_NEAR(copy_x.secrecy, 1.0, 1e-12);
  EXPECT_FALSE(copy_x.feasible_p1);
  MechanismReport w =
      Evaluate(d1, Deterministic(d1, [](size_t, size_t, size_t t) { return t; }, 2), 1.0);
  EXPECT_NEAR(w.utility_p1, 1.0, 1e-12);
  EXPECT_EQ(w.secrecy, 0.0);
  EXPECT_NEAR(w.rate_p1, 1.0, 1e-12);
  EXPECT_TRUE(w.feasible_p1);
  EXPECT_THROW(Evaluate(InstanceD2(), Mechanism::Constant(d1.axes(), true), 1.0),
               AlphabetMismatch);
}

}  // namespace
}  // namespace fairrep
