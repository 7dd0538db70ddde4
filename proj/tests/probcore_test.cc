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
#include "fairrep/errors.h"
#include "fairrep/info.h"
#include "fairrep/instances.h"
#include "fairrep/joint_pmf.h"
#include "fairrep/mechanism.h"
#include "fairrep/prob.h"
#include "brute.h"
#include "testing_util.h"

namespace fairrep {
namespace {

using testing::BruteH;
using testing::BruteHc;
using testing::BruteI;

JointPMF FairBit(const std::string& role = "S") {
  return JointPMF({{role, Alphabet({"0", "1"})}}, {Prob(1, 2), Prob(1, 2)});
}

// Mechanism reading one input axis deterministically: Y = value of `role`.
Mechanism CopyAxis(const JointPMF& src, const std::string& role) {
  const size_t k = src.axis_index(role);
  const Axis& out_axis = src.axis(k);
  std::vector<Prob> kernel;
  const size_t ny = out_axis.alphabet.size();
  for (size_t row = 0; row < src.num_cells(); ++row) {
    const size_t v = src.unflatten(row)[k];
    for (size_t y = 0; y < ny; ++y) kernel.push_back(Prob(y == v ? 1 : 0, 1));
  }
  return Mechanism(src.axes(), {"Y", out_axis.alphabet}, kernel);
}

TEST(ProbTest, ParsesRationalsAndDecimalsExactly) {
  EXPECT_EQ(Prob::Parse("3/6", true), Prob(1, 2));
  EXPECT_EQ(Prob::Parse("0.125", true), Prob(1, 8));
  EXPECT_EQ(Prob::Parse("1e-3", true), Prob(1, 1000));
  EXPECT_EQ(Prob::Parse(" 1 ", true), Prob(1, 1));
  EXPECT_FALSE(Prob::Parse("0.5", false).is_exact());
  EXPECT_THROW(Prob::Parse("1/0", true), ParseError);
  EXPECT_THROW(Prob::Parse("abc", true), ParseError);
  EXPECT_THROW(Prob::Parse("", true), ParseError);
}

TEST(ProbTest, ExactArithmeticStaysExact) {
  Prob a(1, 3);
  Prob b(1, 6);
  EXPECT_TRUE((a + b).is_exact());
  EXPECT_EQ(a + b, Prob(1, 2));
  EXPECT_EQ(a * b, Prob(1, 18));
  EXPECT_EQ(a / b, Prob(2, 1));
  EXPECT_EQ((a - a).sign(), 0);
  EXPECT_FALSE((a + Prob::Float(0.25)).is_exact());
  EXPECT_THROW(a / Prob(), InvalidArgument);
  EXPECT_EQ(Prob(2, 4).str(), "1/2");
}

TEST(ProbTest, SimplestBetweenPicksShortRational) {
  EXPECT_EQ(Prob::SimplestBetween(0.3, 0.35), Prob(1, 3));
  EXPECT_EQ(Prob::SimplestBetween(0.5, 0.5), Prob(1, 2));
  EXPECT_EQ(Prob::SimplestBetween(0.0, 0.1), Prob(0, 1));
  const double x = 1.0 / std::log2(3.0);
  const Prob p = Prob::SimplestBetween(x - 1e-12, x);
  EXPECT_LE(p.to_double(), x);
  EXPECT_GE(p.to_double(), x - 1e-12);
}

TEST(AlphabetTest, RejectsDuplicates) {
  EXPECT_THROW(Alphabet({"a", "b", "a"}), DuplicateSymbol);
  EXPECT_THROW(Alphabet(std::vector<std::string>{}), InvalidArgument);
  Alphabet p = ProductAlphabet({&FairBit().axis(0).alphabet,
                                &FairBit().axis(0).alphabet});
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p[1], "(0,1)");
}

TEST(JointPmfTest, ValidatesNormalization) {
  Axis a{"S", Alphabet({"0", "1"})};
  EXPECT_THROW(JointPMF({a}, {Prob(1, 2), Prob(1, 4)}), NonNormalized);
  EXPECT_THROW(JointPMF({a}, {Prob::Float(0.5), Prob::Float(0.5 - 1e-9)}),
               NonNormalized);
  EXPECT_NO_THROW(JointPMF({a}, {Prob::Float(0.5), Prob::Float(0.5 - 1e-13)}));
  EXPECT_THROW(JointPMF({a}, {Prob(3, 2), Prob(-1, 2)}), NonNormalized);
  EXPECT_THROW(JointPMF({a, a}, {Prob(1, 4), Prob(1, 4), Prob(1, 4), Prob(1, 4)}),
               InvalidArgument);
}

TEST(InfoMeasureTest, FairBitEntropy) {
  JointPMF bit = FairBit();
  EXPECT_DOUBLE_EQ(H(bit, {"S"}), 1.0);
}

TEST(InfoMeasureTest, D1Values) {
  JointPMF d1 = InstanceD1();
  EXPECT_DOUBLE_EQ(H(d1, {"X"}, {"S"}), 1.0);
  const double brute = BruteI(d1, {"X", "S"}, {"T"});
  EXPECT_NEAR(brute, 1.0, 1e-12);
  EXPECT_NEAR(I(d1, {"X", "S"}, {"T"}), brute, 1e-12);
  EXPECT_EQ(I(d1, {"S"}, {"T"}), 0.0);  // exact independence
  EXPECT_EQ(H(d1, {"T"}, {"X"}), 0.0);  // exact determinism
}

TEST(InfoMeasureTest, UnknownAxisAndOverlap) {
  JointPMF d1 = InstanceD1();
  EXPECT_THROW(H(d1, {"Q"}), UnknownAxis);
  EXPECT_THROW(I(d1, {"S"}, {"S"}), InvalidArgument);
}

TEST(InfoMeasureTest, MatchesBruteForceOnRandomJoints) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    JointPMF j = testing::RandomSource(rng);
    for (bool exact : {true, false}) {
      JointPMF jj = exact ? j : j.ToFloat();
      EXPECT_NEAR(H(jj, {"X", "T"}, {"S"}), BruteHc(j, {"X", "T"}, {"S"}), 1e-9);
      EXPECT_NEAR(I(jj, {"X"}, {"T"}, {"S"}), BruteI(j, {"X"}, {"T"}, {"S"}), 1e-9);
      EXPECT_NEAR(I(jj, {"S", "X"}, {"T"}), BruteI(j, {"S", "X"}, {"T"}), 1e-9);
      EXPECT_GE(I(jj, {"X"}, {"T"}, {"S"}), -1e-12);
      EXPECT_GE(H(jj, {"X"}, {"S", "T"}), -1e-12);
    }
    EXPECT_GE(I(j, {"X"}, {"T"}, {"S"}), 0.0);
  }
}

TEST(InfoMeasureTest, InvariantUnderAxisPermutationAndRelabeling) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    JointPMF j = testing::RandomSource(rng);
    // Reverse the axis order and the symbol order of every axis.
    std::vector<Axis> axes;
    for (size_t i = j.rank(); i-- > 0;) {
      std::vector<std::string> sym = j.axis(i).alphabet.symbols();
      std::reverse(sym.begin(), sym.end());
      for (std::string& s : sym) s = "r" + s;
      axes.push_back({j.axis(i).role, Alphabet(sym)});
    }
    const auto shape = j.shape();
    std::vector<Prob> mass(j.num_cells());
    for (size_t flat = 0; flat < j.num_cells(); ++flat) {
      const auto idx = j.unflatten(flat);
      const size_t s = shape[0] - 1 - idx[0];
      const size_t x = shape[1] - 1 - idx[1];
      const size_t t = shape[2] - 1 - idx[2];
      mass[(t * shape[1] + x) * shape[0] + s] = j.mass()[flat];
    }
    JointPMF k(axes, mass);
    EXPECT_NEAR(I(j, {"X"}, {"T"}, {"S"}), I(k, {"X"}, {"T"}, {"S"}), 1e-12);
    EXPECT_NEAR(H(j, {"S", "T"}), H(k, {"T", "S"}), 1e-12);
    EXPECT_NEAR(I(j, {"S"}, {"X", "T"}), I(k, {"S"}, {"T", "X"}), 1e-12);
  }
}

TEST(InduceTest, CopyOfTGivesYEqualT) {
  JointPMF d2 = InstanceD2();
  JointPMF j = Induce(d2, CopyAxis(d2, "T"));
  EXPECT_EQ(H(j, {"Y"}, {"T"}), 0.0);
  EXPECT_EQ(H(j, {"T"}, {"Y"}), 0.0);
}

TEST(InduceTest, ConstantMechanismCarriesNoInformation) {
  std::mt19937_64 rng(3);
  JointPMF src = testing::RandomSource(rng);
  JointPMF j = Induce(src, Mechanism::Constant(src.axes(), true));
  EXPECT_EQ(I(j, {"Y"}, {"S", "X", "T"}), 0.0);
  EXPECT_EQ(I(j, {"Y"}, {"T"}), 0.0);
}

TEST(InduceTest, D1WithYEqualW) {
  JointPMF d1 = InstanceD1();
  JointPMF j = Induce(d1, CopyAxis(d1, "T"));  // T = W
  EXPECT_NEAR(I(j, {"Y"}, {"T"}), BruteI(j, {"Y"}, {"T"}), 1e-12);
  EXPECT_DOUBLE_EQ(I(j, {"Y"}, {"T"}), 1.0);
  EXPECT_EQ(I(j, {"Y"}, {"S"}), 0.0);
  EXPECT_DOUBLE_EQ(I(j, {"Y"}, {"X"}), 1.0);
}

TEST(InduceTest, RejectsMismatchedAlphabets) {
  JointPMF d1 = InstanceD1();
  JointPMF d3 = InstanceD3();
  EXPECT_THROW(Induce(d1, Mechanism::Constant(d3.axes(), true)), AlphabetMismatch);
}

TEST(InduceTest, DataProcessingSanity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    JointPMF src = testing::RandomSource(rng);
    JointPMF j = Induce(src, testing::RandomMechanism(rng, src.axes(), 3));
    const double u = I(j, {"Y"}, {"T"});
    EXPECT_LE(u, std::min(H(j, {"Y"}), H(j, {"T"})) + 1e-12);
  }
}

TEST(KeyIdentityTest, ZeroExactlyOnRandomJoints) {
  std::mt19937_64 rng(13);
  Axis s = testing::MakeAxis("S", 2), x = testing::MakeAxis("X", 2),
       t = testing::MakeAxis("T", 2);
  Axis y{"Y", Alphabet::Indexed("y", 3)};
  for (int trial = 0; trial < 100; ++trial) {
    JointPMF j = testing::RandomJoint(rng, {s, x, t, y});
    EXPECT_EQ(KeyIdentityResidual(j), 0.0);
    EXPECT_LT(KeyIdentityResidual(j.ToFloat()), 1e-9);
  }
}

TEST(KeyIdentityTest, D1WithYEqualW) {
  JointPMF d1 = InstanceD1();
  EXPECT_EQ(KeyIdentityResidual(Induce(d1, CopyAxis(d1, "T"))), 0.0);
  EXPECT_THROW(KeyIdentityResidual(d1), UnknownAxis);
}

TEST(IMeasureTest, TwoVariableCases) {
  Axis a{"A", Alphabet({"0", "1"})}, b{"B", Alphabet({"0", "1"})};
  JointPMF indep({a, b}, {Prob(1, 4), Prob(1, 4), Prob(1, 4), Prob(1, 4)});
  auto atoms = IMeasureAtoms(indep);
  ASSERT_EQ(atoms.size(), 3u);
  EXPECT_NEAR(atoms[0].bits, 1.0, 1e-12);
  EXPECT_NEAR(atoms[1].bits, 1.0, 1e-12);
  EXPECT_NEAR(atoms[2].bits, 0.0, 1e-12);
  JointPMF same({a, b}, {Prob(1, 2), Prob(0, 1), Prob(0, 1), Prob(1, 2)});
  atoms = IMeasureAtoms(same);
  EXPECT_NEAR(atoms[0].bits, 0.0, 1e-12);
  EXPECT_NEAR(atoms[1].bits, 0.0, 1e-12);
  EXPECT_NEAR(atoms[2].bits, 1.0, 1e-12);
  EXPECT_EQ(atoms[2].label, "I(A;B)");
}

TEST(IMeasureTest, D1Atoms) {
  JointPMF d1 = InstanceD1();
  auto atoms = IMeasureAtoms(d1);
  ASSERT_EQ(atoms.size(), 7u);
  // mask bits: S=1, X=2, T=4.
  auto atom = [&](unsigned mask) { return atoms[mask - 1].bits; };
  // Independent reference: inclusion-exclusion from brute-force entropies.
  const double i_st = BruteI(d1, {"S"}, {"T"});
  const double i_xt_s = BruteI(d1, {"X"}, {"T"}, {"S"});
  const double i_sxt = BruteI(d1, {"S"}, {"T"}) - BruteI(d1, {"S"}, {"T"}, {"X"});
  EXPECT_NEAR(atom(5) + atom(7), i_st, 1e-12);
  EXPECT_NEAR(i_st, 0.0, 1e-12);
  EXPECT_NEAR(atom(6), i_xt_s, 1e-12);
  EXPECT_NEAR(atom(6), 1.0, 1e-12);
  EXPECT_NEAR(atom(7), i_sxt, 1e-12);
  // Region sums equal marginal entropies.
  const char* roles[] = {"S", "X", "T"};
  for (unsigned v = 0; v < 3; ++v) {
    double sum = 0.0;
    for (const Atom& a : atoms) {
      if (a.mask & (1u << v)) sum += a.bits;
    }
    EXPECT_NEAR(sum, BruteH(d1, {roles[v]}), 1e-12);
  }
}

TEST(IMeasureTest, RejectsTooManyAxes) {
  std::vector<Axis> axes;
  for (int i = 0; i < 5; ++i) axes.push_back({"A" + std::to_string(i), Alphabet({"0"})});
  JointPMF j(axes, {Prob(1, 1)});
  EXPECT_THROW(IMeasureAtoms(j), TooManyAxes);
}

}  // namespace
}  // namespace fairrep
