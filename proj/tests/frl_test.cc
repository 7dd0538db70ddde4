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

#include <random>

#include "gtest/gtest.h"
#include "fairrep/errors.h"
#include "fairrep/frl.h"
#include "fairrep/info.h"
#include "fairrep/instances.h"
#include "brute.h"
#include "testing_util.h"

namespace fairrep {
namespace {

Axis Ax(const std::string& role, size_t n) {
  return {role, Alphabet::Indexed(role == "C" ? "c" : "d", n)};
}

TEST(FrlTest, PointMassDataGivesSingleCell) {
  JointPMF j({Ax("C", 2), Ax("D", 3)},
             {Prob(0, 1), Prob(1, 3), Prob(0, 1), Prob(0, 1), Prob(2, 3), Prob(0, 1)});
  FrlWitness w = FrlConstruct(j);
  ASSERT_EQ(w.num_aux(), 1u);
  EXPECT_EQ(w.p_aux[0], Prob(1, 1));
  WitnessReport r = WitnessVerify(w, j);
  EXPECT_EQ(r.independence_residual, 0.0);
  EXPECT_EQ(r.determinism_residual, 0.0);
  EXPECT_EQ(r.aux_data_information, 0.0);
}

TEST(FrlTest, TwoRowStaircase) {
  // P(D|C=0) = (1/2, 1/2), P(D|C=1) = (1/4, 3/4), C a fair bit.
  JointPMF j({Ax("C", 2), Ax("D", 2)},
             {Prob(1, 4), Prob(1, 4), Prob(1, 8), Prob(3, 8)});
  FrlWitness w = FrlConstruct(j);
  ASSERT_EQ(w.num_aux(), 3u);
  EXPECT_EQ(w.p_aux[0], Prob(1, 4));
  EXPECT_EQ(w.p_aux[1], Prob(1, 4));
  EXPECT_EQ(w.p_aux[2], Prob(1, 2));
  const int expected[3][2] = {{0, 0}, {0, 1}, {1, 1}};
  for (size_t z = 0; z < 3; ++z) {
    for (size_t c = 0; c < 2; ++c) EXPECT_EQ(w.f(z, c), expected[z][c]);
  }
  // Direct enumeration of the 12-cell joint (C, D, U).
  JointPMF full = w.JointWith(j);
  ASSERT_EQ(full.num_cells(), 12u);
  for (size_t c = 0; c < 2; ++c) {
    Prob pc;
    for (size_t d = 0; d < 2; ++d) pc += j.at({c, d});
    for (size_t z = 0; z < 3; ++z) {
      Prob pcz;
      for (size_t d = 0; d < 2; ++d) {
        const Prob& m = full.at({c, d, z});
        pcz += m;
        if (m.is_positive()) {
          EXPECT_EQ(static_cast<int>(d), w.f(z, c));
        }
      }
      EXPECT_EQ(pcz, pc * w.p_aux[z]);
    }
  }
}

TEST(FrlTest, D1WithConditionSAndDataX) {
  JointPMF sx = InstanceD1().Marginal({"S", "X"});
  FrlWitness w = FrlConstruct(sx);
  WitnessReport r = WitnessVerify(w, sx);
  JointPMF full = w.JointWith(sx);
  EXPECT_NEAR(testing::BruteI(full, {"U"}, {"X"}), 1.0, 1e-12);
  EXPECT_NEAR(r.aux_data_information, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.data_given_cond, 1.0);
  EXPECT_EQ(r.independence_residual, 0.0);
  EXPECT_EQ(r.determinism_residual, 0.0);
  EXPECT_LE(r.aux_data_information, r.data_given_cond + 1e-9);
}

TEST(FrlTest, ZeroMassConditioningRowsAreSkipped) {
  JointPMF j({Ax("C", 3), Ax("D", 2)},
             {Prob(1, 4), Prob(1, 4), Prob(0, 1), Prob(0, 1), Prob(1, 4), Prob(1, 4)});
  FrlWitness w = FrlConstruct(j);
  for (size_t z = 0; z < w.num_aux(); ++z) EXPECT_EQ(w.f(z, 1), -1);
  WitnessReport r = WitnessVerify(w, j);
  EXPECT_EQ(r.independence_residual, 0.0);
  EXPECT_EQ(r.determinism_residual, 0.0);
}

TEST(FrlTest, RandomJointsCertificates) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t nc = testing::RandomSize(rng, 1, 5);
    const size_t nd = testing::RandomSize(rng, 1, 5);
    JointPMF j = testing::RandomJoint(rng, {Ax("C", nc), Ax("D", nd)});
    FrlWitness w = FrlConstruct(j);
    WitnessReport r = WitnessVerify(w, j);
    EXPECT_EQ(r.independence_residual, 0.0);
    EXPECT_EQ(r.determinism_residual, 0.0);
    EXPECT_LE(r.aux_data_information, r.data_given_cond + 1e-9);
    EXPECT_LE(w.num_aux(), 1 + nc * (nd - 1));
    for (size_t k = 0; k < w.coupling.size() / w.num_aux(); ++k) {
      Prob sum;
      for (size_t z = 0; z < w.num_aux(); ++z) sum += w.coupling[k * w.num_aux() + z];
      EXPECT_EQ(sum, Prob(1, 1));
    }
  }
}

TEST(FrlTest, FloatModeResidualsAreSmall) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    JointPMF j = testing::RandomJoint(rng, {Ax("C", 3), Ax("D", 4)}).ToFloat();
    FrlWitness w = FrlConstruct(j);
    WitnessReport r = WitnessVerify(w, j);
    EXPECT_LT(std::fabs(r.independence_residual), 1e-9);
    EXPECT_LT(std::fabs(r.determinism_residual), 1e-9);
  }
}

TEST(FrlTest, CorruptedWitnessIsDetected) {
  JointPMF j({Ax("C", 2), Ax("D", 2)},
             {Prob(1, 4), Prob(1, 4), Prob(1, 8), Prob(3, 8)});
  FrlWitness w = FrlConstruct(j);
  // Perturb P(U=u2 | C=c0, D=d0) by 1/8 and renormalize the row.
  const size_t nz = w.num_aux();
  w.coupling[2] += Prob(1, 8);
  Prob sum;
  for (size_t z = 0; z < nz; ++z) sum += w.coupling[z];
  for (size_t z = 0; z < nz; ++z) w.coupling[z] /= sum;
  WitnessReport r = WitnessVerify(w, j);
  EXPECT_GT(r.independence_residual, 0.0);
  EXPECT_GT(r.determinism_residual, 0.0);
}

TEST(FrlTest, ErrorPaths) {
  JointPMF j3 = InstanceD1();
  EXPECT_THROW(FrlConstruct(j3), InvalidArgument);
  JointPMF j({Ax("C", 2), Ax("D", 2)},
             {Prob(1, 4), Prob(1, 4), Prob(1, 8), Prob(3, 8)});
  FrlWitness w = FrlConstruct(j);
  std::mt19937_64 rng(1);
  JointPMF other({Ax("C", 2), Ax("D", 3)}, testing::RandomPmf(rng, 6));
  EXPECT_THROW(WitnessVerify(w, other), AlphabetMismatch);
}

}  // namespace
}  // namespace fairrep
