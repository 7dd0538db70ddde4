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

#include "fairrep/frl.h"

#include <algorithm>

#include "fairrep/errors.h"
#include "fairrep/info.h"

namespace fairrep {

JointPMF FunctionalWitness::JointWith(const JointPMF& source,
                                      const std::string& aux_role) const {
  std::vector<Axis> expected = {cond, data};
  if (side) expected.push_back(*side);
  if (source.axes() != expected) {
    throw AlphabetMismatch("witness axes do not match the source joint");
  }
  if (source.has_role(aux_role)) {
    throw AlphabetMismatch("aux role '" + aux_role + "' already in source");
  }
  const size_t nc = cond.alphabet.size();
  const size_t nd = data.alphabet.size();
  const size_t nv = num_side();
  const size_t nz = num_aux();
  std::vector<Axis> axes = expected;
  axes.push_back({aux_role, aux});
  std::vector<Prob> mass(source.num_cells() * nz, Prob::Zero(source.is_exact()));
  for (size_t c = 0; c < nc; ++c) {
    for (size_t d = 0; d < nd; ++d) {
      for (size_t v = 0; v < nv; ++v) {
        const size_t src = (c * nd + d) * nv + v;
        const Prob& p = source.mass()[src];
        if (p.is_zero()) continue;
        const size_t cv = c * nv + v;
        for (size_t z = 0; z < nz; ++z) {
          const Prob& k = coupling_at(cv, d, z);
          if (!k.is_zero()) mass[src * nz + z] = p * k;
        }
      }
    }
  }
  return JointPMF(std::move(axes), std::move(mass));
}

FrlWitness FrlConstruct(const JointPMF& joint_cd) {
  if (joint_cd.rank() != 2) {
    throw InvalidArgument("FrlConstruct expects a joint over exactly (C, D)");
  }
  const bool exact = joint_cd.is_exact();
  const Axis& cond = joint_cd.axis(0);
  const Axis& data = joint_cd.axis(1);
  const size_t nc = cond.alphabet.size();
  const size_t nd = data.alphabet.size();

  // Conditional pmfs and interval right ends per supported c.
  std::vector<bool> supported(nc, false);
  std::vector<std::vector<Prob>> cond_pmf(nc);
  std::vector<std::vector<Prob>> right_end(nc);
  std::vector<Prob> cuts = {Prob::Zero(exact), Prob::One(exact)};
  for (size_t c = 0; c < nc; ++c) {
    Prob pc = Prob::Zero(exact);
    for (size_t d = 0; d < nd; ++d) pc += joint_cd.at({c, d});
    if (pc.is_zero()) continue;
    supported[c] = true;
    cond_pmf[c].resize(nd);
    right_end[c].resize(nd);
    size_t last_positive = nd;
    Prob cum = Prob::Zero(exact);
    for (size_t d = 0; d < nd; ++d) {
      cond_pmf[c][d] = joint_cd.at({c, d}) / pc;
      if (cond_pmf[c][d].is_positive()) last_positive = d;
    }
    if (last_positive == nd) {
      throw DegenerateConditional("P(D|C=" + cond.alphabet[c] +
                                  ") has no positive entry");
    }
    for (size_t d = 0; d < nd; ++d) {
      cum += cond_pmf[c][d];
      // The last positive symbol closes the interval at exactly 1.
      right_end[c][d] = d >= last_positive ? Prob::One(exact) : cum;
      if (d < last_positive && cond_pmf[c][d].is_positive()) {
        cuts.push_back(right_end[c][d]);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  FrlWitness w;
  w.cond = cond;
  w.data = data;
  const size_t nz = cuts.size() - 1;
  w.aux = Alphabet::Indexed("u", nz);
  for (size_t k = 0; k < nz; ++k) w.p_aux.push_back(cuts[k + 1] - cuts[k]);
  w.map_f.assign(nz * nc, -1);
  for (size_t k = 0; k < nz; ++k) {
    for (size_t c = 0; c < nc; ++c) {
      if (!supported[c]) continue;
      for (size_t d = 0; d < nd; ++d) {
        if (cond_pmf[c][d].is_positive() && right_end[c][d] > cuts[k]) {
          w.map_f[k * nc + c] = static_cast<int>(d);
          break;
        }
      }
    }
  }
  w.coupling.resize(nc * nd * nz);
  for (size_t c = 0; c < nc; ++c) {
    for (size_t d = 0; d < nd; ++d) {
      const bool live = supported[c] && cond_pmf[c][d].is_positive();
      for (size_t k = 0; k < nz; ++k) {
        Prob& slot = w.coupling[(c * nd + d) * nz + k];
        if (!live) {
          slot = w.p_aux[k];
        } else if (w.map_f[k * nc + c] == static_cast<int>(d)) {
          slot = w.p_aux[k] / cond_pmf[c][d];
        } else {
          slot = Prob::Zero(exact);
        }
      }
    }
  }
  return w;
}

WitnessReport WitnessVerify(const FunctionalWitness& w, const JointPMF& source) {
  const std::string aux_role = "__aux";
  JointPMF joint = w.JointWith(source, aux_role);
  InfoEngine engine(joint);
  RoleSet cond = {w.cond.role};
  if (w.side) cond.push_back(w.side->role);
  RoleSet extra_given;
  if (w.side) extra_given.push_back(w.side->role);
  RoleSet aux_and_cond = cond;
  aux_and_cond.push_back(aux_role);

  WitnessReport r;
  r.independence_residual = engine.Measure(MeasureQuery::I({aux_role}, cond));
  r.determinism_residual =
      engine.Measure(MeasureQuery::H({w.data.role}, aux_and_cond));
  r.aux_data_information =
      engine.Measure(MeasureQuery::I({aux_role}, {w.data.role}));
  r.data_given_cond = engine.Measure(MeasureQuery::H({w.data.role}, cond));
  RoleSet excess_given = {w.data.role};
  excess_given.insert(excess_given.end(), extra_given.begin(), extra_given.end());
  r.excess = engine.Measure(
      MeasureQuery::I({w.cond.role}, {aux_role}, excess_given));
  return r;
}

}  // namespace fairrep
