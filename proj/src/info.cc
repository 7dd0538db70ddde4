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

#include "fairrep/info.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "fairrep/errors.h"

namespace fairrep {
namespace {

std::string Join(const RoleSet& roles) {
  std::string out;
  for (size_t i = 0; i < roles.size(); ++i) {
    if (i) out += ",";
    out += roles[i];
  }
  return out;
}

RoleSet Union(const RoleSet& a, const RoleSet& b) {
  RoleSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Linear form sum_A coeff[A] * H(A) over canonical role sets.
using EntropyForm = std::map<RoleSet, long>;

}  // namespace

MeasureQuery MeasureQuery::H(RoleSet left, RoleSet given) {
  Kind k = given.empty() ? Kind::kEntropy : Kind::kConditionalEntropy;
  return {k, std::move(left), {}, std::move(given)};
}

MeasureQuery MeasureQuery::I(RoleSet left, RoleSet right, RoleSet given) {
  Kind k = given.empty() ? Kind::kMutualInformation
                         : Kind::kConditionalMutualInformation;
  return {k, std::move(left), std::move(right), std::move(given)};
}

std::string MeasureQuery::ToString() const {
  std::string g = given.empty() ? "" : "|" + Join(given);
  switch (kind) {
    case Kind::kEntropy:
    case Kind::kConditionalEntropy:
      return "H(" + Join(left) + g + ")";
    case Kind::kMutualInformation:
    case Kind::kConditionalMutualInformation:
      return "I(" + Join(left) + ";" + Join(right) + g + ")";
  }
  return "?";
}

RoleSet InfoEngine::Canonical(const RoleSet& roles) const {
  std::vector<std::pair<size_t, std::string>> keyed;
  for (const std::string& r : roles) keyed.emplace_back(joint_.axis_index(r), r);
  std::sort(keyed.begin(), keyed.end());
  RoleSet out;
  for (auto& [i, r] : keyed) {
    if (!out.empty() && out.back() == r) continue;
    out.push_back(r);
  }
  return out;
}

double InfoEngine::Entropy(const RoleSet& roles) {
  RoleSet key = Canonical(roles);
  if (key.empty()) return 0.0;
  auto it = entropy_cache_.find(key);
  if (it != entropy_cache_.end()) return it->second;
  JointPMF m = joint_.Marginal(key);
  double h = 0.0;
  for (const Prob& p : m.mass()) h += EntropyTerm(p);
  entropy_cache_.emplace(key, h);
  return h;
}

namespace {

void Validate(const JointPMF& joint, const MeasureQuery& q) {
  std::set<std::string> seen;
  auto add = [&](const RoleSet& s) {
    for (const std::string& r : s) {
      joint.axis_index(r);  // throws UnknownAxis
      if (!seen.insert(r).second) {
        throw InvalidArgument("role '" + r + "' appears twice in " +
                              q.ToString());
      }
    }
  };
  if (q.left.empty()) throw InvalidArgument("empty left role set");
  add(q.left);
  add(q.right);
  add(q.given);
  bool is_mi = q.kind == MeasureQuery::Kind::kMutualInformation ||
               q.kind == MeasureQuery::Kind::kConditionalMutualInformation;
  if (is_mi && q.right.empty()) throw InvalidArgument("empty right role set");
  if (!is_mi && !q.right.empty()) {
    throw InvalidArgument("entropy query with a right role set");
  }
}

}  // namespace

bool InfoEngine::DeterministicGiven(const RoleSet& data, const RoleSet& given) {
  RoleSet order = Canonical(given);
  const size_t num_given = order.size();
  RoleSet d = Canonical(data);
  order.insert(order.end(), d.begin(), d.end());
  JointPMF m = joint_.Marginal(order);
  size_t block = 1;
  for (size_t k = num_given; k < m.rank(); ++k) {
    block *= m.axis(k).alphabet.size();
  }
  const auto& mass = m.mass();
  for (size_t start = 0; start < mass.size(); start += block) {
    int positive = 0;
    for (size_t j = 0; j < block; ++j)
      if (mass[start + j].is_positive()) ++positive;
    if (positive > 1) return false;
  }
  return true;
}

bool InfoEngine::IndependentGiven(const RoleSet& a, const RoleSet& b,
                                  const RoleSet& given) {
  RoleSet cg = Canonical(given);
  RoleSet ca = Canonical(a);
  RoleSet cb = Canonical(b);
  std::vector<std::vector<std::string>> groups;
  std::vector<std::string> names;
  if (!cg.empty()) {
    groups.push_back(cg);
    names.push_back("G");
  }
  groups.push_back(ca);
  names.push_back("A");
  groups.push_back(cb);
  names.push_back("B");
  JointPMF m = joint_.Group(groups, names);
  size_t na = m.axis(m.rank() - 2).alphabet.size();
  size_t nb = m.axis(m.rank() - 1).alphabet.size();
  const auto& mass = m.mass();
  const bool exact = m.is_exact();
  std::vector<Prob> row(na), col(nb);
  for (size_t start = 0; start < mass.size(); start += na * nb) {
    Prob total = Prob::Zero(exact);
    std::fill(row.begin(), row.end(), Prob::Zero(exact));
    std::fill(col.begin(), col.end(), Prob::Zero(exact));
    for (size_t i = 0; i < na; ++i) {
      for (size_t j = 0; j < nb; ++j) {
        const Prob& p = mass[start + i * nb + j];
        if (p.is_zero()) continue;
        row[i] += p;
        col[j] += p;
        total += p;
      }
    }
    if (total.is_zero()) continue;
    for (size_t i = 0; i < na; ++i) {
      for (size_t j = 0; j < nb; ++j) {
        if (Compare(mass[start + i * nb + j] * total, row[i] * col[j]) != 0)
          return false;
      }
    }
  }
  return true;
}

bool InfoEngine::IsExactlyZero(const MeasureQuery& q) {
  Validate(joint_, q);
  switch (q.kind) {
    case MeasureQuery::Kind::kEntropy:
    case MeasureQuery::Kind::kConditionalEntropy:
      return DeterministicGiven(q.left, q.given);
    case MeasureQuery::Kind::kMutualInformation:
    case MeasureQuery::Kind::kConditionalMutualInformation:
      return IndependentGiven(q.left, q.right, q.given);
  }
  return false;
}

double InfoEngine::Measure(const MeasureQuery& q) {
  Validate(joint_, q);
  double v = 0.0;
  switch (q.kind) {
    case MeasureQuery::Kind::kEntropy:
    case MeasureQuery::Kind::kConditionalEntropy:
      v = Entropy(Union(q.left, q.given)) - Entropy(q.given);
      break;
    case MeasureQuery::Kind::kMutualInformation:
    case MeasureQuery::Kind::kConditionalMutualInformation:
      v = Entropy(Union(q.left, q.given)) + Entropy(Union(q.right, q.given)) -
          Entropy(Union(Union(q.left, q.right), q.given)) - Entropy(q.given);
      break;
  }
  if (!joint_.is_exact()) return v;
  if (IsExactlyZero(q)) return 0.0;
  return std::max(v, std::numeric_limits<double>::min());
}

double InfoMeasure(const JointPMF& joint, const MeasureQuery& q) {
  InfoEngine engine(joint);
  return engine.Measure(q);
}

double H(const JointPMF& joint, const RoleSet& left, const RoleSet& given) {
  return InfoMeasure(joint, MeasureQuery::H(left, given));
}

double I(const JointPMF& joint, const RoleSet& left, const RoleSet& right,
         const RoleSet& given) {
  return InfoMeasure(joint, MeasureQuery::I(left, right, given));
}

JointPMF Induce(const JointPMF& source, const Mechanism& mech) {
  if (source.axes() != mech.inputs()) {
    throw AlphabetMismatch("source axes do not match mechanism inputs");
  }
  if (source.has_role(mech.output().role)) {
    throw AlphabetMismatch("mechanism output role '" + mech.output().role +
                           "' already present in the source");
  }
  std::vector<Axis> axes = source.axes();
  axes.push_back(mech.output());
  const size_t ny = mech.num_outputs();
  const bool exact = source.is_exact() && mech.is_exact();
  std::vector<Prob> mass(source.num_cells() * ny, Prob::Zero(exact));
  for (size_t row = 0; row < source.num_cells(); ++row) {
    const Prob& p = source.mass()[row];
    if (p.is_zero()) continue;
    for (size_t y = 0; y < ny; ++y) {
      const Prob& k = mech.at(row, y);
      if (k.is_zero()) continue;
      mass[row * ny + y] = p * k;
    }
  }
  return JointPMF(std::move(axes), std::move(mass));
}

namespace {

void AddEntropy(EntropyForm& form, const JointPMF& joint, RoleSet roles,
                long coeff) {
  // Canonical ordering by axis index; the empty set contributes nothing.
  std::vector<std::pair<size_t, std::string>> keyed;
  for (auto& r : roles) keyed.emplace_back(joint.axis_index(r), r);
  std::sort(keyed.begin(), keyed.end());
  RoleSet key;
  for (auto& [i, r] : keyed) key.push_back(r);
  if (key.empty()) return;
  form[key] += coeff;
}

void AddQuery(EntropyForm& form, const JointPMF& joint, const MeasureQuery& q,
              long sign) {
  switch (q.kind) {
    case MeasureQuery::Kind::kEntropy:
    case MeasureQuery::Kind::kConditionalEntropy:
      AddEntropy(form, joint, Union(q.left, q.given), sign);
      AddEntropy(form, joint, q.given, -sign);
      break;
    case MeasureQuery::Kind::kMutualInformation:
    case MeasureQuery::Kind::kConditionalMutualInformation:
      AddEntropy(form, joint, Union(q.left, q.given), sign);
      AddEntropy(form, joint, Union(q.right, q.given), sign);
      AddEntropy(form, joint, Union(Union(q.left, q.right), q.given),
                 -sign);
      AddEntropy(form, joint, q.given, -sign);
      break;
  }
}

}  // namespace

double KeyIdentityResidual(const JointPMF& joint4) {
  for (const char* r : {"S", "X", "T", "Y"}) joint4.axis_index(r);
  const MeasureQuery lhs = MeasureQuery::I({"Y"}, {"T"});
  const std::vector<std::pair<MeasureQuery, long>> rhs = {
      {MeasureQuery::I({"X", "S"}, {"Y"}), 1},
      {MeasureQuery::H({"T"}, {"X", "S"}), 1},
      {MeasureQuery::H({"T"}, {"Y", "X", "S"}), -1},
      {MeasureQuery::I({"X", "S"}, {"Y"}, {"T"}), -1},
  };
  InfoEngine engine(joint4);
  if (!joint4.is_exact()) {
    double value = engine.Measure(lhs);
    for (const auto& [q, sign] : rhs) value -= sign * engine.Measure(q);
    return std::fabs(value);
  }
  EntropyForm form;
  AddQuery(form, joint4, lhs, 1);
  for (const auto& [q, sign] : rhs) AddQuery(form, joint4, q, -sign);
  double value = 0.0;
  for (const auto& [roles, coeff] : form) {
    if (coeff != 0) value += coeff * engine.Entropy(roles);
  }
  return std::fabs(value);
}

std::vector<Atom> IMeasureAtoms(const JointPMF& joint) {
  const size_t n = joint.rank();
  if (n > 4) throw TooManyAxes("i-measure atoms support at most 4 axes");
  if (n < 2) throw InvalidArgument("i-measure atoms need at least 2 axes");
  InfoEngine engine(joint);
  auto roles_of = [&](unsigned mask) {
    RoleSet out;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) out.push_back(joint.axis(i).role);
    return out;
  };
  const unsigned full = (1u << n) - 1;
  std::vector<Atom> atoms;
  for (unsigned mask = 1; mask <= full; ++mask) {
    const unsigned rest = full & ~mask;
    // mu(A) = -sum_{B subset A} (-1)^{|B|} H(X_B, X_rest)
    double bits = 0.0;
    for (unsigned b = mask;; b = (b - 1) & mask) {
      int sign = (__builtin_popcount(b) % 2 == 0) ? -1 : 1;
      bits += sign * engine.Entropy(roles_of(b | rest));
      if (b == 0) break;
    }
    RoleSet in = roles_of(mask);
    RoleSet out = roles_of(rest);
    std::string cond = out.empty() ? "" : "|" + Join(out);
    std::string label;
    if (in.size() == 1) {
      label = "H(" + in[0] + cond + ")";
    } else {
      label = "I(";
      for (size_t i = 0; i < in.size(); ++i) {
        if (i) label += ";";
        label += in[i];
      }
      label += cond + ")";
    }
    atoms.push_back({mask, std::move(label), bits});
  }
  return atoms;
}

}  // namespace fairrep
