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

#include "fairrep/joint_pmf.h"

#include <cmath>
#include <set>

#include "fairrep/errors.h"

namespace fairrep {

Alphabet::Alphabet(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InvalidArgument("alphabet must be non-empty");
  for (size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], i).second) {
      throw DuplicateSymbol("duplicate symbol '" + symbols_[i] + "'");
    }
  }
}

Alphabet Alphabet::Indexed(const std::string& prefix, size_t n) {
  std::vector<std::string> s;
  s.reserve(n);
  for (size_t i = 0; i < n; ++i) s.push_back(prefix + std::to_string(i));
  return Alphabet(std::move(s));
}

size_t Alphabet::index_of(const std::string& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw InvalidArgument("unknown symbol '" + s + "'");
  return it->second;
}

Alphabet ProductAlphabet(const std::vector<const Alphabet*>& factors) {
  if (factors.size() == 1) return *factors[0];
  std::vector<size_t> shape;
  for (const Alphabet* a : factors) shape.push_back(a->size());
  size_t total = 1;
  for (size_t n : shape) total *= n;
  std::vector<std::string> out;
  out.reserve(total);
  std::vector<size_t> idx(factors.size(), 0);
  for (size_t flat = 0; flat < total; ++flat) {
    std::string label = "(";
    for (size_t k = 0; k < factors.size(); ++k) {
      if (k) label += ",";
      label += (*factors[k])[idx[k]];
    }
    label += ")";
    out.push_back(std::move(label));
    for (size_t k = factors.size(); k-- > 0;) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
  return Alphabet(std::move(out));
}

std::vector<size_t> Strides(const std::vector<size_t>& shape) {
  std::vector<size_t> strides(shape.size(), 1);
  for (size_t k = shape.size(); k-- > 1;) strides[k - 1] = strides[k] * shape[k];
  return strides;
}

JointPMF::JointPMF(std::vector<Axis> axes, std::vector<Prob> mass)
    : axes_(std::move(axes)), mass_(std::move(mass)) {
  if (axes_.empty()) throw InvalidArgument("joint pmf needs at least one axis");
  std::set<std::string> roles;
  size_t total = 1;
  for (const Axis& a : axes_) {
    if (a.role.empty()) throw InvalidArgument("empty role tag");
    if (!roles.insert(a.role).second) {
      throw InvalidArgument("duplicate role tag '" + a.role + "'");
    }
    if (a.alphabet.size() == 0) throw InvalidArgument("empty alphabet");
    total *= a.alphabet.size();
  }
  if (mass_.size() != total) {
    throw InvalidArgument("mass tensor has " + std::to_string(mass_.size()) +
                          " cells, axes require " + std::to_string(total));
  }
  for (const Prob& p : mass_) {
    if (!p.is_exact()) exact_ = false;
  }
  if (!exact_) {
    for (Prob& p : mass_) p = p.ToFloat();
  }
  Prob sum = Prob::Zero(exact_);
  for (const Prob& p : mass_) {
    if (p.sign() < 0 && (exact_ || p.to_double() < -1e-12)) {
      throw NonNormalized("negative mass " + p.str());
    }
    sum += p;
  }
  if (exact_) {
    if (sum != Prob::One(true)) {
      throw NonNormalized("masses sum to " + sum.str() + ", not 1");
    }
  } else if (std::fabs(sum.to_double() - 1.0) > 1e-12) {
    throw NonNormalized("masses sum to " + sum.str() + ", not 1");
  }
  strides_ = Strides(shape());
}

bool JointPMF::has_role(const std::string& role) const {
  for (const Axis& a : axes_)
    if (a.role == role) return true;
  return false;
}

size_t JointPMF::axis_index(const std::string& role) const {
  for (size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].role == role) return i;
  throw UnknownAxis("no axis with role '" + role + "'");
}

std::vector<size_t> JointPMF::shape() const {
  std::vector<size_t> s;
  for (const Axis& a : axes_) s.push_back(a.alphabet.size());
  return s;
}

size_t JointPMF::flat_index(std::span<const size_t> idx) const {
  size_t flat = 0;
  for (size_t k = 0; k < idx.size(); ++k) flat += idx[k] * strides_[k];
  return flat;
}

std::vector<size_t> JointPMF::unflatten(size_t flat) const {
  std::vector<size_t> idx(axes_.size());
  for (size_t k = 0; k < axes_.size(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
  return idx;
}

JointPMF JointPMF::Marginal(const std::vector<std::string>& roles) const {
  std::vector<std::vector<std::string>> groups;
  for (const std::string& r : roles) groups.push_back({r});
  return Group(groups, roles);
}

JointPMF JointPMF::Group(const std::vector<std::vector<std::string>>& groups,
                         const std::vector<std::string>& names) const {
  if (groups.empty() || groups.size() != names.size()) {
    throw InvalidArgument("Group needs one name per non-empty group list");
  }
  std::vector<Axis> out_axes;
  // For each source axis, the stride it contributes to the output flat
  // index (0 when summed out).
  std::vector<size_t> contribution(axes_.size(), 0);
  std::vector<bool> used(axes_.size(), false);
  std::vector<size_t> out_shape;
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidArgument("empty axis group");
    size_t n = 1;
    std::vector<const Alphabet*> factors;
    for (const std::string& r : g) {
      size_t i = axis_index(r);
      if (used[i]) throw InvalidArgument("axis '" + r + "' used twice");
      used[i] = true;
      factors.push_back(&axes_[i].alphabet);
      n *= axes_[i].alphabet.size();
    }
    out_shape.push_back(n);
    out_axes.push_back({"", ProductAlphabet(factors)});
  }
  for (size_t k = 0; k < groups.size(); ++k) out_axes[k].role = names[k];
  std::vector<size_t> out_strides = Strides(out_shape);
  for (size_t k = 0; k < groups.size(); ++k) {
    // Within a group the last listed axis varies fastest.
    size_t inner = out_strides[k];
    for (size_t j = groups[k].size(); j-- > 0;) {
      size_t i = axis_index(groups[k][j]);
      contribution[i] = inner;
      inner *= axes_[i].alphabet.size();
    }
  }
  size_t out_total = 1;
  for (size_t n : out_shape) out_total *= n;
  std::vector<Prob> out(out_total, Prob::Zero(exact_));

  std::vector<size_t> idx(axes_.size(), 0);
  std::vector<size_t> sh = shape();
  size_t dest = 0;
  for (size_t flat = 0; flat < mass_.size(); ++flat) {
    if (!mass_[flat].is_zero()) out[dest] += mass_[flat];
    for (size_t k = axes_.size(); k-- > 0;) {
      dest += contribution[k];
      if (++idx[k] < sh[k]) break;
      dest -= contribution[k] * sh[k];
      idx[k] = 0;
    }
  }
  return JointPMF(std::move(out_axes), std::move(out));
}

JointPMF JointPMF::ToFloat() const {
  std::vector<Prob> m;
  m.reserve(mass_.size());
  for (const Prob& p : mass_) m.push_back(p.ToFloat());
  return JointPMF(axes_, std::move(m));
}

}  // namespace fairrep
