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

#ifndef FAIRREP_JOINT_PMF_H_
#define FAIRREP_JOINT_PMF_H_

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairrep/prob.h"

namespace fairrep {

// Ordered list of distinct symbol labels. The order is part of the value:
// the functional representation construction walks conditional CDFs in it.
class Alphabet {
 public:
  Alphabet() = default;
  // Throws DuplicateSymbol on repeated labels, InvalidArgument when empty.
  explicit Alphabet(std::vector<std::string> symbols);

  // Symbols "<prefix>0", "<prefix>1", ...
  static Alphabet Indexed(const std::string& prefix, size_t n);

  size_t size() const { return symbols_.size(); }
  const std::string& operator[](size_t i) const { return symbols_[i]; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  bool contains(const std::string& s) const { return index_.count(s) > 0; }
  // Throws InvalidArgument for a label not in the alphabet.
  size_t index_of(const std::string& s) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, size_t> index_;
};

// Symbols of the Cartesian product, rendered "(a,b,...)", last factor
// fastest. A single factor is returned unchanged.
Alphabet ProductAlphabet(const std::vector<const Alphabet*>& factors);

// One named random variable of a joint distribution.
struct Axis {
  std::string role;  // "S", "X", "T", "Y", "U", ...
  Alphabet alphabet;

  friend bool operator==(const Axis& a, const Axis& b) {
    return a.role == b.role && a.alphabet == b.alphabet;
  }
};

// Dense joint pmf over a list of axes, row-major with the last axis varying
// fastest. Immutable after construction.
class JointPMF {
 public:
  // Validates roles (unique, non-empty), sizes, nonnegativity and
  // normalization: exact sum 1 when every entry is exact, |sum - 1| <= 1e-12
  // otherwise. Throws NonNormalized / InvalidArgument.
  JointPMF(std::vector<Axis> axes, std::vector<Prob> mass);

  size_t rank() const { return axes_.size(); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(size_t i) const { return axes_[i]; }
  const std::vector<Prob>& mass() const { return mass_; }
  size_t num_cells() const { return mass_.size(); }
  bool is_exact() const { return exact_; }

  bool has_role(const std::string& role) const;
  // Throws UnknownAxis.
  size_t axis_index(const std::string& role) const;
  std::vector<size_t> shape() const;

  size_t flat_index(std::span<const size_t> idx) const;
  std::vector<size_t> unflatten(size_t flat) const;
  const Prob& at(std::span<const size_t> idx) const {
    return mass_[flat_index(idx)];
  }
  const Prob& at(std::initializer_list<size_t> idx) const {
    return at(std::span<const size_t>(idx.begin(), idx.size()));
  }

  // Marginal over `roles`, axes in the given order. Throws UnknownAxis.
  JointPMF Marginal(const std::vector<std::string>& roles) const;

  // Joint over groups of axes: each group becomes a single axis (product
  // alphabet, named `names[i]`); axes not mentioned are summed out. A group
  // of one axis keeps its alphabet.
  JointPMF Group(const std::vector<std::vector<std::string>>& groups,
                 const std::vector<std::string>& names) const;

  JointPMF ToFloat() const;

 private:
  std::vector<Axis> axes_;
  std::vector<Prob> mass_;
  std::vector<size_t> strides_;
  bool exact_ = true;
};

// Row-major strides for `shape` (last axis fastest).
std::vector<size_t> Strides(const std::vector<size_t>& shape);

}  // namespace fairrep

#endif  // FAIRREP_JOINT_PMF_H_
