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

#include "fairrep/mechanism.h"

#include <cmath>
#include <string>

#include "fairrep/errors.h"

namespace fairrep {

Mechanism::Mechanism(std::vector<Axis> inputs, Axis output,
                     std::vector<Prob> kernel)
    : inputs_(std::move(inputs)),
      output_(std::move(output)),
      kernel_(std::move(kernel)) {
  for (const Axis& a : inputs_) num_rows_ *= a.alphabet.size();
  if (kernel_.size() != num_rows_ * num_outputs()) {
    throw InvalidArgument("kernel has " + std::to_string(kernel_.size()) +
                          " entries, expected " +
                          std::to_string(num_rows_ * num_outputs()));
  }
  for (const Prob& p : kernel_)
    if (!p.is_exact()) exact_ = false;
  if (!exact_)
    for (Prob& p : kernel_) p = p.ToFloat();
  const size_t n = num_outputs();
  for (size_t row = 0; row < num_rows_; ++row) {
    Prob sum = Prob::Zero(exact_);
    for (size_t y = 0; y < n; ++y) {
      const Prob& p = kernel_[row * n + y];
      if (p.sign() < 0 && (exact_ || p.to_double() < -1e-12)) {
        throw NonNormalized("negative kernel entry in row " +
                            std::to_string(row));
      }
      sum += p;
    }
    bool ok = exact_ ? sum == Prob::One(true)
                     : std::fabs(sum.to_double() - 1.0) <= 1e-12;
    if (!ok) {
      throw NonNormalized("kernel row " + std::to_string(row) + " sums to " +
                          sum.str());
    }
  }
}

Mechanism Mechanism::ToFloat() const {
  std::vector<Prob> k;
  k.reserve(kernel_.size());
  for (const Prob& p : kernel_) k.push_back(p.ToFloat());
  return Mechanism(inputs_, output_, std::move(k));
}

Mechanism Mechanism::Constant(std::vector<Axis> inputs, bool exact) {
  size_t rows = 1;
  for (const Axis& a : inputs) rows *= a.alphabet.size();
  return Mechanism(std::move(inputs), Axis{"Y", Alphabet({"c"})},
                   std::vector<Prob>(rows, Prob::One(exact)));
}

}  // namespace fairrep
