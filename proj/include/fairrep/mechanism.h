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

#ifndef FAIRREP_MECHANISM_H_
#define FAIRREP_MECHANISM_H_

#include <vector>

#include "fairrep/joint_pmf.h"
#include "fairrep/prob.h"

namespace fairrep {

// Conditional channel P(y | inputs). Rows are the flattened input cells (last
// input axis fastest), columns index the output alphabet.
class Mechanism {
 public:
  // Throws NonNormalized if a row does not sum to one or has a negative
  // entry, InvalidArgument on shape mismatch.
  Mechanism(std::vector<Axis> inputs, Axis output, std::vector<Prob> kernel);

  const std::vector<Axis>& inputs() const { return inputs_; }
  const Axis& output() const { return output_; }
  size_t num_rows() const { return num_rows_; }
  size_t num_outputs() const { return output_.alphabet.size(); }
  const Prob& at(size_t row, size_t y) const {
    return kernel_[row * num_outputs() + y];
  }
  const std::vector<Prob>& kernel() const { return kernel_; }
  bool is_exact() const { return exact_; }

  Mechanism ToFloat() const;

  // Y := c for every input.
  static Mechanism Constant(std::vector<Axis> inputs, bool exact);

 private:
  std::vector<Axis> inputs_;
  Axis output_;
  std::vector<Prob> kernel_;
  size_t num_rows_ = 1;
  bool exact_ = true;
};

}  // namespace fairrep

#endif  // FAIRREP_MECHANISM_H_
