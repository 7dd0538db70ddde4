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

#ifndef FAIRREP_INSTANCES_H_
#define FAIRREP_INSTANCES_H_

#include <string>
#include <vector>

#include "fairrep/joint_pmf.h"

namespace fairrep {

// Small closed-form sources over (S, X, T), all exact.
//
//   D1  S, W independent fair bits, X = (S, W), T = W.
//   D2  T uniform on 4 symbols, S = T mod 2, X = T.
//   D3  S = X = T, one fair bit.
//   D4  S, T, N independent fair bits, X = (S, T, N).
//   D5  S, T fair bits, N1..N5 fair noise bits, X = (S, T, N1, ..., N5).
//   TS  T = S fair bit, N a fair bit, X = (S, N).
JointPMF InstanceD1();
JointPMF InstanceD2();
JointPMF InstanceD3();
JointPMF InstanceD4();
JointPMF InstanceD5();
JointPMF InstanceTS();

// By name ("D1".."D5", "TS"); throws InvalidArgument.
JointPMF NamedInstance(const std::string& name);
std::vector<std::string> NamedInstanceNames();

}  // namespace fairrep

#endif  // FAIRREP_INSTANCES_H_
