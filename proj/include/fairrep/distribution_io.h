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

#ifndef FAIRREP_DISTRIBUTION_IO_H_
#define FAIRREP_DISTRIBUTION_IO_H_

#include <string>

#include "fairrep/joint_pmf.h"

namespace fairrep {

// Source files are JSON objects:
//   {"s_alphabet": ["0","1"], "x_alphabet": [...], "t_alphabet": [...],
//    "pmf": [[[p(s0,x0,t0), ...], ...], ...]}
// with pmf nested s-major, then x, then t. Entries are "a/b" strings,
// decimal strings or JSON numbers. In exact mode decimals are read as the
// exact rational they spell.
//
// Throws ParseError (malformed, wrong shape, negative entry),
// DuplicateSymbol, NormalizationError (sum != 1; deficit = 1 - sum, exact
// in exact mode).
JointPMF ParseDistribution(const std::string& text, bool exact = true);

// Inverse of ParseDistribution for (S, X, T) joints: exact masses as "a/b"
// (or "0", "1"), float masses as 17-digit decimals. Throws InvalidArgument
// for other axis layouts.
std::string RenderDistribution(const JointPMF& p);

}  // namespace fairrep

#endif  // FAIRREP_DISTRIBUTION_IO_H_
