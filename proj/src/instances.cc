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

#include "fairrep/instances.h"

#include <array>
#include <functional>

#include "fairrep/errors.h"

namespace fairrep {
namespace {

std::string Bits(unsigned value, int width) {
  std::string s;
  for (int i = width - 1; i >= 0; --i) s += ((value >> i) & 1u) ? '1' : '0';
  return s;
}

Alphabet BitStrings(int width) {
  std::vector<std::string> symbols;
  for (unsigned v = 0; v < (1u << width); ++v) symbols.push_back(Bits(v, width));
  return Alphabet(std::move(symbols));
}

// Joint over (S, X, T) from a list of equally likely outcomes.
JointPMF Uniform(Alphabet s, Alphabet x, Alphabet t,
                 const std::vector<std::array<size_t, 3>>& outcomes) {
  std::vector<Axis> axes = {{"S", std::move(s)}, {"X", std::move(x)},
                            {"T", std::move(t)}};
  const size_t nx = axes[1].alphabet.size();
  const size_t nt = axes[2].alphabet.size();
  std::vector<Prob> mass(axes[0].alphabet.size() * nx * nt);
  const Prob p(1, static_cast<long>(outcomes.size()));
  for (const auto& o : outcomes) mass[(o[0] * nx + o[1]) * nt + o[2]] += p;
  return JointPMF(std::move(axes), std::move(mass));
}

}  // namespace

JointPMF InstanceD1() {
  std::vector<std::array<size_t, 3>> out;
  for (size_t s = 0; s < 2; ++s) {
    for (size_t w = 0; w < 2; ++w) out.push_back({s, s * 2 + w, w});
  }
  return Uniform(BitStrings(1), BitStrings(2), BitStrings(1), out);
}

JointPMF InstanceD2() {
  std::vector<std::array<size_t, 3>> out;
  for (size_t t = 0; t < 4; ++t) out.push_back({t % 2, t, t});
  return Uniform(BitStrings(1), Alphabet::Indexed("", 4), Alphabet::Indexed("", 4),
                 out);
}

JointPMF InstanceD3() {
  return Uniform(BitStrings(1), BitStrings(1), BitStrings(1), {{0, 0, 0}, {1, 1, 1}});
}

JointPMF InstanceD4() {
  std::vector<std::array<size_t, 3>> out;
  for (size_t v = 0; v < 8; ++v) out.push_back({v >> 2, v, (v >> 1) & 1});
  return Uniform(BitStrings(1), BitStrings(3), BitStrings(1), out);
}

JointPMF InstanceD5() {
  std::vector<std::array<size_t, 3>> out;
  for (size_t v = 0; v < 128; ++v) out.push_back({v >> 6, v, (v >> 5) & 1});
  return Uniform(BitStrings(1), BitStrings(7), BitStrings(1), out);
}

JointPMF InstanceTS() {
  std::vector<std::array<size_t, 3>> out;
  for (size_t v = 0; v < 4; ++v) out.push_back({v >> 1, v, v >> 1});
  return Uniform(BitStrings(1), BitStrings(2), BitStrings(1), out);
}

JointPMF NamedInstance(const std::string& name) {
  static const std::vector<std::pair<std::string, std::function<JointPMF()>>>
      kTable = {{"D1", InstanceD1}, {"D2", InstanceD2}, {"D3", InstanceD3},
                {"D4", InstanceD4}, {"D5", InstanceD5}, {"TS", InstanceTS}};
  for (const auto& [n, make] : kTable) {
    if (n == name) return make();
  }
  throw InvalidArgument("unknown instance '" + name + "'");
}

std::vector<std::string> NamedInstanceNames() {
  return {"D1", "D2", "D3", "D4", "D5", "TS"};
}

}  // namespace fairrep
