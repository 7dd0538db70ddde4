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

#include "fairrep/distribution_io.h"

#include <cmath>
#include <cstdio>
#include <vector>

#include "fairrep/errors.h"
#include "json.hpp"

namespace fairrep {
namespace {

using nlohmann::json;

Alphabet ReadAlphabet(const json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty()) {
    throw ParseError("'" + key + "' must be a non-empty array of strings");
  }
  std::vector<std::string> symbols;
  for (const json& s : doc[key]) {
    if (!s.is_string()) throw ParseError("'" + key + "' must contain strings only");
    symbols.push_back(s.get<std::string>());
  }
  return Alphabet(std::move(symbols));
}

Prob ReadMass(const json& v, bool exact, const std::string& where) {
  Prob p;
  if (v.is_string()) {
    p = Prob::Parse(v.get<std::string>(), exact);
  } else if (v.is_number()) {
    // The dump is the literal as written for integers and the shortest
    // round-trip form for floats.
    p = Prob::Parse(v.dump(), exact);
  } else {
    throw ParseError("pmf entry at " + where + " is neither a string nor a number");
  }
  if (p.sign() < 0) throw ParseError("negative pmf entry at " + where);
  return p;
}

const json& ReadLevel(const json& v, size_t n, const std::string& where) {
  if (!v.is_array() || v.size() != n) {
    throw ParseError("pmf" + where + " must be an array of " + std::to_string(n) +
                     " entries");
  }
  return v;
}

}  // namespace

JointPMF ParseDistribution(const std::string& text, bool exact) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed distribution file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("distribution file must be a JSON object");
  Alphabet s = ReadAlphabet(doc, "s_alphabet");
  Alphabet x = ReadAlphabet(doc, "x_alphabet");
  Alphabet t = ReadAlphabet(doc, "t_alphabet");
  if (!doc.contains("pmf")) throw ParseError("missing 'pmf'");

  std::vector<Prob> mass;
  mass.reserve(s.size() * x.size() * t.size());
  const json& top = ReadLevel(doc["pmf"], s.size(), "");
  for (size_t i = 0; i < s.size(); ++i) {
    const std::string wi = "[" + std::to_string(i) + "]";
    const json& row = ReadLevel(top[i], x.size(), wi);
    for (size_t j = 0; j < x.size(); ++j) {
      const std::string wj = wi + "[" + std::to_string(j) + "]";
      const json& cell = ReadLevel(row[j], t.size(), wj);
      for (size_t k = 0; k < t.size(); ++k) {
        mass.push_back(ReadMass(cell[k], exact, wj + "[" + std::to_string(k) + "]"));
      }
    }
  }

  Prob sum = Prob::Zero(exact);
  for (const Prob& m : mass) sum += m;
  const Prob deficit = Prob::One(exact) - sum;
  const bool ok = exact ? deficit.is_zero() : std::fabs(deficit.to_double()) <= 1e-12;
  if (!ok) {
    throw NormalizationError("pmf sums to " + sum.str() + ", deficit " + deficit.str(),
                             deficit.str());
  }
  return JointPMF({{"S", std::move(s)}, {"X", std::move(x)}, {"T", std::move(t)}},
                  std::move(mass));
}

std::string RenderDistribution(const JointPMF& p) {
  if (p.rank() != 3 || p.axis(0).role != "S" || p.axis(1).role != "X" ||
      p.axis(2).role != "T") {
    throw InvalidArgument("only (S, X, T) joints can be rendered");
  }
  json doc = json::object();
  doc["s_alphabet"] = p.axis(0).alphabet.symbols();
  doc["x_alphabet"] = p.axis(1).alphabet.symbols();
  doc["t_alphabet"] = p.axis(2).alphabet.symbols();
  const size_t ns = p.axis(0).alphabet.size(), nx = p.axis(1).alphabet.size(),
               nt = p.axis(2).alphabet.size();
  json pmf = json::array();
  for (size_t i = 0; i < ns; ++i) {
    json row = json::array();
    for (size_t j = 0; j < nx; ++j) {
      json cell = json::array();
      for (size_t k = 0; k < nt; ++k) cell.push_back(p.at({i, j, k}).str());
      row.push_back(std::move(cell));
    }
    pmf.push_back(std::move(row));
  }
  doc["pmf"] = std::move(pmf);
  return doc.dump(2) + "\n";
}

}  // namespace fairrep
