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

#ifndef FAIRREP_PROB_H_
#define FAIRREP_PROB_H_

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <variant>

namespace fairrep {

// Values below this magnitude are treated as zero when a Prob is in float
// mode. Exact values are compared exactly.
inline constexpr double kFloatZero = 1e-14;

// A probability-like scalar: an exact rational by default, or a double in
// float fallback mode. Arithmetic between two exact values stays exact; any
// operation touching a float value produces a float.
class Prob {
 public:
  Prob() : value_(mpq_class(0)) {}
  explicit Prob(mpq_class q) : value_(std::move(q)) { Canon(); }
  Prob(long num, long den);

  static Prob Exact(long num, long den = 1) { return Prob(num, den); }
  static Prob Float(double d) { return Prob(FloatTag{}, d); }
  static Prob Zero(bool exact) { return exact ? Prob() : Float(0.0); }
  static Prob One(bool exact) { return exact ? Prob(1, 1) : Float(1.0); }

  // Parses "a/b", an integer, or a decimal literal ("0.125", "1e-3"). In
  // exact mode decimals are converted exactly; in float mode everything is
  // parsed to double. Throws ParseError.
  static Prob Parse(std::string_view text, bool exact);

  // The simplest rational in [lo, hi] (Stern-Brocot descent). Requires
  // 0 <= lo <= hi.
  static Prob SimplestBetween(double lo, double hi);

  bool is_exact() const { return std::holds_alternative<mpq_class>(value_); }
  const mpq_class& rational() const { return std::get<mpq_class>(value_); }
  double to_double() const;

  bool is_zero() const;
  bool is_positive() const;
  int sign() const;

  Prob& operator+=(const Prob& o);
  Prob& operator-=(const Prob& o);
  Prob& operator*=(const Prob& o);
  Prob& operator/=(const Prob& o);

  friend Prob operator+(Prob a, const Prob& b) { return a += b; }
  friend Prob operator-(Prob a, const Prob& b) { return a -= b; }
  friend Prob operator*(Prob a, const Prob& b) { return a *= b; }
  friend Prob operator/(Prob a, const Prob& b) { return a /= b; }

  // Exact comparison when both sides are exact; otherwise compares doubles
  // with the kFloatZero tolerance (so nearly-equal floats compare equal).
  friend int Compare(const Prob& a, const Prob& b);
  friend bool operator==(const Prob& a, const Prob& b) {
    return Compare(a, b) == 0;
  }
  friend bool operator<(const Prob& a, const Prob& b) {
    return Compare(a, b) < 0;
  }
  friend bool operator<=(const Prob& a, const Prob& b) {
    return Compare(a, b) <= 0;
  }
  friend bool operator>(const Prob& a, const Prob& b) {
    return Compare(a, b) > 0;
  }
  friend bool operator>=(const Prob& a, const Prob& b) {
    return Compare(a, b) >= 0;
  }

  // "a/b" (or "a") for exact values, %.17g for floats.
  std::string str() const;

  Prob ToFloat() const { return Float(to_double()); }

 private:
  struct FloatTag {};
  Prob(FloatTag, double d) : value_(d) {}
  void Canon();

  std::variant<mpq_class, double> value_;
};

// -p*log2(p) with 0 log 0 := 0, evaluated in double.
double EntropyTerm(const Prob& p);

}  // namespace fairrep

#endif  // FAIRREP_PROB_H_
