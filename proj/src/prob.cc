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

#include "fairrep/prob.h"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fairrep/errors.h"

namespace fairrep {
namespace {

mpz_class FloorQ(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpq_class SimplestIn(const mpq_class& lo, const mpq_class& hi) {
  mpq_class n(FloorQ(lo));
  if (n == lo) return n;
  if (n + 1 <= hi) return n + 1;
  mpq_class inner = SimplestIn(1 / (hi - n), 1 / (lo - n));
  return n + 1 / inner;
}

// Exact decimal literal -> rational. Returns false on malformed input.
bool ParseDecimal(std::string_view text, mpq_class* out) {
  size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) return false;
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::string exp_text(text.substr(i));
    if (exp_text.empty()) return false;
    char* end = nullptr;
    exponent = std::strtol(exp_text.c_str(), &end, 10);
    if (end == exp_text.c_str() || *end != '\0') return false;
    i = text.size();
  }
  if (i != text.size()) return false;
  mpz_class mantissa(digits, 10);
  long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  mpq_class q = shift >= 0 ? mpq_class(mantissa * scale) : mpq_class(mantissa, scale);
  q.canonicalize();
  *out = negative ? mpq_class(-q) : q;
  return true;
}

}  // namespace

Prob::Prob(long num, long den) : value_(mpq_class(num, den)) { Canon(); }

void Prob::Canon() {
  if (auto* q = std::get_if<mpq_class>(&value_)) q->canonicalize();
}

Prob Prob::Parse(std::string_view text, bool exact) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
    ++start;
  s = s.substr(start);
  if (s.empty()) throw ParseError("empty probability literal");

  mpq_class q;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpq_class num, den;
    if (!ParseDecimal(std::string_view(s).substr(0, slash), &num) ||
        !ParseDecimal(std::string_view(s).substr(slash + 1), &den)) {
      throw ParseError("malformed fraction '" + s + "'");
    }
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    q = num / den;
  } else if (!ParseDecimal(s, &q)) {
    throw ParseError("malformed probability literal '" + s + "'");
  }
  if (exact) return Prob(q);
  // strtod rounds to nearest, so rendered doubles read back bit for bit;
  // mpq_get_d would truncate.
  if (slash == std::string::npos) return Float(std::strtod(s.c_str(), nullptr));
  return Float(std::strtod(s.substr(0, slash).c_str(), nullptr) /
               std::strtod(s.substr(slash + 1).c_str(), nullptr));
}

Prob Prob::SimplestBetween(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi >= lo)) {
    throw InvalidArgument("SimplestBetween requires 0 <= lo <= hi");
  }
  return Prob(SimplestIn(mpq_class(lo), mpq_class(hi)));
}

double Prob::to_double() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

int Prob::sign() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
  double d = std::get<double>(value_);
  if (std::fabs(d) <= kFloatZero) return 0;
  return d > 0 ? 1 : -1;
}

bool Prob::is_zero() const { return sign() == 0; }
bool Prob::is_positive() const { return sign() > 0; }

#define FAIRREP_PROB_OP(op)                                          \
  Prob& Prob::operator op##=(const Prob& o) {                        \
    if (is_exact() && o.is_exact()) {                                \
      std::get<mpq_class>(value_) op## = o.rational();               \
    } else {                                                         \
      value_ = to_double() op o.to_double();                         \
    }                                                                \
    return *this;                                                    \
  }

FAIRREP_PROB_OP(+)
FAIRREP_PROB_OP(-)
FAIRREP_PROB_OP(*)

#undef FAIRREP_PROB_OP

Prob& Prob::operator/=(const Prob& o) {
  if (o.is_exact() && sgn(o.rational()) == 0) {
    throw InvalidArgument("division of a probability by exact zero");
  }
  if (is_exact() && o.is_exact()) {
    std::get<mpq_class>(value_) /= o.rational();
  } else {
    value_ = to_double() / o.to_double();
  }
  return *this;
}

int Compare(const Prob& a, const Prob& b) {
  if (a.is_exact() && b.is_exact()) return cmp(a.rational(), b.rational());
  double d = a.to_double() - b.to_double();
  if (std::fabs(d) <= kFloatZero) return 0;
  return d < 0 ? -1 : 1;
}

std::string Prob::str() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(value_));
  return buf;
}

double EntropyTerm(const Prob& p) {
  if (!p.is_positive()) return 0.0;
  double v = p.to_double();
  return -v * std::log2(v);
}

}  // namespace fairrep
