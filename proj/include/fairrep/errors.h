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

#ifndef FAIRREP_ERRORS_H_
#define FAIRREP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fairrep {

// Base class for every error raised by the library. Each subclass names one
// failure kind so callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FAIRREP_DEFINE_ERROR(Name)         \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

FAIRREP_DEFINE_ERROR(InvalidArgument);
FAIRREP_DEFINE_ERROR(UnknownAxis);
FAIRREP_DEFINE_ERROR(NonNormalized);
FAIRREP_DEFINE_ERROR(AlphabetMismatch);
FAIRREP_DEFINE_ERROR(DuplicateSymbol);
FAIRREP_DEFINE_ERROR(TooManyAxes);
FAIRREP_DEFINE_ERROR(DegenerateConditional);
FAIRREP_DEFINE_ERROR(AlphaOutOfRange);
FAIRREP_DEFINE_ERROR(RegimeError);
FAIRREP_DEFINE_ERROR(DegenerateSource);
FAIRREP_DEFINE_ERROR(TooLarge);
FAIRREP_DEFINE_ERROR(ParseError);

#undef FAIRREP_DEFINE_ERROR

// Masses that do not sum to one. `deficit` is 1 - sum, rendered exactly when
// the input was exact.
class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& what, std::string deficit)
      : Error(what), deficit_(std::move(deficit)) {}
  const std::string& deficit() const { return deficit_; }

 private:
  std::string deficit_;
};

// The strong functional representation search did not reach its target
// bound within the budget. Carries the best excess leakage found.
class SearchFailed : public Error {
 public:
  SearchFailed(const std::string& what, double best_excess, double target)
      : Error(what), best_excess_(best_excess), target_(target) {}
  double best_excess() const { return best_excess_; }
  double target() const { return target_; }

 private:
  double best_excess_;
  double target_;
};

}  // namespace fairrep

#endif  // FAIRREP_ERRORS_H_
