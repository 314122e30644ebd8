// Copyright 2026 The nlaphase Authors
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

#ifndef NLAPHASE_ERRORS_H
#define NLAPHASE_ERRORS_H

#include <stdexcept>
#include <string>

namespace nlaphase {

/// Bad input value (negative amplitude, gain < 1, empty sample, ...).
class InvalidArgument : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Two Fock vectors or operators with different cutoffs were combined.
class DimensionMismatch : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures where the inputs are valid but the quantity asked for
/// does not exist (zero-probability branch, zero information, no crossing).
class NumericalDegeneracy : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class DegenerateBranch : public NumericalDegeneracy {
   public:
    using NumericalDegeneracy::NumericalDegeneracy;
};

class DegenerateObservable : public NumericalDegeneracy {
   public:
    using NumericalDegeneracy::NumericalDegeneracy;
};

class NoCrossing : public NumericalDegeneracy {
   public:
    using NumericalDegeneracy::NumericalDegeneracy;
};

class NoBreakeven : public NumericalDegeneracy {
   public:
    using NumericalDegeneracy::NumericalDegeneracy;
};

/// An estimator was asked for a value with no informative counts.
class NoData : public NumericalDegeneracy {
   public:
    using NumericalDegeneracy::NumericalDegeneracy;
};

/// A documented precondition on a derived quantity does not hold, e.g. a
/// state/derivative pair whose overlap is not purely imaginary.
class PreconditionViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

}  // namespace nlaphase

#endif  // NLAPHASE_ERRORS_H
