// Copyright 2026 The dpscomp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSCOMP_ERRORS_H_
#define DPSCOMP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpscomp {

// Base class for every error raised by the library. Solver outcomes such as
// "infeasible" are reported through status enums, not exceptions; exceptions
// are reserved for violated preconditions and unusable inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration (bad keys, empty clusters, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A mobile sits exactly on a base station, so the path loss is unbounded.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// A served link has zero effective gain |h^H w| along its beam direction.
class DegenerateAssociationError : public Error {
 public:
  using Error::Error;
};

// The downlink scaling system G delta = 1 sigma^2 has no positive solution.
class InfeasibleScalingError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration refused because the profile count exceeds the guard.
class EnumerationGuardError : public Error {
 public:
  using Error::Error;
};

// Internal invariant broken (should not happen for valid inputs).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpscomp

#endif  // DPSCOMP_ERRORS_H_
