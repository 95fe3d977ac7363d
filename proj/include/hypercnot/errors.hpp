// Copyright 2026 The hypercnot Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace hypercnot {

/// Malformed or out-of-contract input supplied by a caller (bad photon
/// coefficients, invalid indices, negative sink mass, ...).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Scattering denominators that vanish for forced, non-physical parameters.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// The physics leaves nothing to report, e.g. a block that never transmits
/// so every photon ends in a sink.
class DegeneratePhysicsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Internal routing bug: an amplitude reached an element it must never see.
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace hypercnot
