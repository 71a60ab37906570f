// Copyright 2026 The qsteer Authors
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

#ifndef _QSTEER_ERRORS_H
#define _QSTEER_ERRORS_H

#include <stdexcept>
#include <string>

namespace qsteer {

/// Raised when a request exceeds a documented size limit (qubit count,
/// density-matrix accumulation).
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// Raised by phase extraction when the state has (numerically) no weight on
/// one of the two GHZ branches.
struct NotOnManifold : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised when a measurement outcome cannot occur for the given state.
struct InvalidOutcome : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace qsteer

#endif
