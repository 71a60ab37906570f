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

#ifndef _QSTEER_CLI_VALIDATE_H
#define _QSTEER_CLI_VALIDATE_H

#include <string>
#include <vector>

namespace qsteer::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CheckGroup {
    std::string name;
    std::vector<CheckResult> checks;
    bool passed() const;
};

struct ValidationReport {
    std::vector<CheckGroup> groups;
    bool passed() const;
};

struct ValidationOptions {
    /// Debug hook: multiplies the jump rate used by the correlator
    /// estimator. Any value other than 1 should fail the decision group.
    double gamma_scale = 1.0;
};

/// Group names in report order.
const std::vector<std::string> &validation_groups();

/// Runs every invariant group. Takes a few seconds on one core.
ValidationReport run_validation(const ValidationOptions &options = {});

/// JSON object {"passed": bool, "groups": [{"name", "passed", "checks": [...]}]}.
std::string render_report(const ValidationReport &report);

}  // namespace qsteer::cli

#endif
