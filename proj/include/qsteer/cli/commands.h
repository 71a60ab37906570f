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

#ifndef _QSTEER_CLI_COMMANDS_H
#define _QSTEER_CLI_COMMANDS_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsteer/cli/output_bundle.h"
#include "qsteer/cli/run_spec.h"

namespace qsteer::cli {

/// Command-line settings that are not part of the spec. workers never
/// changes results; seed and purity are folded into the effective spec.
struct CliOptions {
    std::filesystem::path out = "qsteer_out";
    size_t workers = 1;
    std::optional<uint64_t> seed;
    bool purity = false;
};

RunSpec effective_spec(RunSpec spec, const CliOptions &options);

/// Runs one ensemble and writes its bundle. Requires n_qubits.
OutputBundle cmd_run(const RunSpec &spec, const CliOptions &options);

struct SweepRow {
    size_t n_qubits = 0;
    double final_mean_fq = 0;
    double final_stderr_fq = 0;
    /// First step at which the mean curve reached the convergence fraction.
    std::optional<size_t> convergence_step;
    size_t converged_trajectories = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<ScalingFit> fit;
    std::vector<std::string> warnings;
};

/// Runs one ensemble per entry of n_list and writes sweep.csv, one
/// curve_n<N>.csv per N, fit.csv when a fit is possible and the manifest.
SweepResult cmd_sweep(const RunSpec &spec, const CliOptions &options);

std::string render_sweep(const SweepResult &result);
std::string render_fit(const ScalingFit &fit);

/// Entry point of the qsteer executable; returns the process exit code.
int run_cli(int argc, char **argv);

}  // namespace qsteer::cli

#endif
