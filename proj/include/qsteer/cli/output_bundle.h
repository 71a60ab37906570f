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

#ifndef _QSTEER_CLI_OUTPUT_BUNDLE_H
#define _QSTEER_CLI_OUTPUT_BUNDLE_H

#include <filesystem>
#include <string>

#include "qsteer/cli/run_spec.h"
#include "qsteer/ensemble.h"

namespace qsteer::cli {

constexpr const char *QSTEER_VERSION = "0.1.0";

constexpr const char *CURVE_FILE = "curve.csv";
constexpr const char *HISTOGRAM_FILE = "histogram.csv";
constexpr const char *TRAJECTORY_FILE = "trajectory.jsonl";
constexpr const char *MANIFEST_FILE = "manifest.txt";

/// Rendered contents of the files written by a run. An empty histogram
/// means no final state was on the GHZ manifold and the file is skipped.
struct OutputBundle {
    std::string curve_csv;
    std::string histogram_csv;
    std::string trajectory_jsonl;
    std::string manifest;
};

/// Git blob hash ("blob <size>\0<content>", SHA-1) of the text, in hex.
std::string git_blob_hash(const std::string &text);

/// printf-style %.<digits>g formatting with a '.' decimal separator.
std::string format_sig(double value, int digits);

std::string render_curve(const EnsembleStats &stats);
std::string render_histogram(const PhaseStatistics &phase);
std::string render_trajectories(const std::vector<TrajectoryRecord> &records);
/// Metadata comment lines followed by the canonical spec, so the manifest
/// is itself a config that reproduces the run.
std::string render_manifest(const std::string &command, const RunSpec &spec);

OutputBundle make_bundle(const std::string &command, const RunSpec &spec, const EnsembleStats &stats);

/// Writes the bundle into dir, creating it when needed.
void write_bundle(const OutputBundle &bundle, const std::filesystem::path &dir);
void write_text_file(const std::filesystem::path &path, const std::string &content);

}  // namespace qsteer::cli

#endif
