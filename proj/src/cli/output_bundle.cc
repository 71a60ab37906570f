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

#include "qsteer/cli/output_bundle.h"

#include <openssl/sha.h>

#include <cstdio>
#include <fstream>

#include "json.hpp"

using namespace qsteer;
using namespace qsteer::cli;

std::string qsteer::cli::git_blob_hash(const std::string &text) {
    std::string blob = "blob " + std::to_string(text.size());
    blob.push_back('\0');
    blob += text;
    unsigned char digest[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char *>(blob.data()), blob.size(), digest);
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned char c : digest) {
        out.push_back(hex[c >> 4]);
        out.push_back(hex[c & 15]);
    }
    return out;
}

std::string qsteer::cli::format_sig(double value, int digits) {
    // The C locale is never changed by this program, so %g emits '.'.
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

std::string qsteer::cli::render_curve(const EnsembleStats &stats) {
    bool with_purity = !stats.purity.empty();
    std::string out = with_purity ? "step,mean_fq,stderr_fq,jump_rate,purity\n" : "step,mean_fq,stderr_fq,jump_rate\n";
    for (size_t t = 0; t < stats.mean_fq.size(); t++) {
        out += std::to_string(t + 1);
        out += "," + format_sig(stats.mean_fq[t], 10);
        out += "," + format_sig(stats.stderr_fq[t], 10);
        out += "," + format_sig(stats.jump_rate[t], 10);
        if (with_purity) {
            out += "," + format_sig(stats.purity[t], 10);
        }
        out += "\n";
    }
    return out;
}

std::string qsteer::cli::render_histogram(const PhaseStatistics &phase) {
    std::string out = "bin_center,count\n";
    for (size_t k = 0; k < phase.bins; k++) {
        out += format_sig(phase.centers[k], 12) + "," + std::to_string(phase.counts[k]) + "\n";
    }
    return out;
}

std::string qsteer::cli::render_trajectories(const std::vector<TrajectoryRecord> &records) {
    std::string out;
    for (size_t i = 0; i < records.size(); i++) {
        const auto &steps = records[i].steps;
        for (size_t t = 0; t < steps.size(); t++) {
            // F_Q is rounded through its 10-digit text so the log stays
            // stable across platforms.
            double fq = std::stod(format_sig(steps[t].fq, 10));
            for (const auto &p : steps[t].pairs) {
                nlohmann::ordered_json line;
                line["trajectory"] = i;
                line["step"] = t + 1;
                line["pair"] = {p.pair.first, p.pair.second};
                line["coupling"] = to_string(p.coupling);
                line["xi"] = p.outcome.xi;
                line["eta"] = p.outcome.eta;
                line["fq"] = fq;
                out += line.dump() + "\n";
            }
        }
    }
    return out;
}

std::string qsteer::cli::render_manifest(const std::string &command, const RunSpec &spec) {
    std::string canonical = emit_run_spec(spec);
    std::string out;
    out += "# qsteer " + std::string(QSTEER_VERSION) + "\n";
    out += "# command=" + command + "\n";
    out += "# seed=" + std::to_string(spec.seed) + "\n";
    out += "# config_hash=" + git_blob_hash(canonical) + "\n";
    out += canonical;
    return out;
}

OutputBundle qsteer::cli::make_bundle(const std::string &command, const RunSpec &spec, const EnsembleStats &stats) {
    OutputBundle b;
    b.curve_csv = render_curve(stats);
    if (stats.phase) {
        b.histogram_csv = render_histogram(*stats.phase);
    }
    b.trajectory_jsonl = render_trajectories(stats.records);
    b.manifest = render_manifest(command, spec);
    return b;
}

void qsteer::cli::write_text_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
}

void qsteer::cli::write_bundle(const OutputBundle &bundle, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / CURVE_FILE, bundle.curve_csv);
    std::filesystem::remove(dir / HISTOGRAM_FILE);
    if (!bundle.histogram_csv.empty()) {
        write_text_file(dir / HISTOGRAM_FILE, bundle.histogram_csv);
    }
    write_text_file(dir / TRAJECTORY_FILE, bundle.trajectory_jsonl);
    write_text_file(dir / MANIFEST_FILE, bundle.manifest);
}
