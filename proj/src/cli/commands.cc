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

#include "qsteer/cli/commands.h"

#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "qsteer/cli/validate.h"
#include "qsteer/errors.h"

using namespace qsteer;
using namespace qsteer::cli;

RunSpec qsteer::cli::effective_spec(RunSpec spec, const CliOptions &options) {
    if (options.seed) {
        spec.seed = *options.seed;
    }
    if (options.purity) {
        spec.purity = true;
    }
    return spec;
}

OutputBundle qsteer::cli::cmd_run(const RunSpec &spec_in, const CliOptions &options) {
    RunSpec spec = effective_spec(spec_in, options);
    if (!spec.n_qubits) {
        throw SpecError(0, "run needs n_qubits");
    }
    size_t n = *spec.n_qubits;
    ProtocolConfig config = protocol_config(spec, n);
    EnsembleStats stats = run_ensemble(config, make_observable(spec, n), ensemble_options(spec, options.workers));
    OutputBundle bundle = make_bundle("run", spec, stats);
    write_bundle(bundle, options.out);
    return bundle;
}

std::string qsteer::cli::render_sweep(const SweepResult &result) {
    std::string out = "n_qubits,final_mean_fq,final_stderr_fq,final_mean_fq_over_n,convergence_step,converged_trajectories\n";
    for (const auto &r : result.rows) {
        out += std::to_string(r.n_qubits);
        out += "," + format_sig(r.final_mean_fq, 10);
        out += "," + format_sig(r.final_stderr_fq, 10);
        out += "," + format_sig(r.final_mean_fq / static_cast<double>(r.n_qubits), 10);
        out += "," + (r.convergence_step ? std::to_string(*r.convergence_step) : std::string());
        out += "," + std::to_string(r.converged_trajectories) + "\n";
    }
    return out;
}

std::string qsteer::cli::render_fit(const ScalingFit &fit) {
    return "a,b,residual\n" + format_sig(fit.a, 10) + "," + format_sig(fit.b, 10) + "," + format_sig(fit.residual, 10) +
           "\n";
}

SweepResult qsteer::cli::cmd_sweep(const RunSpec &spec_in, const CliOptions &options) {
    RunSpec spec = effective_spec(spec_in, options);
    if (spec.n_list.size() < 2) {
        throw SpecError(0, "sweep needs at least two entries in n_list");
    }
    for (size_t n : spec.n_list) {
        validate_for(spec, n);
    }
    std::filesystem::create_directories(options.out);
    SweepResult result;
    std::vector<ScalingPoint> points;
    for (size_t n : spec.n_list) {
        ProtocolConfig config = protocol_config(spec, n);
        EnsembleOptions eo = ensemble_options(spec, options.workers);
        eo.keep_records = 0;
        EnsembleStats stats = run_ensemble(config, make_observable(spec, n), eo);
        SweepRow row;
        row.n_qubits = n;
        row.final_mean_fq = stats.mean_fq.back();
        row.final_stderr_fq = stats.stderr_fq.back();
        row.convergence_step = stats.mean_convergence_step;
        for (const auto &c : stats.convergence_step) {
            row.converged_trajectories += c.has_value();
        }
        result.rows.push_back(row);
        points.push_back({n, row.convergence_step ? std::optional<double>(static_cast<double>(*row.convergence_step))
                                                   : std::nullopt});
        write_text_file(options.out / ("curve_n" + std::to_string(n) + ".csv"), render_curve(stats));
    }
    std::filesystem::remove(options.out / "fit.csv");
    try {
        result.fit = convergence_scaling(points, &result.warnings);
        write_text_file(options.out / "fit.csv", render_fit(*result.fit));
    } catch (const std::invalid_argument &e) {
        result.warnings.push_back(std::string("no scaling fit: ") + e.what());
    }
    write_text_file(options.out / "sweep.csv", render_sweep(result));
    write_text_file(options.out / MANIFEST_FILE, render_manifest("sweep", spec));
    return result;
}

int qsteer::cli::run_cli(int argc, char **argv) {
    CLI::App app{"Active steering of qubit registers toward entangled states by weak measurements"};
    app.require_subcommand(1);

    std::string config_path;
    CliOptions options;
    options.workers = std::max<size_t>(1, std::thread::hardware_concurrency());
    uint64_t seed = 0;
    double gamma_scale = 1.0;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "Run spec (key=value lines)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", options.out, "Output directory");
        cmd->add_option("--seed", seed, "Master seed, overrides the spec");
        cmd->add_option("--workers", options.workers, "Worker threads; results do not depend on it")
            ->check(CLI::PositiveNumber);
        cmd->add_flag("--purity", options.purity, "Accumulate the averaged density matrix");
    };
    CLI::App *run = app.add_subcommand("run", "Run one trajectory ensemble");
    add_common(run);
    CLI::App *sweep = app.add_subcommand("sweep", "Run one ensemble per n_list entry and fit the step scaling");
    add_common(sweep);
    CLI::App *validate = app.add_subcommand("validate", "Run the built-in invariant checks");
    validate->add_option("--gamma-scale", gamma_scale)->group("");  // hidden debug hook

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            ValidationReport report = run_validation({gamma_scale});
            std::cout << render_report(report) << "\n";
            return report.passed() ? 0 : 1;
        }
        for (CLI::App *cmd : {run, sweep}) {
            if (*cmd && cmd->count("--seed")) {
                options.seed = seed;
            }
        }
        RunSpec spec = load_run_spec(config_path);
        if (*run) {
            cmd_run(spec, options);
            std::cerr << "wrote " << options.out.string() << "\n";
        } else {
            SweepResult result = cmd_sweep(spec, options);
            for (const auto &w : result.warnings) {
                std::cerr << "warning: " << w << "\n";
            }
            std::cout << render_sweep(result);
            if (result.fit) {
                std::cout << render_fit(*result.fit);
            }
        }
    } catch (const SpecError &e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
