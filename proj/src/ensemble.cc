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

#include "qsteer/ensemble.h"

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <stdexcept>
#include <thread>

#include "qsteer/errors.h"

using namespace qsteer;

namespace {

/// Calls fn(i) for i in [0, count) on up to `workers` threads.
template <typename Fn>
void parallel_for(size_t count, size_t workers, Fn &&fn) {
    workers = std::min(std::max<size_t>(workers, 1), count);
    if (workers <= 1) {
        for (size_t i = 0; i < count; i++) {
            fn(i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (size_t w = 0; w < workers; w++) {
        threads.emplace_back(work);
    }
    for (auto &t : threads) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

/// Per-step data of one trajectory, padded to max_steps by holding the last
/// F_Q (and recording no outcomes) after it stopped.
struct TrajectorySeries {
    std::vector<double> fq;
    std::vector<uint32_t> jumps;
    std::vector<uint32_t> outcomes;
    std::optional<size_t> convergence_step;

    explicit TrajectorySeries(size_t steps) : fq(steps, 0.0), jumps(steps, 0), outcomes(steps, 0) {
    }

    void record(size_t t, const StepLog &log, double threshold) {
        fq[t] = log.fq;
        jumps[t] = static_cast<uint32_t>(log.jumps);
        outcomes[t] = static_cast<uint32_t>(log.outcomes);
        if (!convergence_step && log.fq >= threshold) {
            convergence_step = t + 1;
        }
    }

    void hold_from(size_t t) {
        for (size_t k = t; k < fq.size(); k++) {
            fq[k] = t > 0 ? fq[t - 1] : 0.0;
        }
    }
};

struct Finals {
    double fq = 0;
    std::optional<double> phase;
    size_t steps = 0;
    bool converged = false;
};

Finals finals_of(const TrajectoryRecord &record) {
    return {record.final_fq, record.final_phase, record.steps_executed, record.converged};
}

}  // namespace

PhaseStatistics qsteer::phase_statistics(std::span<const std::optional<double>> phases, size_t bins) {
    if (bins < 2) {
        throw std::invalid_argument("phase histogram needs at least 2 bins");
    }
    PhaseStatistics out;
    out.bins = bins;
    out.counts.assign(bins, 0);
    out.centers.resize(bins);
    const double width = 2 * std::numbers::pi / static_cast<double>(bins);
    for (size_t k = 0; k < bins; k++) {
        out.centers[k] = -std::numbers::pi + (static_cast<double>(k) + 0.5) * width;
    }
    Complex resultant = 0;
    for (const auto &phi : phases) {
        if (!phi) {
            out.off_manifold++;
            continue;
        }
        const double w = wrap_angle(*phi);
        // Bins are (lo, hi]; pi itself lands in the last bin.
        auto k = static_cast<long>(std::ceil((w + std::numbers::pi) / width)) - 1;
        k = std::clamp<long>(k, 0, static_cast<long>(bins) - 1);
        out.counts[static_cast<size_t>(k)]++;
        out.on_manifold++;
        resultant += std::polar(1.0, w);
    }
    if (out.on_manifold == 0) {
        throw std::domain_error("no phase on the GHZ manifold");
    }
    const double m = static_cast<double>(out.on_manifold);
    const double expected = m / static_cast<double>(bins);
    size_t largest = 0;
    for (size_t c : out.counts) {
        const double d = static_cast<double>(c) - expected;
        out.chi_square += d * d / expected;
        out.max_deviation_sigma = std::max(out.max_deviation_sigma, std::abs(d) / std::sqrt(expected));
        largest = std::max(largest, c);
    }
    out.p_value = boost::math::gamma_q(0.5 * static_cast<double>(bins - 1), 0.5 * out.chi_square);
    out.resultant_length = std::abs(resultant) / m;
    out.concentrated = largest == out.on_manifold;
    return out;
}

PhaseStatistics qsteer::phase_statistics(
    std::span<const StateVector> states, const SingleQubitBasis &basis, size_t bins, double overlap_floor) {
    std::vector<std::optional<double>> phases;
    phases.reserve(states.size());
    for (const auto &s : states) {
        phases.push_back(try_ghz_phase(s, basis, overlap_floor));
    }
    return phase_statistics(phases, bins);
}

Eigen::MatrixXcd qsteer::average_density_matrix(std::span<const StateVector> states) {
    if (states.empty()) {
        throw std::invalid_argument("average of no states");
    }
    const size_t dim = states[0].dim();
    Eigen::MatrixXcd columns(dim, states.size());
    for (size_t i = 0; i < states.size(); i++) {
        if (states[i].dim() != dim) {
            throw std::invalid_argument("states of different sizes");
        }
        auto a = states[i].amplitudes();
        for (size_t k = 0; k < dim; k++) {
            columns(k, i) = a[k];
        }
    }
    Eigen::MatrixXcd rho = columns * columns.adjoint();
    rho /= static_cast<double>(states.size());
    return rho;
}

double qsteer::purity(const Eigen::MatrixXcd &rho) {
    return rho.cwiseAbs2().sum();
}

std::vector<double> qsteer::purity_series(std::span<const Eigen::MatrixXcd> rhos, size_t purity_limit) {
    std::vector<double> out;
    out.reserve(rhos.size());
    for (const auto &rho : rhos) {
        if (rho.rows() > (Eigen::Index{1} << purity_limit)) {
            throw CapacityError("density matrix exceeds the purity limit");
        }
        out.push_back(purity(rho));
    }
    return out;
}

EnsembleStats qsteer::run_ensemble(
    const ProtocolConfig &config, const CollectiveObservable &obs, const EnsembleOptions &options) {
    config.validate();
    if (options.n_traj < 1) {
        throw std::invalid_argument("ensemble needs at least one trajectory");
    }
    if (options.purity && config.n_qubits > options.purity_limit) {
        throw CapacityError(
            "density-matrix accumulation limited to " + std::to_string(options.purity_limit) + " qubits");
    }
    const size_t n_traj = options.n_traj;
    const size_t steps = config.max_steps;
    const double n2 = static_cast<double>(config.n_qubits * config.n_qubits);
    const double threshold = options.convergence_fraction * n2;

    std::vector<TrajectorySeries> series(n_traj, TrajectorySeries(steps));
    std::vector<Finals> finals(n_traj);
    std::vector<TrajectoryRecord> kept(std::min(options.keep_records, n_traj));

    EnsembleStats stats;
    stats.n_traj = n_traj;
    stats.n_qubits = config.n_qubits;

    if (!options.purity) {
        parallel_for(n_traj, options.workers, [&](size_t i) {
            const bool keep = i < kept.size();
            TrajectoryRunner runner(config, obs, Rng::child(config.seed, i), keep);
            while (!runner.finished()) {
                const size_t t = runner.steps_executed();
                series[i].record(t, runner.step(), threshold);
            }
            series[i].hold_from(runner.steps_executed());
            TrajectoryRecord record = runner.finish();
            finals[i] = finals_of(record);
            if (keep) {
                kept[i] = std::move(record);
            }
        });
    } else {
        // Lockstep: all trajectories advance one step, then the averaged
        // density matrix of that step is formed in index order.
        std::vector<TrajectoryRunner> runners;
        runners.reserve(n_traj);
        for (size_t i = 0; i < n_traj; i++) {
            runners.emplace_back(config, obs, Rng::child(config.seed, i), i < kept.size());
        }
        const size_t dim = size_t{1} << config.n_qubits;
        Eigen::MatrixXcd columns(dim, n_traj);
        stats.purity.reserve(steps);
        for (size_t t = 0; t < steps; t++) {
            parallel_for(n_traj, options.workers, [&](size_t i) {
                if (!runners[i].finished()) {
                    series[i].record(t, runners[i].step(), threshold);
                } else {
                    series[i].fq[t] = series[i].fq[t - 1];
                }
            });
            for (size_t i = 0; i < n_traj; i++) {
                auto a = runners[i].state().amplitudes();
                for (size_t k = 0; k < dim; k++) {
                    columns(k, i) = a[k];
                }
            }
            Eigen::MatrixXcd rho = columns * columns.adjoint();
            rho /= static_cast<double>(n_traj);
            stats.purity.push_back(purity(rho));
            if (t + 1 == steps) {
                stats.avg_density_matrix = std::move(rho);
            }
        }
        for (size_t i = 0; i < n_traj; i++) {
            TrajectoryRecord record = runners[i].finish();
            finals[i] = finals_of(record);
            if (i < kept.size()) {
                kept[i] = std::move(record);
            }
        }
    }

    // Deterministic fold in trajectory order.
    stats.mean_fq.assign(steps, 0.0);
    stats.stderr_fq.assign(steps, 0.0);
    stats.jump_rate.assign(steps, 0.0);
    const double count = static_cast<double>(n_traj);
    for (size_t t = 0; t < steps; t++) {
        double sum = 0;
        uint64_t jumps = 0, outcomes = 0;
        for (size_t i = 0; i < n_traj; i++) {
            sum += series[i].fq[t];
            jumps += series[i].jumps[t];
            outcomes += series[i].outcomes[t];
        }
        const double mean = sum / count;
        double var = 0;
        for (size_t i = 0; i < n_traj; i++) {
            const double d = series[i].fq[t] - mean;
            var += d * d;
        }
        stats.mean_fq[t] = mean;
        stats.stderr_fq[t] = n_traj > 1 ? std::sqrt(var / (count - 1) / count) : 0.0;
        stats.jump_rate[t] = outcomes ? static_cast<double>(jumps) / static_cast<double>(outcomes) : 0.0;
        if (!stats.mean_convergence_step && mean >= threshold) {
            stats.mean_convergence_step = t + 1;
        }
    }
    std::vector<std::optional<double>> phases;
    phases.reserve(n_traj);
    for (size_t i = 0; i < n_traj; i++) {
        stats.final_fq.push_back(finals[i].fq);
        stats.final_phase.push_back(finals[i].phase);
        stats.steps_executed.push_back(finals[i].steps);
        stats.converged.push_back(finals[i].converged);
        stats.convergence_step.push_back(series[i].convergence_step);
        phases.push_back(finals[i].phase);
    }
    if (std::any_of(phases.begin(), phases.end(), [](const auto &p) { return p.has_value(); })) {
        stats.phase = phase_statistics(phases, options.phase_bins);
    }
    stats.records = std::move(kept);
    return stats;
}

ScalingFit qsteer::fit_log_scaling(std::span<const double> n_values, std::span<const double> steps) {
    if (n_values.size() != steps.size()) {
        throw std::invalid_argument("fit inputs differ in length");
    }
    std::set<double> distinct(n_values.begin(), n_values.end());
    if (distinct.size() < 3) {
        throw std::invalid_argument("log fit needs at least three distinct N");
    }
    const double m = static_cast<double>(n_values.size());
    double sx = 0, sy = 0;
    for (size_t k = 0; k < n_values.size(); k++) {
        if (!(n_values[k] > 0)) {
            throw std::invalid_argument("log fit needs positive N");
        }
        sx += std::log(n_values[k]);
        sy += steps[k];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (size_t k = 0; k < n_values.size(); k++) {
        const double dx = std::log(n_values[k]) - mx;
        sxx += dx * dx;
        sxy += dx * (steps[k] - my);
    }
    ScalingFit fit;
    fit.b = sxy / sxx;
    fit.a = my - fit.b * mx;
    double ss = 0;
    for (size_t k = 0; k < n_values.size(); k++) {
        const double r = steps[k] - (fit.a + fit.b * std::log(n_values[k]));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

ScalingFit qsteer::convergence_scaling(std::span<const ScalingPoint> points, std::vector<std::string> *warnings) {
    std::vector<double> ns, steps;
    for (const auto &p : points) {
        if (!p.steps) {
            if (warnings) {
                warnings->push_back("N=" + std::to_string(p.n_qubits) + " did not converge; excluded from fit");
            }
            continue;
        }
        ns.push_back(static_cast<double>(p.n_qubits));
        steps.push_back(*p.steps);
    }
    return fit_log_scaling(ns, steps);
}
