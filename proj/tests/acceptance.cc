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

// Acceptance run: one PASS/FAIL line per criterion; the exit code is
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "qsteer/cli/commands.h"
#include "qsteer/decision.h"
#include "qsteer/ensemble.h"
#include "qsteer/oracle/dense_oracle.h"
#include "qsteer/weak_measurement.h"

using namespace qsteer;

namespace {

// Pinned tolerances.
constexpr double C1_FINAL_FRACTION = 0.85;
constexpr double C1_STEP300_FRACTION = 0.8;
constexpr double C2_SIGMAS = 3.0;
constexpr double C3_HALF_BAND = 1.5;
constexpr size_t C3_FROM_STEP = 150;
constexpr double C4_MAX_SIGMA = 5.0;
constexpr double C5_LOW = 0.40;
constexpr double C5_HIGH = 0.55;
constexpr double C6_SIGMAS = 3.0;
constexpr size_t C6_MAX_STEPS = 500;
constexpr size_t C6_BOOTSTRAP = 500;
constexpr double C7_TOLERANCE = 1e-10;
constexpr double C8_LOW = 3.2;
constexpr double C8_HIGH = 4.8;
constexpr double C9_QFI_TOLERANCE = 1e-8;
constexpr double C9_QUADRUPLE_TOLERANCE = 1e-10;

struct Outcome {
    bool passed;
    std::string detail;
};

size_t worker_count() {
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

ProtocolConfig base_config(size_t n, double jdt, size_t steps, uint64_t seed) {
    ProtocolConfig c;
    c.n_qubits = n;
    c.params = {1.0, jdt};
    c.max_steps = steps;
    c.seed = seed;
    return c;
}

EnsembleStats ensemble(const ProtocolConfig &config, size_t n_traj, bool purity = false, size_t bins = DEFAULT_PHASE_BINS) {
    EnsembleOptions o;
    o.n_traj = n_traj;
    o.workers = worker_count();
    o.purity = purity;
    o.phase_bins = bins;
    return run_ensemble(config, default_observable(config.n_qubits), o);
}

double mean(const std::vector<double> &v) {
    double s = 0;
    for (double x : v) {
        s += x;
    }
    return s / v.size();
}

double standard_error(const std::vector<double> &v) {
    double m = mean(v), s = 0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / (v.size() - 1) / v.size());
}

Outcome ghz_convergence() {
    const size_t n = 5;
    EnsembleStats s = ensemble(base_config(n, 0.2, 500, 1001), 100);
    double bound = n * n;
    double final_fraction = s.mean_fq.back() / bound;
    double step300_fraction = s.mean_fq[299] / bound;
    return {final_fraction >= C1_FINAL_FRACTION && step300_fraction >= C1_STEP300_FRACTION,
            "final=" + fmt(final_fraction) + " N^2, step 300=" + fmt(step300_fraction) + " N^2"};
}

Outcome smaller_step_is_more_accurate() {
    const size_t n_traj = 200;
    // Paired seeds: trajectory i uses the same stream at both step sizes.
    EnsembleStats fine = ensemble(base_config(5, 0.1, 500, 1002), n_traj);
    EnsembleStats coarse = ensemble(base_config(5, 0.2, 500, 1002), n_traj);
    std::vector<double> diff(n_traj);
    for (size_t i = 0; i < n_traj; i++) {
        diff[i] = fine.final_fq[i] - coarse.final_fq[i];
    }
    double d = mean(diff), se = standard_error(diff);
    return {d > C2_SIGMAS * se, "F(0.1)=" + fmt(mean(fine.final_fq)) + ", F(0.2)=" + fmt(mean(coarse.final_fq)) +
                                    ", difference=" + fmt(d / se) + " sigma"};
}

Outcome dicke_targeting() {
    ProtocolConfig c = base_config(4, 0.2, 500, 1003);
    double target = dicke_target_qfi(4, 2);
    c.mode = CostMode::target(target);
    EnsembleStats s = ensemble(c, 500);
    double worst = 0;
    for (size_t t = C3_FROM_STEP; t <= s.mean_fq.size(); t++) {
        worst = std::max(worst, std::abs(s.mean_fq[t - 1] - target));
    }
    return {worst <= C3_HALF_BAND && target == 12.0,
            "target=" + fmt(target) + ", max |mean-target| from step " + std::to_string(C3_FROM_STEP) + "=" + fmt(worst)};
}

Outcome manifold_coverage() {
    EnsembleStats s = ensemble(base_config(5, 0.2, 500, 1004), 1000, false, 10);
    if (!s.phase) {
        return {false, "no on-manifold final states"};
    }
    return {s.phase->max_deviation_sigma <= C4_MAX_SIGMA,
            "on-manifold=" + std::to_string(s.phase->on_manifold) + ", max deviation=" +
                fmt(s.phase->max_deviation_sigma) + " sigma, chi-square p=" + fmt(s.phase->p_value)};
}

Outcome purity_asymptote() {
    EnsembleStats s = ensemble(base_config(3, 0.1, 1500, 1005), 2000, true);
    double final_purity = s.purity.back();
    double dip = *std::min_element(s.purity.begin(), s.purity.end() - 1);
    return {final_purity >= C5_LOW && final_purity <= C5_HIGH && dip < C5_LOW,
            "final=" + fmt(final_purity) + ", earlier minimum=" + fmt(dip)};
}

/// First step (1-based) at which the mean of the selected curves reaches
/// level; curves.front().size() + 1 when it never does.
size_t mean_crossing(const std::vector<std::vector<double>> &curves, const std::vector<size_t> &pick, double level) {
    size_t steps = curves.front().size();
    for (size_t t = 0; t < steps; t++) {
        double m = 0;
        for (size_t i : pick) {
            m += curves[i][t];
        }
        if (m / pick.size() >= level) {
            return t + 1;
        }
    }
    return steps + 1;
}

struct CrossingEstimate {
    double step = 0;
    double sigma = 0;
    size_t trapped = 0;
    double censored_mean = 0;
};

/// Crossing step of the ensemble-mean QFI curve with a bootstrap standard
/// deviation over trajectories, plus the per-trajectory first passage mean
/// with trajectories that never reach the level counted as max_steps + 1.
CrossingEstimate crossing_estimate(PairingMode mode) {
    const size_t n = 8, n_traj = 200;
    ProtocolConfig c = base_config(n, 0.2, C6_MAX_STEPS, 1006);
    c.pairing = mode;
    EnsembleOptions o;
    o.n_traj = n_traj;
    o.workers = worker_count();
    o.keep_records = n_traj;
    EnsembleStats s = run_ensemble(c, default_observable(n), o);
    double level = 0.9 * n * n;
    std::vector<std::vector<double>> curves(n_traj);
    CrossingEstimate e;
    for (size_t i = 0; i < n_traj; i++) {
        for (const auto &step : s.records[i].steps) {
            curves[i].push_back(step.fq);
        }
        e.trapped += !s.convergence_step[i];
        e.censored_mean += static_cast<double>(s.convergence_step[i].value_or(C6_MAX_STEPS + 1)) / n_traj;
    }
    std::vector<size_t> all(n_traj);
    std::iota(all.begin(), all.end(), 0);
    e.step = static_cast<double>(mean_crossing(curves, all, level));
    Rng rng(1016);
    std::vector<double> replicas;
    std::vector<size_t> pick(n_traj);
    for (size_t b = 0; b < C6_BOOTSTRAP; b++) {
        for (auto &k : pick) {
            k = rng.below(n_traj);
        }
        replicas.push_back(static_cast<double>(mean_crossing(curves, pick, level)));
    }
    e.sigma = standard_error(replicas) * std::sqrt(static_cast<double>(replicas.size()));
    return e;
}

Outcome full_connectivity_is_faster() {
    CrossingEstimate full = crossing_estimate(PairingMode::FullyConnectedRandom);
    CrossingEstimate nn = crossing_estimate(PairingMode::NearestNeighborRandom);
    double gap = nn.step - full.step;
    double sigma = std::hypot(full.sigma, nn.sigma);
    return {gap > C6_SIGMAS * sigma,
            "mean-curve crossing full=" + fmt(full.step) + ", nearest-neighbor=" + fmt(nn.step) + ", gap=" +
                fmt(gap / sigma) + " sigma; per-trajectory first passage with censoring full=" + fmt(full.censored_mean) +
                ", nearest-neighbor=" + fmt(nn.censored_mean) + ", never reached " + std::to_string(full.trapped) + "/" +
                std::to_string(nn.trapped)};
}

Outcome oracle_equivalence() {
    Rng rng(1007);
    StepParams params{1.0, 0.2};
    double worst = 0;
    size_t cases = 0;
    for (size_t t = 0; t < 20; t++) {
        StateVector s = random_state(4, rng);
        for (size_t a = 0; a < 4; a++) {
            for (size_t b = 0; b < 4; b++) {
                if (a == b) {
                    continue;
                }
                for (const auto &c : coupling_family()) {
                    PairCoupling pc{{a, b}, c};
                    KrausSet ks = kraus_set(pc, params);
                    for (size_t o = 0; o < 4; o++) {
                        BellOutcome outcome = BellOutcome::from_index(o);
                        StateVector fast = apply_kraus(s, ks, outcome);
                        StateVector dense = oracle::detector_step(s, pc, params, outcome);
                        for (size_t i = 0; i < fast.dim(); i++) {
                            worst = std::max(worst, std::abs(fast[i] - dense[i]));
                        }
                        cases++;
                    }
                }
            }
        }
    }
    return {worst <= C7_TOLERANCE, std::to_string(cases) + " cases, max amplitude deviation=" + fmt(worst)};
}

Outcome estimator_order() {
    auto discrepancy = [](double jdt) {
        Rng rng(1008);
        CollectiveObservable obs = default_observable(4);
        double total = 0;
        for (size_t d = 0; d < 50; d++) {
            StateVector s = random_state(4, rng);
            size_t a = rng.below(4), b = (a + 1 + rng.below(3)) % 4;
            PairCoupling pc{{a, b}, coupling_family()[rng.below(NUM_COUPLINGS)]};
            StepParams p{1.0, jdt};
            double exact = expected_cost_change_exact(s, obs, pc, p, CostMode::maximize());
            double estimate = expected_qfi_change_correlator(correlators(s), obs, pc, p);
            total += std::abs(exact - estimate);
        }
        return total / 50;
    };
    double ratio = discrepancy(0.1) / discrepancy(0.05);
    return {ratio >= C8_LOW && ratio <= C8_HIGH, "ratio=" + fmt(ratio)};
}

Outcome golden_values() {
    double ghz_err = 0, dicke_err = 0;
    for (size_t n = 2; n <= 8; n++) {
        ghz_err = std::max(
            ghz_err, std::abs(qfi(ghz_state(n, 0.7, SingleQubitBasis::rotated()), default_observable(n)) - double(n * n)));
        // Dicke states are eigenstates of the collective z component; the
        // closed form refers to a transverse direction.
        for (size_t k = 0; k <= n; k++) {
            double h = n / 2.0 - k;
            double expected = n * n / 2.0 - 2 * h * h + n;
            dicke_err = std::max(dicke_err, std::abs(qfi(dicke_state(n, k), uniform_observable(n, {1, 0, 0})) - expected));
        }
    }
    bool parity = true;
    Rng rng(1009);
    for (size_t t = 0; t < 20; t++) {
        StateVector s = random_state(3, rng);
        for (const auto &c : coupling_family()) {
            if (c.first.beta == DetectorAxis::Z && c.second.beta == DetectorAxis::Z) {
                auto p = outcome_probabilities(s, kraus_set({{0, 2}, c}, {1.0, 0.2}));
                parity &= p[2] == 0.0 && p[3] == 0.0;
            }
        }
    }
    auto quad = outcome_probabilities(basis_state(2, "00"), kraus_set({{0, 1}, parse_coupling("ZX,ZX")}, {1.0, 0.2}));
    // Closed form cos^2(2 theta)/2 at J dt = 0.2, and the quoted digits.
    double exact_first = std::cos(0.4) * std::cos(0.4) / 2;
    double quad_err = std::abs(quad[0] - exact_first) + std::abs(quad[1] - 0.5) +
                      std::abs(quad[2] - (0.5 - exact_first)) + std::abs(quad[3]);
    bool quad_digits = std::abs(quad[0] - 0.4242) < 5e-5 && std::abs(quad[2] - 0.0758) < 5e-5;
    return {ghz_err <= C9_QFI_TOLERANCE && dicke_err <= C9_QFI_TOLERANCE && parity &&
                quad_err <= C9_QUADRUPLE_TOLERANCE && quad_digits,
            "GHZ=" + fmt(ghz_err) + ", Dicke=" + fmt(dicke_err) + ", (Z,Z) jumps=" + (parity ? "0" : "nonzero") +
                ", quadruple=(" + fmt(quad[0]) + ", " + fmt(quad[1]) + ", " + fmt(quad[2]) + ", " + fmt(quad[3]) + ")"};
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    fs::path root = fs::temp_directory_path() / "qsteer_acceptance_determinism";
    fs::remove_all(root);
    cli::RunSpec spec;
    spec.n_qubits = 4;
    spec.steps = 200;
    spec.trajectories = 64;
    spec.seed = 1010;
    spec.purity = true;
    spec.log_trajectories = 8;
    for (size_t workers : {1, 4}) {
        cli::CliOptions o;
        o.out = root / std::to_string(workers);
        o.workers = workers;
        cli::cmd_run(spec, o);
    }
    size_t compared = 0;
    bool identical = true;
    for (const auto &entry : fs::directory_iterator(root / "1")) {
        fs::path other = root / "4" / entry.path().filename();
        identical &= fs::exists(other) && slurp(entry.path()) == slurp(other);
        compared++;
    }
    fs::remove_all(root);
    return {identical && compared == 4, std::to_string(compared) + " files compared, identical=" + (identical ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"ghz_convergence", ghz_convergence},
        {"smaller_step_more_accurate", smaller_step_is_more_accurate},
        {"dicke_targeting", dicke_targeting},
        {"manifold_coverage", manifold_coverage},
        {"purity_asymptote", purity_asymptote},
        {"full_connectivity_faster", full_connectivity_is_faster},
        {"oracle_equivalence", oracle_equivalence},
        {"estimator_order", estimator_order},
        {"golden_values", golden_values},
        {"determinism", determinism},
    };
    size_t failures = 0;
    for (size_t k = 0; k < criteria.size(); k++) {
        auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = criteria[k].second();
        } catch (const std::exception &e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !r.passed;
        std::printf("criterion %zu %s: %s (%s; %.1f s)\n", k + 1, criteria[k].first.c_str(), r.passed ? "PASS" : "FAIL",
                    r.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
