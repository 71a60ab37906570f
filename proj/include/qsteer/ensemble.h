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

#ifndef _QSTEER_ENSEMBLE_H
#define _QSTEER_ENSEMBLE_H

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsteer/errors.h"
#include "qsteer/observable.h"
#include "qsteer/protocol.h"

namespace qsteer {

constexpr size_t DEFAULT_PURITY_LIMIT = 10;
constexpr size_t DEFAULT_PHASE_BINS = 20;

struct EnsembleOptions {
    size_t n_traj = 100;
    size_t workers = 1;
    /// Accumulate the trajectory-averaged density matrix at every step.
    bool purity = false;
    size_t purity_limit = DEFAULT_PURITY_LIMIT;
    size_t phase_bins = DEFAULT_PHASE_BINS;
    /// Fraction of N^2 defining the per-trajectory convergence step.
    double convergence_fraction = 0.9;
    /// Keep the full records of the first this-many trajectories.
    size_t keep_records = 0;
};

struct PhaseStatistics {
    size_t bins = 0;
    std::vector<double> centers;
    std::vector<size_t> counts;
    size_t on_manifold = 0;
    size_t off_manifold = 0;
    /// Pearson statistic against the uniform distribution and its p-value.
    double chi_square = 0;
    double p_value = 1;
    /// max_k |count_k - mean| / sqrt(mean).
    double max_deviation_sigma = 0;
    /// |mean of e^{i phi}|, 1 when all phases coincide.
    double resultant_length = 0;
    /// All on-manifold samples fell into a single bin.
    bool concentrated = false;
};

/// Histogram of the given phases over (-pi, pi]; nullopt entries are off
/// the manifold and only counted. Throws std::invalid_argument for
/// bins < 2 and std::domain_error when no phase is on the manifold.
PhaseStatistics phase_statistics(std::span<const std::optional<double>> phases, size_t bins);
PhaseStatistics phase_statistics(
    std::span<const StateVector> states,
    const SingleQubitBasis &basis,
    size_t bins,
    double overlap_floor = DEFAULT_OVERLAP_FLOOR);

struct EnsembleStats {
    size_t n_traj = 0;
    size_t n_qubits = 0;
    /// Per step 1..max_steps. Trajectories that stopped early keep their
    /// last value.
    std::vector<double> mean_fq;
    std::vector<double> stderr_fq;
    /// Fraction of xi = 1 outcomes among all outcomes drawn in the step.
    std::vector<double> jump_rate;
    /// Tr(rho^2) of the trajectory-averaged state per step (purity mode only).
    std::vector<double> purity;
    /// Trajectory-averaged density matrix after the last step (purity mode only).
    std::optional<Eigen::MatrixXcd> avg_density_matrix;
    std::vector<double> final_fq;
    std::vector<std::optional<double>> final_phase;
    std::vector<size_t> steps_executed;
    std::vector<bool> converged;
    /// First step (1-based) at which each trajectory reached the
    /// convergence fraction of N^2.
    std::vector<std::optional<size_t>> convergence_step;
    /// First step at which mean_fq reached the convergence fraction of N^2.
    std::optional<size_t> mean_convergence_step;
    std::optional<PhaseStatistics> phase;
    std::vector<TrajectoryRecord> records;
};

/// Runs n_traj trajectories; trajectory i draws from Rng::child(config.seed, i).
/// Results do not depend on the worker count. Throws CapacityError when
/// purity is requested above the purity limit.
EnsembleStats run_ensemble(const ProtocolConfig &config, const CollectiveObservable &obs, const EnsembleOptions &options);

/// Mean of |psi_i><psi_i|.
Eigen::MatrixXcd average_density_matrix(std::span<const StateVector> states);
/// Tr(rho^2) for a Hermitian rho.
double purity(const Eigen::MatrixXcd &rho);
std::vector<double> purity_series(std::span<const Eigen::MatrixXcd> rhos, size_t purity_limit = DEFAULT_PURITY_LIMIT);

struct ScalingFit {
    double a = 0;
    double b = 0;
    /// Root-mean-square residual of the fit.
    double residual = 0;
};

/// Least-squares fit of steps = a + b ln n. Needs at least three distinct n.
ScalingFit fit_log_scaling(std::span<const double> n_values, std::span<const double> steps);

struct ScalingPoint {
    size_t n_qubits = 0;
    /// Mean convergence step; nullopt when the ensemble did not converge.
    std::optional<double> steps;
};

/// Fits the converged points; unconverged ones are dropped and reported in
/// warnings.
ScalingFit convergence_scaling(std::span<const ScalingPoint> points, std::vector<std::string> *warnings = nullptr);

}  // namespace qsteer

#endif
