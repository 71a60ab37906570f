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

#ifndef _QSTEER_DECISION_H
#define _QSTEER_DECISION_H

#include <array>
#include <span>
#include <vector>

#include "qsteer/observable.h"
#include "qsteer/rng.h"
#include "qsteer/state_vector.h"
#include "qsteer/weak_measurement.h"

namespace qsteer {

constexpr size_t NUM_COUPLINGS = 36;
constexpr double TIE_TOLERANCE = 1e-12;

/// Cost function of the feedback policy. Scores are always "larger is better".
struct CostMode {
    enum class Kind { MaximizeQfi, TargetQfi };
    Kind kind = Kind::MaximizeQfi;
    double f_star = 0;

    static CostMode maximize() {
        return {};
    }
    static CostMode target(double f_star);
};

enum class DecisionMethod { Exact, Correlator };

struct DecisionReport {
    std::array<double, NUM_COUPLINGS> scores{};
    size_t chosen_index = 0;
    CouplingChoice chosen{};
    /// Best minus second-best score (zero under a tie).
    double gap = 0;
    size_t tie_count = 1;
    DecisionMethod method = DecisionMethod::Exact;
};

/// alpha in {x,y,z} times beta in {x,z} on each qubit, first-qubit major.
const std::array<CouplingChoice, NUM_COUPLINGS> &coupling_family();
/// The six single-qubit steering options in family order.
const std::array<Steering, 6> &steering_options();

/// Reference scorer: enumerates the four outcomes, applies each Kraus
/// operator to a copy of the state and evaluates the QFI of the result.
/// MaximizeQfi: sum_o p_o F(post_o) - F(pre).
/// TargetQfi: -(sum_o p_o |F(post_o) - F*| - |F(pre) - F*|).
double expected_cost_change_exact(
    const StateVector &state,
    const CollectiveObservable &obs,
    const PairCoupling &coupling,
    const StepParams &params,
    const CostMode &mode);

/// Second moments of the state on a qubit pair, sufficient to evaluate the
/// exact outcome-averaged cost of every coupling without touching the full
/// register again. With phi = O_rest psi (the observable restricted to the
/// qubits outside the pair), g[0] = Gram(psi, psi), g[1] = Gram(psi, phi),
/// g[2] = Gram(phi, phi) in the pair_gram convention.
struct PairMoments {
    QubitPair pair;
    std::array<Matrix4c, 3> g;
    /// s . sigma on the two pair qubits.
    Matrix2c obs_first;
    Matrix2c obs_second;
};

/// obs_psi must equal apply_observable(state, obs).
PairMoments pair_moments(
    const StateVector &state, std::span<const Complex> obs_psi, const CollectiveObservable &obs, QubitPair pair);

/// QFI of the state the moments were taken from.
double moments_qfi(const PairMoments &m);

/// Exact scores of all couplings in family order; same values as
/// expected_cost_change_exact up to rounding.
std::array<double, NUM_COUPLINGS> exact_scores(const PairMoments &m, const StepParams &params, const CostMode &mode);

struct EstimatorOptions {
    /// Multiplies the measurement rate Gamma = J^2 dt. Only for sensitivity
    /// checks; 1 is the physical value.
    double gamma_scale = 1.0;
};

/// The correlator data the estimator reads for one pair.
struct PairCorrelators {
    QubitPair pair{0, 1};
    /// Bloch vectors of pair.first and pair.second.
    std::array<std::array<double, 3>, 2> bloch{};
    /// field[i][g] = sum_{l not in {q}} sum_nu Q_{q l}^{g nu} s_l^nu for q the
    /// i-th pair member.
    std::array<std::array<double, 3>, 2> field{};
    /// Q_{first second}^{a b}.
    std::array<std::array<double, 3>, 3> pair_corr{};
    /// <sum_q s_q . sigma_q>.
    double mean = 0;
    /// F_Q of the state.
    double fq = 0;
};

PairCorrelators pair_correlators(const Correlators &corr, const CollectiveObservable &obs, QubitPair pair);

/// Same data from the pair Gram matrices of psi with itself and with O psi,
/// with mean = <psi|O|psi> (two passes over the state instead of one per
/// correlator pair).
/// fq is only needed by the TargetQfi proxy.
PairCorrelators pair_correlators(
    const Matrix4c &gram,
    const Matrix4c &cross_gram,
    double mean,
    const CollectiveObservable &obs,
    QubitPair pair,
    double fq = 0);

/// Measurement-averaged QFI change to leading order in the measurement
/// strength, from one- and two-body correlators only: first-order drift of
/// <O^2> and <O> plus the jump-induced variance term.
double expected_qfi_change_correlator(
    const PairCorrelators &corr,
    const CollectiveObservable &obs,
    const CouplingChoice &choice,
    const StepParams &params,
    const EstimatorOptions &options = {});
double expected_qfi_change_correlator(
    const Correlators &corr,
    const CollectiveObservable &obs,
    const PairCoupling &coupling,
    const StepParams &params,
    const EstimatorOptions &options = {});

/// Correlator scores of all couplings. TargetQfi uses
/// -(|F + <dF> - F*| - |F - F*|) as its proxy.
std::array<double, NUM_COUPLINGS> correlator_scores(
    const Correlators &corr,
    const CollectiveObservable &obs,
    QubitPair pair,
    const StepParams &params,
    const CostMode &mode,
    const EstimatorOptions &options = {});
std::array<double, NUM_COUPLINGS> correlator_scores(
    const PairCorrelators &corr,
    const CollectiveObservable &obs,
    const StepParams &params,
    const CostMode &mode,
    const EstimatorOptions &options = {});

/// Index of the best score; scores within tie_tolerance of the best are
/// tied and one of them is drawn uniformly from rng (no draw without a tie).
size_t select_best(std::span<const double> scores, Rng &rng, double tie_tolerance = TIE_TOLERANCE, size_t *tie_count = nullptr);

DecisionReport report_from_scores(const std::array<double, NUM_COUPLINGS> &scores, DecisionMethod method, Rng &rng);

DecisionReport choose_coupling(
    const StateVector &state,
    const CollectiveObservable &obs,
    QubitPair pair,
    const StepParams &params,
    const CostMode &mode,
    DecisionMethod method,
    Rng &rng,
    const EstimatorOptions &options = {});

}  // namespace qsteer

#endif
