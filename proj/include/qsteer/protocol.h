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

#ifndef _QSTEER_PROTOCOL_H
#define _QSTEER_PROTOCOL_H

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qsteer/decision.h"
#include "qsteer/observable.h"
#include "qsteer/rng.h"
#include "qsteer/state_vector.h"
#include "qsteer/weak_measurement.h"

namespace qsteer {

enum class PairingMode {
    /// Ring pairs (i, i+1 mod n) with a random offset each step.
    NearestNeighborRandom,
    /// Ring pairs starting at even sites on even steps and odd sites on odd steps.
    NearestNeighborAlternating,
    /// Uniformly random perfect matching of all qubits each step.
    FullyConnectedRandom,
};

std::string to_string(PairingMode mode);
PairingMode parse_pairing_mode(const std::string &text);

/// Run all max_steps steps.
struct FixedSteps {};
/// Stop once F_Q >= fraction * N^2.
struct QfiThreshold {
    double fraction = 0.9;
};
/// Stop once the state has a GHZ phase within halfwidth of center and
/// F_Q >= min_fraction * N^2.
struct PhaseWindow {
    double center = 0;
    double halfwidth = 0.1;
    double min_fraction = 0.9;
};
using Termination = std::variant<FixedSteps, QfiThreshold, PhaseWindow>;

enum class UpdateOrder {
    /// Each pair decides on the state already updated by earlier pairs of the step.
    Sequential,
    /// All pairs decide on the state at the start of the step, then measure.
    Frozen,
};

/// How the tracked state is advanced once an outcome is drawn.
enum class Propagation {
    /// Exact Kraus operators with Born-rule outcome probabilities.
    Kraus,
    /// First-order jump stochastic Schroedinger equation with its a priori
    /// outcome probabilities.
    Sse,
};

std::string to_string(Propagation propagation);
Propagation parse_propagation(const std::string &text);

struct ProtocolConfig {
    size_t n_qubits = 2;
    StepParams params;
    CostMode mode;
    PairingMode pairing = PairingMode::NearestNeighborRandom;
    DecisionMethod decision_method = DecisionMethod::Correlator;
    size_t max_steps = 500;
    Termination termination = FixedSteps{};
    uint64_t seed = 1;
    UpdateOrder update_order = UpdateOrder::Sequential;
    Propagation propagation = Propagation::Sse;
    EstimatorOptions estimator;
    /// Record the GHZ phase (in the eigenbasis of the observable on qubit 0)
    /// after every step.
    bool track_phase = false;

    void validate() const;
};

struct Pairing {
    std::vector<QubitPair> pairs;
    std::optional<size_t> idle;
};

Pairing build_pairing(size_t num_qubits, PairingMode mode, size_t step_index, Rng &rng);

struct PairLog {
    QubitPair pair;
    CouplingChoice coupling;
    BellOutcome outcome;
};

struct StepLog {
    std::vector<PairLog> pairs;
    /// F_Q after the step.
    double fq = 0;
    /// Number of Bell measurements and of xi = 1 outcomes in the step.
    size_t outcomes = 0;
    size_t jumps = 0;
    std::optional<double> phase;
};

struct TrajectoryRecord {
    std::vector<StepLog> steps;
    double final_fq = 0;
    std::optional<double> final_phase;
    size_t steps_executed = 0;
    /// False when a threshold or window policy ran out of steps.
    bool converged = true;
    StateVector final_state{1};
};

/// Basis in which GHZ phases of a run are measured.
SingleQubitBasis phase_basis(const CollectiveObservable &obs);

/// Holds the tracked state together with O|psi>, which is updated
/// alongside the state and resynchronized periodically.
class SteeringEngine {
   public:
    SteeringEngine(StateVector initial, const CollectiveObservable &obs, const ProtocolConfig &config);

    const StateVector &state() const {
        return psi_;
    }
    double fq() const;
    /// One protocol step over the pairing for step_index.
    StepLog step(size_t step_index, Rng &rng);

   private:
    struct Decision {
        CouplingChoice coupling;
        Matrix4c gram;
    };
    Decision decide(QubitPair pair, Rng &rng) const;
    BellOutcome measure(QubitPair pair, const CouplingChoice &coupling, const Matrix4c &gram, Rng &rng);
    void resync();

    StateVector psi_;
    std::vector<Complex> chi_;
    const CollectiveObservable &obs_;
    ProtocolConfig config_;
    size_t updates_since_sync_ = 0;
};

/// Advances the state by one step and returns it with the step log.
std::pair<StateVector, StepLog> protocol_step(
    const StateVector &state, const CollectiveObservable &obs, const ProtocolConfig &config, size_t step_index, Rng &rng);

/// One trajectory from |0...0>, advanced a step at a time until the
/// termination policy is met or max_steps is reached.
class TrajectoryRunner {
   public:
    /// keep_steps = false drops the per-step logs from the final record.
    TrajectoryRunner(const ProtocolConfig &config, const CollectiveObservable &obs, Rng rng, bool keep_steps = true);

    bool finished() const {
        return finished_;
    }
    /// Advances one step. Must not be called once finished.
    const StepLog &step();
    const StateVector &state() const {
        return engine_.state();
    }
    size_t steps_executed() const {
        return steps_executed_;
    }
    TrajectoryRecord finish();

   private:
    ProtocolConfig config_;
    const CollectiveObservable &obs_;
    SteeringEngine engine_;
    Rng rng_;
    SingleQubitBasis basis_;
    bool keep_steps_;
    bool finished_ = false;
    bool converged_;
    size_t steps_executed_ = 0;
    StepLog last_;
    std::vector<StepLog> steps_;
};

TrajectoryRecord run_trajectory(const ProtocolConfig &config, const CollectiveObservable &obs, Rng rng);
/// Same, with the stream seeded from config.seed.
TrajectoryRecord run_trajectory(const ProtocolConfig &config, const CollectiveObservable &obs);

/// Whether a termination policy is satisfied by the given state.
bool termination_met(
    const Termination &termination, const StateVector &state, double fq, const SingleQubitBasis &basis);

}  // namespace qsteer

#endif
