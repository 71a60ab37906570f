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

#ifndef _QSTEER_WEAK_MEASUREMENT_H
#define _QSTEER_WEAK_MEASUREMENT_H

#include <array>
#include <string>

#include "qsteer/rng.h"
#include "qsteer/state_vector.h"

namespace qsteer {

/// Detector-side Pauli of a steering operator. Only x and z couplings exist.
enum class DetectorAxis : uint8_t { X = 0, Z = 2 };

/// K_i = (alpha_i, beta_i): the steering operator J sigma_i^alpha tau_i^beta.
struct Steering {
    PauliAxis alpha;
    DetectorAxis beta;
    bool operator==(const Steering &) const = default;
};

/// Steering choice for both qubits of a pair.
struct CouplingChoice {
    Steering first;
    Steering second;
    bool operator==(const CouplingChoice &) const = default;
};

/// "ZX,ZX" means alpha=Z, beta=X on both qubits.
std::string to_string(const CouplingChoice &choice);
CouplingChoice parse_coupling(const std::string &text);

struct PairCoupling {
    QubitPair pair;
    CouplingChoice choice;
};

/// Bell outcome |Phi_{xi, eta}>: xi is parity, eta = +1/-1 exchange symmetry.
struct BellOutcome {
    int xi;
    int eta;

    /// 0: (0,+), 1: (0,-), 2: (1,+), 3: (1,-).
    size_t index() const {
        return static_cast<size_t>(2 * xi + (eta > 0 ? 0 : 1));
    }
    static BellOutcome from_index(size_t index) {
        return {static_cast<int>(index / 2), index % 2 == 0 ? +1 : -1};
    }
    bool operator==(const BellOutcome &) const = default;
};

struct StepParams {
    double j_coupling = 1.0;
    double dt = 0.2;

    double theta() const {
        return j_coupling * dt;
    }
    /// Throws unless dt > 0 and both values are finite.
    void validate() const;
    /// J dt <= 0.5. Larger values are allowed but leave the weak regime.
    bool weak_regime() const {
        return theta() <= 0.5;
    }
};

/// Pair operator c_I + c_f sigma_first^alpha_f + c_s sigma_second^alpha_s
/// + c_fs sigma_first^alpha_f sigma_second^alpha_s.
struct PairOperator {
    std::array<Complex, 4> coeffs{};

    bool is_zero() const;
    Matrix4c local_matrix(PauliAxis alpha_first, PauliAxis alpha_second) const;
};

/// u + v sigma^alpha acting on the system qubit.
struct BranchOperator {
    Complex identity;
    Complex pauli;
};

/// <d| exp(-i theta sigma^alpha tau^beta) |0>_d for detector states d = 0, 1.
std::array<BranchOperator, 2> detector_branches(const Steering &steering, double theta);

/// The four measurement operators M_{xi,eta} = <Phi_{xi,eta}| e^{-i dt H_K} |00>_d.
struct KrausSet {
    PairCoupling coupling;
    double theta = 0;
    std::array<PairOperator, 4> ops;

    const PairOperator &op(BellOutcome outcome) const {
        return ops[outcome.index()];
    }
    Matrix4c local(size_t index) const {
        return ops[index].local_matrix(coupling.choice.first.alpha, coupling.choice.second.alpha);
    }
};

KrausSet kraus_set(const PairCoupling &coupling, const StepParams &params);

/// p_{xi,eta} = ||M_{xi,eta} psi||^2 in BellOutcome::index order.
std::array<double, 4> outcome_probabilities(const StateVector &state, const KrausSet &kraus);

struct MeasurementResult {
    StateVector state;
    BellOutcome outcome;
};

/// Draws an outcome index with one uniform from rng; outcomes of zero
/// probability are never returned. Probabilities need not be normalized.
BellOutcome sample_outcome(const std::array<double, 4> &probabilities, Rng &rng);

/// Draws an outcome with outcome_probabilities and returns the normalized
/// post-measurement state. Consumes exactly one uniform from rng.
MeasurementResult sample_and_apply(const StateVector &state, const KrausSet &kraus, Rng &rng);

/// Unnormalized M_{xi,eta}|psi>.
StateVector apply_kraus(const StateVector &state, const KrausSet &kraus, BellOutcome outcome);

/// Jump operators c_{eta} = -i J sqrt(dt) (eta d_{beta_f,x} sigma_f + d_{beta_s,x} sigma_s);
/// ops[0] is eta = +1, ops[1] is eta = -1.
struct JumpOperators {
    PairCoupling coupling;
    std::array<PairOperator, 2> ops;

    Matrix4c local(int eta) const {
        return ops[eta > 0 ? 0 : 1].local_matrix(coupling.choice.first.alpha, coupling.choice.second.alpha);
    }
};

JumpOperators jump_operators(const PairCoupling &coupling, const StepParams &params);

/// <c_eta^dag c_eta> for eta = +1, -1 from the pair Gram matrix of the state.
std::array<double, 2> jump_rates(const Matrix4c &gram, const PairCoupling &coupling, const StepParams &params);

/// Outcome probabilities of the first-order SSE in outcome index order:
/// p_{0,eta} = (1 - dt <c_eta^dag c_eta>)/2, p_{1,eta} = dt <c_eta^dag c_eta>/2.
std::array<double, 4> sse_outcome_probabilities(
    const Matrix4c &gram, const PairCoupling &coupling, const StepParams &params);

/// Pair-local operator 1 + dPsi of one first-order SSE step (not normalized);
/// mean_cdc is <c_eta^dag c_eta> on the current state.
Matrix4c sse_step_matrix(const PairCoupling &coupling, const StepParams &params, BellOutcome outcome, double mean_cdc);

/// One step of the first-order jump SSE followed by renormalization.
/// Throws InvalidOutcome for xi = 1 when <c_eta^dag c_eta> vanishes.
StateVector sse_step_first_order(
    const StateVector &state, const PairCoupling &coupling, const StepParams &params, BellOutcome outcome);

}  // namespace qsteer

#endif
