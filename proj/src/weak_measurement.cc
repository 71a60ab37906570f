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

#include "qsteer/weak_measurement.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsteer/errors.h"

using namespace qsteer;

namespace {

void check_pair(const QubitPair &pair, size_t num_qubits) {
    if (pair.first == pair.second) {
        throw std::invalid_argument("steered pair must contain two distinct qubits");
    }
    if (pair.first >= num_qubits || pair.second >= num_qubits) {
        throw std::out_of_range("steered pair outside the register");
    }
}

PairOperator tensor(const BranchOperator &a, const BranchOperator &b) {
    return {{a.identity * b.identity, a.pauli * b.identity, a.identity * b.pauli, a.pauli * b.pauli}};
}

PairOperator combine(const PairOperator &a, const PairOperator &b, double sign) {
    PairOperator out;
    for (size_t k = 0; k < 4; k++) {
        out.coeffs[k] = (a.coeffs[k] + sign * b.coeffs[k]) / std::numbers::sqrt2;
    }
    return out;
}

double expectation(const Matrix4c &op, const Matrix4c &gram) {
    return op.cwiseProduct(gram).sum().real();
}

}  // namespace

std::string qsteer::to_string(const CouplingChoice &choice) {
    auto beta = [](DetectorAxis b) {
        return b == DetectorAxis::X ? 'X' : 'Z';
    };
    std::string out;
    out += axis_name(choice.first.alpha);
    out += beta(choice.first.beta);
    out += ',';
    out += axis_name(choice.second.alpha);
    out += beta(choice.second.beta);
    return out;
}

CouplingChoice qsteer::parse_coupling(const std::string &text) {
    if (text.size() != 5 || text[2] != ',') {
        throw std::invalid_argument("coupling must look like 'ZX,YZ', got '" + text + "'");
    }
    auto beta = [&](char c) {
        if (c == 'X' || c == 'x') {
            return DetectorAxis::X;
        }
        if (c == 'Z' || c == 'z') {
            return DetectorAxis::Z;
        }
        throw std::invalid_argument("detector axis must be X or Z in '" + text + "'");
    };
    return {{parse_axis(text[0]), beta(text[1])}, {parse_axis(text[3]), beta(text[4])}};
}

void StepParams::validate() const {
    if (!std::isfinite(j_coupling) || !std::isfinite(dt) || !(dt > 0)) {
        throw std::invalid_argument("step parameters need finite J and dt > 0");
    }
}

bool PairOperator::is_zero() const {
    for (const auto &c : coeffs) {
        if (c != Complex{0, 0}) {
            return false;
        }
    }
    return true;
}

Matrix4c PairOperator::local_matrix(PauliAxis alpha_first, PauliAxis alpha_second) const {
    const Matrix2c id = Matrix2c::Identity();
    const Matrix2c sf = pauli_matrix(alpha_first);
    const Matrix2c ss = pauli_matrix(alpha_second);
    return coeffs[0] * Matrix4c::Identity() + coeffs[1] * pair_kron(sf, id) + coeffs[2] * pair_kron(id, ss) +
           coeffs[3] * pair_kron(sf, ss);
}

std::array<BranchOperator, 2> qsteer::detector_branches(const Steering &steering, double theta) {
    const double c = std::cos(theta);
    const Complex mis(0, -std::sin(theta));
    // (cos - i sin sigma tau^beta)|0>_d: for beta = z the detector stays in |0>,
    // for beta = x the sigma part flips it to |1>.
    if (steering.beta == DetectorAxis::Z) {
        return {{{c, mis}, {0, 0}}};
    }
    return {{{c, 0}, {0, mis}}};
}

KrausSet qsteer::kraus_set(const PairCoupling &coupling, const StepParams &params) {
    params.validate();
    const double theta = params.theta();
    auto f = detector_branches(coupling.choice.first, theta);
    auto g = detector_branches(coupling.choice.second, theta);

    KrausSet out;
    out.coupling = coupling;
    out.theta = theta;
    // Detector basis |ab>, a = detector of the first qubit.
    // <Phi_{0,eta}| = (<00| + eta <11|)/sqrt2, <Phi_{1,eta}| = (<01| + eta <10|)/sqrt2.
    out.ops[0] = combine(tensor(f[0], g[0]), tensor(f[1], g[1]), +1);
    out.ops[1] = combine(tensor(f[0], g[0]), tensor(f[1], g[1]), -1);
    out.ops[2] = combine(tensor(f[0], g[1]), tensor(f[1], g[0]), +1);
    out.ops[3] = combine(tensor(f[0], g[1]), tensor(f[1], g[0]), -1);
    return out;
}

std::array<double, 4> qsteer::outcome_probabilities(const StateVector &state, const KrausSet &kraus) {
    check_pair(kraus.coupling.pair, state.num_qubits());
    Matrix4c gram = pair_gram(state.num_qubits(), state.amplitudes(), state.amplitudes(), kraus.coupling.pair);
    std::array<double, 4> p{};
    for (size_t k = 0; k < 4; k++) {
        if (kraus.ops[k].is_zero()) {
            continue;
        }
        Matrix4c m = kraus.local(k);
        p[k] = std::max(0.0, expectation(m.adjoint() * m, gram));
    }
    return p;
}

StateVector qsteer::apply_kraus(const StateVector &state, const KrausSet &kraus, BellOutcome outcome) {
    check_pair(kraus.coupling.pair, state.num_qubits());
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    apply_pair_matrix(amps, state.num_qubits(), kraus.coupling.pair, kraus.local(outcome.index()));
    return StateVector(state.num_qubits(), std::move(amps), false);
}

BellOutcome qsteer::sample_outcome(const std::array<double, 4> &probabilities, Rng &rng) {
    const auto &p = probabilities;
    double total = p[0] + p[1] + p[2] + p[3];
    if (!(total > 1e-15)) {
        throw std::runtime_error("all Bell outcome probabilities vanish");
    }
    double u = rng.uniform() * total;
    size_t chosen = 4;
    double cum = 0;
    for (size_t k = 0; k < 4; k++) {
        if (p[k] <= 0) {
            continue;
        }
        cum += p[k];
        chosen = k;
        if (u < cum) {
            break;
        }
    }
    return BellOutcome::from_index(chosen);
}

MeasurementResult qsteer::sample_and_apply(const StateVector &state, const KrausSet &kraus, Rng &rng) {
    BellOutcome outcome = sample_outcome(outcome_probabilities(state, kraus), rng);
    StateVector post = apply_kraus(state, kraus, outcome);
    post.normalize();
    return {std::move(post), outcome};
}

JumpOperators qsteer::jump_operators(const PairCoupling &coupling, const StepParams &params) {
    params.validate();
    const Complex scale = Complex(0, -1) * params.j_coupling * std::sqrt(params.dt);
    const double a = coupling.choice.first.beta == DetectorAxis::X ? 1 : 0;
    const double b = coupling.choice.second.beta == DetectorAxis::X ? 1 : 0;
    JumpOperators out;
    out.coupling = coupling;
    out.ops[0].coeffs = {0, scale * a, scale * b, 0};
    out.ops[1].coeffs = {0, -scale * a, scale * b, 0};
    return out;
}

Matrix4c qsteer::sse_step_matrix(
    const PairCoupling &coupling, const StepParams &params, BellOutcome outcome, double mean_cdc) {
    params.validate();
    const auto &k = coupling.choice;
    PairOperator h0;
    h0.coeffs = {
        0,
        k.first.beta == DetectorAxis::Z ? params.j_coupling : 0.0,
        k.second.beta == DetectorAxis::Z ? params.j_coupling : 0.0,
        0};
    const Matrix4c h = h0.local_matrix(k.first.alpha, k.second.alpha);
    const Matrix4c c = jump_operators(coupling, params).local(outcome.eta);
    const Matrix4c cdc = c.adjoint() * c;
    const Matrix4c id = Matrix4c::Identity();
    Matrix4c step = id - Complex(0, params.dt) * h - 0.5 * params.dt * (cdc - mean_cdc * id);
    if (outcome.xi == 1) {
        if (!(mean_cdc > 1e-14)) {
            throw InvalidOutcome("jump outcome has zero rate for this state and coupling");
        }
        step += c / std::sqrt(mean_cdc) - id;
    }
    return step;
}

std::array<double, 2> qsteer::jump_rates(const Matrix4c &gram, const PairCoupling &coupling, const StepParams &params) {
    JumpOperators jumps = jump_operators(coupling, params);
    std::array<double, 2> rates;
    for (int eta : {+1, -1}) {
        const Matrix4c c = jumps.local(eta);
        rates[eta > 0 ? 0 : 1] = std::max(0.0, expectation(c.adjoint() * c, gram));
    }
    return rates;
}

std::array<double, 4> qsteer::sse_outcome_probabilities(
    const Matrix4c &gram, const PairCoupling &coupling, const StepParams &params) {
    auto rates = jump_rates(gram, coupling, params);
    std::array<double, 4> p;
    for (size_t k = 0; k < 4; k++) {
        BellOutcome o = BellOutcome::from_index(k);
        const double jump = 0.5 * params.dt * rates[o.eta > 0 ? 0 : 1];
        p[k] = o.xi == 0 ? std::max(0.0, 0.5 - jump) : jump;
    }
    return p;
}

StateVector qsteer::sse_step_first_order(
    const StateVector &state, const PairCoupling &coupling, const StepParams &params, BellOutcome outcome) {
    check_pair(coupling.pair, state.num_qubits());
    Matrix4c gram = pair_gram(state.num_qubits(), state.amplitudes(), state.amplitudes(), coupling.pair);
    auto rates = jump_rates(gram, coupling, params);
    const Matrix4c step = sse_step_matrix(coupling, params, outcome, rates[outcome.eta > 0 ? 0 : 1]);
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    apply_pair_matrix(amps, state.num_qubits(), coupling.pair, step);
    return StateVector(state.num_qubits(), std::move(amps));
}
