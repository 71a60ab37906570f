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

#include "qsteer/protocol.h"

#include <cmath>
#include <stdexcept>
#include <utility>

using namespace qsteer;

namespace {

/// Number of incremental O|psi> updates between exact recomputations.
constexpr size_t RESYNC_INTERVAL = 64;

Matrix4c pair_observable(const CollectiveObservable &obs, QubitPair pair) {
    const Matrix2c id = Matrix2c::Identity();
    return 0.5 * (pair_kron(obs.local_matrix(pair.first), id) + pair_kron(id, obs.local_matrix(pair.second)));
}

}  // namespace

std::string qsteer::to_string(PairingMode mode) {
    switch (mode) {
        case PairingMode::NearestNeighborRandom:
            return "nn-random";
        case PairingMode::NearestNeighborAlternating:
            return "nn-alternating";
        case PairingMode::FullyConnectedRandom:
            return "full-random";
    }
    throw std::invalid_argument("unknown pairing mode");
}

PairingMode qsteer::parse_pairing_mode(const std::string &text) {
    for (auto mode : {PairingMode::NearestNeighborRandom, PairingMode::NearestNeighborAlternating,
                      PairingMode::FullyConnectedRandom}) {
        if (to_string(mode) == text) {
            return mode;
        }
    }
    throw std::invalid_argument("unknown pairing mode '" + text + "'");
}

std::string qsteer::to_string(Propagation propagation) {
    return propagation == Propagation::Kraus ? "kraus" : "sse";
}

Propagation qsteer::parse_propagation(const std::string &text) {
    if (text == "kraus") {
        return Propagation::Kraus;
    }
    if (text == "sse") {
        return Propagation::Sse;
    }
    throw std::invalid_argument("unknown propagation '" + text + "'");
}

void ProtocolConfig::validate() const {
    if (n_qubits < 2) {
        throw std::invalid_argument("protocol needs at least 2 qubits");
    }
    if (n_qubits > MAX_QUBITS) {
        throw std::invalid_argument("too many qubits");
    }
    if (max_steps < 1) {
        throw std::invalid_argument("max_steps must be at least 1");
    }
    params.validate();
    auto check_fraction = [](double f) {
        if (!(f > 0 && f <= 1)) {
            throw std::invalid_argument("threshold fraction must lie in (0, 1]");
        }
    };
    if (auto *t = std::get_if<QfiThreshold>(&termination)) {
        check_fraction(t->fraction);
    }
    if (auto *w = std::get_if<PhaseWindow>(&termination)) {
        check_fraction(w->min_fraction);
        if (!(w->halfwidth > 0) || !std::isfinite(w->center)) {
            throw std::invalid_argument("phase window needs a finite center and a positive halfwidth");
        }
    }
    if (!(estimator.gamma_scale > 0)) {
        throw std::invalid_argument("gamma scale must be positive");
    }
}

Pairing qsteer::build_pairing(size_t num_qubits, PairingMode mode, size_t step_index, Rng &rng) {
    const size_t n = num_qubits;
    if (n < 2) {
        throw std::invalid_argument("pairing needs at least 2 qubits");
    }
    Pairing out;
    out.pairs.reserve(n / 2);
    if (mode == PairingMode::FullyConnectedRandom) {
        std::vector<size_t> perm(n);
        for (size_t k = 0; k < n; k++) {
            perm[k] = k;
        }
        for (size_t k = n - 1; k > 0; k--) {
            std::swap(perm[k], perm[rng.below(k + 1)]);
        }
        for (size_t k = 0; k + 1 < n; k += 2) {
            out.pairs.push_back({perm[k], perm[k + 1]});
        }
        if (n % 2) {
            out.idle = perm[n - 1];
        }
        return out;
    }

    size_t start;
    if (n % 2) {
        size_t idle = rng.below(n);
        out.idle = idle;
        start = (idle + 1) % n;
    } else if (mode == PairingMode::NearestNeighborRandom) {
        start = rng.below(2);
    } else {
        start = step_index % 2;
    }
    for (size_t k = 0; k < n / 2; k++) {
        size_t a = (start + 2 * k) % n;
        out.pairs.push_back({a, (a + 1) % n});
    }
    return out;
}

SingleQubitBasis qsteer::phase_basis(const CollectiveObservable &obs) {
    return SingleQubitBasis::eigenbasis(obs.direction(0));
}

bool qsteer::termination_met(
    const Termination &termination, const StateVector &state, double fq, const SingleQubitBasis &basis) {
    const double n2 = static_cast<double>(state.num_qubits() * state.num_qubits());
    if (auto *t = std::get_if<QfiThreshold>(&termination)) {
        return fq >= t->fraction * n2;
    }
    if (auto *w = std::get_if<PhaseWindow>(&termination)) {
        if (fq < w->min_fraction * n2) {
            return false;
        }
        auto phi = try_ghz_phase(state, basis);
        return phi && std::abs(wrap_angle(*phi - w->center)) <= w->halfwidth;
    }
    return false;
}

SteeringEngine::SteeringEngine(StateVector initial, const CollectiveObservable &obs, const ProtocolConfig &config)
    : psi_(std::move(initial)), obs_(obs), config_(config) {
    config_.validate();
    if (psi_.num_qubits() != config_.n_qubits || obs_.num_qubits() != config_.n_qubits) {
        throw std::invalid_argument("state, observable and config disagree on the qubit count");
    }
    resync();
}

void SteeringEngine::resync() {
    chi_ = apply_observable(psi_, obs_);
    updates_since_sync_ = 0;
}

double SteeringEngine::fq() const {
    return qfi(psi_.amplitudes(), chi_);
}

SteeringEngine::Decision SteeringEngine::decide(QubitPair pair, Rng &rng) const {
    Decision d;
    std::array<double, NUM_COUPLINGS> scores;
    if (config_.decision_method == DecisionMethod::Exact) {
        PairMoments m = pair_moments(psi_, chi_, obs_, pair);
        scores = exact_scores(m, config_.params, config_.mode);
        d.gram = m.g[0];
    } else {
        // All correlators the estimator reads follow from the Gram matrices
        // of psi with itself and with O psi on the pair.
        d.gram = pair_gram(psi_.num_qubits(), psi_.amplitudes(), psi_.amplitudes(), pair);
        const Matrix4c cross = pair_gram(psi_.num_qubits(), psi_.amplitudes(), chi_, pair);
        const double fq_now = config_.mode.kind == CostMode::Kind::TargetQfi ? fq() : 0.0;
        PairCorrelators corr = pair_correlators(d.gram, cross, cross.trace().real(), obs_, pair, fq_now);
        scores = correlator_scores(corr, obs_, config_.params, config_.mode, config_.estimator);
    }
    d.coupling = report_from_scores(scores, config_.decision_method, rng).chosen;
    return d;
}

BellOutcome SteeringEngine::measure(QubitPair pair, const CouplingChoice &coupling, const Matrix4c &gram, Rng &rng) {
    const PairCoupling pc{pair, coupling};
    BellOutcome outcome;
    Matrix4c m;
    if (config_.propagation == Propagation::Kraus) {
        KrausSet kraus = kraus_set(pc, config_.params);
        std::array<double, 4> p;
        for (size_t k = 0; k < 4; k++) {
            const Matrix4c op = kraus.local(k);
            p[k] = std::max(0.0, (op.adjoint() * op).cwiseProduct(gram).sum().real());
        }
        outcome = sample_outcome(p, rng);
        m = kraus.local(outcome.index());
    } else {
        outcome = sample_outcome(sse_outcome_probabilities(gram, pc, config_.params), rng);
        auto rates = jump_rates(gram, pc, config_.params);
        m = sse_step_matrix(pc, config_.params, outcome, rates[outcome.eta > 0 ? 0 : 1]);
    }

    // psi' = M psi, O psi' = M O psi + [O_pair, M] psi (O_rest commutes with M).
    const Matrix4c op = pair_observable(obs_, pair);
    const Matrix4c comm = op * m - m * op;
    auto psi = psi_.mutable_amplitudes();
    double norm2 = 0;
    for_each_pair_block(psi_.num_qubits(), pair, [&](size_t i0, size_t i1, size_t i2, size_t i3) {
        const size_t idx[4] = {i0, i1, i2, i3};
        Eigen::Vector4cd v, c;
        for (int a = 0; a < 4; a++) {
            v[a] = psi[idx[a]];
            c[a] = chi_[idx[a]];
        }
        const Eigen::Vector4cd nv = m * v;
        const Eigen::Vector4cd nc = m * c + comm * v;
        for (int a = 0; a < 4; a++) {
            psi[idx[a]] = nv[a];
            chi_[idx[a]] = nc[a];
        }
        norm2 += nv.squaredNorm();
    });
    const double scale = 1 / std::sqrt(norm2);
    for (size_t k = 0; k < psi.size(); k++) {
        psi[k] *= scale;
        chi_[k] *= scale;
    }
    if (++updates_since_sync_ >= RESYNC_INTERVAL) {
        resync();
    }
    return outcome;
}

StepLog SteeringEngine::step(size_t step_index, Rng &rng) {
    Pairing pairing = build_pairing(config_.n_qubits, config_.pairing, step_index, rng);
    StepLog log;
    log.pairs.reserve(pairing.pairs.size());
    if (config_.update_order == UpdateOrder::Sequential) {
        for (const auto &pair : pairing.pairs) {
            Decision d = decide(pair, rng);
            log.pairs.push_back({pair, d.coupling, measure(pair, d.coupling, d.gram, rng)});
        }
    } else {
        std::vector<CouplingChoice> chosen;
        chosen.reserve(pairing.pairs.size());
        for (const auto &pair : pairing.pairs) {
            chosen.push_back(decide(pair, rng).coupling);
        }
        for (size_t k = 0; k < pairing.pairs.size(); k++) {
            const auto &pair = pairing.pairs[k];
            Matrix4c gram = pair_gram(psi_.num_qubits(), psi_.amplitudes(), psi_.amplitudes(), pair);
            log.pairs.push_back({pair, chosen[k], measure(pair, chosen[k], gram, rng)});
        }
    }
    log.outcomes = log.pairs.size();
    for (const auto &p : log.pairs) {
        log.jumps += p.outcome.xi;
    }
    log.fq = fq();
    if (config_.track_phase) {
        log.phase = try_ghz_phase(psi_, phase_basis(obs_));
    }
    return log;
}

std::pair<StateVector, StepLog> qsteer::protocol_step(
    const StateVector &state, const CollectiveObservable &obs, const ProtocolConfig &config, size_t step_index, Rng &rng) {
    SteeringEngine engine(state, obs, config);
    StepLog log = engine.step(step_index, rng);
    return {engine.state(), std::move(log)};
}

TrajectoryRunner::TrajectoryRunner(const ProtocolConfig &config, const CollectiveObservable &obs, Rng rng, bool keep_steps)
    : config_(config),
      obs_(obs),
      engine_(StateVector(config.n_qubits), obs, config),
      rng_(std::move(rng)),
      basis_(phase_basis(obs)),
      keep_steps_(keep_steps),
      converged_(std::holds_alternative<FixedSteps>(config.termination)) {
    if (keep_steps_) {
        steps_.reserve(config_.max_steps);
    }
}

const StepLog &TrajectoryRunner::step() {
    if (finished_) {
        throw std::logic_error("trajectory already finished");
    }
    last_ = engine_.step(steps_executed_, rng_);
    steps_executed_++;
    if (!converged_ && termination_met(config_.termination, engine_.state(), last_.fq, basis_)) {
        converged_ = true;
        finished_ = true;
    }
    if (steps_executed_ >= config_.max_steps) {
        finished_ = true;
    }
    if (keep_steps_) {
        steps_.push_back(last_);
    }
    return last_;
}

TrajectoryRecord TrajectoryRunner::finish() {
    TrajectoryRecord record;
    record.steps = std::move(steps_);
    record.steps_executed = steps_executed_;
    record.converged = converged_;
    record.final_state = engine_.state();
    record.final_fq = qfi(record.final_state, obs_);
    record.final_phase = try_ghz_phase(record.final_state, basis_);
    return record;
}

TrajectoryRecord qsteer::run_trajectory(const ProtocolConfig &config, const CollectiveObservable &obs, Rng rng) {
    TrajectoryRunner runner(config, obs, std::move(rng));
    while (!runner.finished()) {
        runner.step();
    }
    return runner.finish();
}

TrajectoryRecord qsteer::run_trajectory(const ProtocolConfig &config, const CollectiveObservable &obs) {
    Rng rng(config.seed);
    return run_trajectory(config, obs, rng);
}
