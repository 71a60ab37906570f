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

#include "qsteer/observable.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qsteer/errors.h"

using namespace qsteer;

CollectiveObservable::CollectiveObservable(std::vector<Direction> directions) : directions_(std::move(directions)) {
    if (directions_.empty()) {
        throw std::invalid_argument("observable needs at least one qubit");
    }
    for (auto &d : directions_) {
        double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        if (!(norm > 0) || !std::isfinite(norm)) {
            throw std::invalid_argument("observable direction must be a nonzero finite vector");
        }
        for (auto &c : d) {
            c /= norm;
        }
    }
}

Matrix2c CollectiveObservable::local_matrix(size_t qubit) const {
    const auto &s = directions_.at(qubit);
    return s[0] * pauli_matrix(PauliAxis::X) + s[1] * pauli_matrix(PauliAxis::Y) + s[2] * pauli_matrix(PauliAxis::Z);
}

CollectiveObservable qsteer::default_observable(size_t num_qubits) {
    return uniform_observable(num_qubits, {1, 0, 1});
}

CollectiveObservable qsteer::uniform_observable(size_t num_qubits, Direction direction) {
    if (num_qubits < 1) {
        throw std::invalid_argument("observable needs at least one qubit");
    }
    return CollectiveObservable(std::vector<Direction>(num_qubits, direction));
}

std::vector<Complex> qsteer::apply_observable(const StateVector &state, const CollectiveObservable &obs) {
    if (obs.num_qubits() != state.num_qubits()) {
        throw std::invalid_argument("observable and state have different qubit counts");
    }
    auto psi = state.amplitudes();
    std::vector<Complex> out(psi.size(), Complex{0, 0});
    for (size_t q = 0; q < state.num_qubits(); q++) {
        Matrix2c m = 0.5 * obs.local_matrix(q);
        const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
        const size_t bit = size_t{1} << q;
        for (size_t k = 0; k < psi.size(); k++) {
            if (k & bit) {
                continue;
            }
            const Complex a0 = psi[k];
            const Complex a1 = psi[k | bit];
            out[k] += m00 * a0 + m01 * a1;
            out[k | bit] += m10 * a0 + m11 * a1;
        }
    }
    return out;
}

double qsteer::qfi(std::span<const Complex> psi, std::span<const Complex> obs_psi) {
    double o2 = 0;
    Complex o1 = 0;
    for (size_t k = 0; k < psi.size(); k++) {
        o2 += std::norm(obs_psi[k]);
        o1 += std::conj(psi[k]) * obs_psi[k];
    }
    return 4 * (o2 - o1.real() * o1.real());
}

double qsteer::qfi(const StateVector &state, const CollectiveObservable &obs) {
    auto obs_psi = apply_observable(state, obs);
    return qfi(state.amplitudes(), obs_psi);
}

double qsteer::qfi_from_correlators(const Correlators &corr, const CollectiveObservable &obs) {
    const size_t n = corr.num_qubits;
    if (obs.num_qubits() != n) {
        throw std::invalid_argument("observable and correlators have different qubit counts");
    }
    double mean = 0;
    for (size_t q = 0; q < n; q++) {
        for (size_t a = 0; a < 3; a++) {
            mean += obs.direction(q)[a] * corr.R(q, a);
        }
    }
    mean *= 0.5;
    double second = static_cast<double>(n);
    for (size_t q1 = 0; q1 < n; q1++) {
        for (size_t q2 = 0; q2 < n; q2++) {
            if (q1 == q2) {
                continue;
            }
            for (size_t a = 0; a < 3; a++) {
                for (size_t b = 0; b < 3; b++) {
                    second += obs.direction(q1)[a] * corr.Q(q1, q2, a, b) * obs.direction(q2)[b];
                }
            }
        }
    }
    second *= 0.25;
    return 4 * (second - mean * mean);
}

size_t qsteer::witness_block_size(double fq, size_t num_qubits) {
    if (num_qubits < 1) {
        throw std::invalid_argument("witness_block_size: need at least one qubit");
    }
    const double n = static_cast<double>(num_qubits);
    if (!(fq >= 0)) {
        throw std::invalid_argument("witness_block_size: negative QFI");
    }
    if (fq > n * n + 1e-8 * std::max(1.0, n * n)) {
        throw std::invalid_argument("witness_block_size: QFI exceeds N^2");
    }
    // Largest integer m with fq > m n, i.e. m < fq / n.
    double ratio = fq / n;
    double m = std::ceil(ratio) - 1;
    double block = m + 1;
    if (block < 1) {
        return 1;
    }
    if (block > n) {
        return num_qubits;
    }
    return static_cast<size_t>(block);
}

SingleQubitBasis SingleQubitBasis::computational() {
    return {{Complex{1}, Complex{0}}, {Complex{0}, Complex{1}}};
}

SingleQubitBasis SingleQubitBasis::rotated() {
    const double t = std::numbers::sqrt2 - 1;
    const double norm = std::sqrt(1 + t * t);
    return {{Complex{1 / norm}, Complex{t / norm}}, {Complex{-t / norm}, Complex{1 / norm}}};
}

SingleQubitBasis SingleQubitBasis::eigenbasis(const Direction &direction) {
    const double norm = std::hypot(direction[0], direction[1], direction[2]);
    if (!(norm > 0)) {
        throw std::invalid_argument("eigenbasis of a zero direction");
    }
    const double polar = std::acos(std::clamp(direction[2] / norm, -1.0, 1.0));
    const double azimuth = std::atan2(direction[1], direction[0]);
    const Complex e = std::polar(1.0, azimuth);
    const double c = std::cos(polar / 2);
    const double s = std::sin(polar / 2);
    return {{Complex{c}, e * s}, {-std::conj(e) * s, Complex{c}}};
}

namespace {

std::vector<Complex> product_amplitudes(size_t num_qubits, const std::array<Complex, 2> &v) {
    std::vector<Complex> amps(size_t{1} << num_qubits);
    for (size_t k = 0; k < amps.size(); k++) {
        Complex a = 1;
        for (size_t q = 0; q < num_qubits; q++) {
            a *= v[(k >> q) & 1];
        }
        amps[k] = a;
    }
    return amps;
}

}  // namespace

StateVector qsteer::ghz_state(size_t num_qubits, double phi, const SingleQubitBasis &basis) {
    if (num_qubits < 2) {
        throw std::invalid_argument("ghz_state needs at least two qubits");
    }
    auto zeros = product_amplitudes(num_qubits, basis.zero);
    auto ones = product_amplitudes(num_qubits, basis.one);
    const Complex phase = std::polar(1.0, phi);
    std::vector<Complex> amps(zeros.size());
    for (size_t k = 0; k < amps.size(); k++) {
        amps[k] = (zeros[k] + phase * ones[k]) / std::numbers::sqrt2;
    }
    return StateVector(num_qubits, std::move(amps));
}

StateVector qsteer::dicke_state(size_t num_qubits, size_t k) {
    if (k > num_qubits) {
        throw std::invalid_argument("dicke_state: excitation count exceeds qubit count");
    }
    std::vector<Complex> amps(size_t{1} << num_qubits, Complex{0, 0});
    for (size_t i = 0; i < amps.size(); i++) {
        if (static_cast<size_t>(std::popcount(i)) == k) {
            amps[i] = 1;
        }
    }
    return StateVector(num_qubits, std::move(amps));
}

double qsteer::dicke_target_qfi(size_t num_qubits, size_t k) {
    if (k > num_qubits) {
        throw std::invalid_argument("dicke_target_qfi: excitation count exceeds qubit count");
    }
    const double n = static_cast<double>(num_qubits);
    const double d = n / 2 - static_cast<double>(k);
    return n * n / 2 - 2 * d * d + n;
}

Complex qsteer::product_overlap(const StateVector &state, const std::array<Complex, 2> &v) {
    // Contract qubit 0 (the lowest bit) repeatedly: the remaining register halves each time.
    const Complex c0 = std::conj(v[0]);
    const Complex c1 = std::conj(v[1]);
    std::vector<Complex> work(state.amplitudes().begin(), state.amplitudes().end());
    size_t len = work.size();
    while (len > 1) {
        for (size_t j = 0; j < len / 2; j++) {
            work[j] = c0 * work[2 * j] + c1 * work[2 * j + 1];
        }
        len /= 2;
    }
    return work[0];
}

double qsteer::wrap_angle(double angle) {
    double wrapped = std::remainder(angle, 2 * std::numbers::pi);
    if (wrapped <= -std::numbers::pi) {
        wrapped += 2 * std::numbers::pi;
    }
    return wrapped;
}

std::optional<double> qsteer::try_ghz_phase(
    const StateVector &state, const SingleQubitBasis &basis, double overlap_floor) {
    Complex zero_branch = product_overlap(state, basis.zero);
    Complex one_branch = product_overlap(state, basis.one);
    if (std::abs(zero_branch) < overlap_floor || std::abs(one_branch) < overlap_floor) {
        return std::nullopt;
    }
    return wrap_angle(std::arg(std::conj(zero_branch) * one_branch));
}

double qsteer::ghz_phase(const StateVector &state, const SingleQubitBasis &basis, double overlap_floor) {
    auto phi = try_ghz_phase(state, basis, overlap_floor);
    if (!phi) {
        throw NotOnManifold("state has no weight on one of the GHZ branches");
    }
    return *phi;
}
