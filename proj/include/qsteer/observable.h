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

#ifndef _QSTEER_OBSERVABLE_H
#define _QSTEER_OBSERVABLE_H

#include <array>
#include <optional>
#include <vector>

#include "qsteer/state_vector.h"

namespace qsteer {

using Direction = std::array<double, 3>;

/// Collective observable O = 1/2 sum_n s_n . sigma_n with unit vectors s_n.
class CollectiveObservable {
   public:
    /// Directions are normalized on construction; zero vectors are rejected.
    explicit CollectiveObservable(std::vector<Direction> directions);

    size_t num_qubits() const {
        return directions_.size();
    }
    const Direction &direction(size_t qubit) const {
        return directions_[qubit];
    }
    const std::vector<Direction> &directions() const {
        return directions_;
    }
    /// s_n . sigma as a 2x2 matrix.
    Matrix2c local_matrix(size_t qubit) const;

   private:
    std::vector<Direction> directions_;
};

/// s_n = (1, 0, 1)/sqrt(2) on every qubit.
CollectiveObservable default_observable(size_t num_qubits);
/// The same direction on every qubit.
CollectiveObservable uniform_observable(size_t num_qubits, Direction direction);

/// O|psi>.
std::vector<Complex> apply_observable(const StateVector &state, const CollectiveObservable &obs);

/// F_Q = 4 (<O^2> - <O>^2) for a pure state, evaluated from O|psi>.
double qfi(const StateVector &state, const CollectiveObservable &obs);
/// F_Q from (psi, O psi) when O psi is already available.
double qfi(std::span<const Complex> psi, std::span<const Complex> obs_psi);
/// F_Q from Bloch vectors and two-body correlators:
/// <O^2> = (N + sum_{n != m} s_n Q_nm s_m) / 4, <O> = sum_n s_n . R_n / 2.
double qfi_from_correlators(const Correlators &corr, const CollectiveObservable &obs);

/// Certified lower bound on the largest entangled block: m + 1 for the
/// largest m with fq > m * n, clamped to [1, n].
size_t witness_block_size(double fq, size_t num_qubits);

/// Orthonormal single-qubit basis {|0'>, |1'>} defining the GHZ branches.
struct SingleQubitBasis {
    std::array<Complex, 2> zero;
    std::array<Complex, 2> one;

    static SingleQubitBasis computational();
    /// Eigenbasis of (sigma^x + sigma^z)/sqrt(2): |0'> ~ |0> + (sqrt2 - 1)|1>,
    /// |1'> ~ (1 - sqrt2)|0> + |1>.
    static SingleQubitBasis rotated();
    /// Eigenbasis of d . sigma: |0'> has eigenvalue +1, |1'> has -1.
    static SingleQubitBasis eigenbasis(const Direction &direction);
};

/// (|0'0'...> + e^{i phi}|1'1'...>)/sqrt(2).
StateVector ghz_state(size_t num_qubits, double phi, const SingleQubitBasis &basis);

/// Equal superposition of all basis states with Hamming weight k.
StateVector dicke_state(size_t num_qubits, size_t k);

/// QFI of |D_{k,N}> for O = J_z: N^2/2 - 2 (N/2 - k)^2 + N.
double dicke_target_qfi(size_t num_qubits, size_t k);

/// <v v ... v | psi> for a single-qubit vector v repeated on every qubit.
Complex product_overlap(const StateVector &state, const std::array<Complex, 2> &v);

constexpr double DEFAULT_OVERLAP_FLOOR = 1e-6;

/// GHZ phase phi in (-pi, pi]: the phase of e^{i phi} in
/// <psi|0'0'...> <1'1'...|psi>, so ghz_phase(ghz_state(n, phi)) == phi.
/// Throws NotOnManifold when either overlap magnitude is below the floor.
double ghz_phase(const StateVector &state, const SingleQubitBasis &basis, double overlap_floor = DEFAULT_OVERLAP_FLOOR);
std::optional<double> try_ghz_phase(
    const StateVector &state, const SingleQubitBasis &basis, double overlap_floor = DEFAULT_OVERLAP_FLOOR);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

}  // namespace qsteer

#endif
