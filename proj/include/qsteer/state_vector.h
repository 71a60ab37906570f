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

#ifndef _QSTEER_STATE_VECTOR_H
#define _QSTEER_STATE_VECTOR_H

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qsteer/rng.h"

namespace qsteer {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

/// Largest register accepted by StateVector. 2^26 amplitudes is 1 GiB.
constexpr size_t MAX_QUBITS = 26;

enum class PauliAxis : uint8_t { X = 0, Y = 1, Z = 2 };

constexpr std::array<PauliAxis, 3> ALL_PAULI_AXES{PauliAxis::X, PauliAxis::Y, PauliAxis::Z};

char axis_name(PauliAxis axis);
PauliAxis parse_axis(char c);
/// 2x2 matrix of the Pauli operator (basis order |0>, |1>; sigma^z|0> = |0>).
Matrix2c pauli_matrix(PauliAxis axis);

/// Ordered pair of distinct qubits. On the 4-dimensional pair subspace the
/// local index is bit(first) + 2 * bit(second).
struct QubitPair {
    size_t first;
    size_t second;
    bool operator==(const QubitPair &) const = default;
};

/// Pure state of N qubits. Basis index bit k is qubit k.
class StateVector {
   public:
    /// |00...0>.
    explicit StateVector(size_t num_qubits);
    /// Takes ownership of the amplitudes; the length must be 2^num_qubits.
    /// The state is normalized unless `normalize` is false.
    StateVector(size_t num_qubits, std::vector<Complex> amplitudes, bool normalize = true);

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t dim() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    std::span<Complex> mutable_amplitudes() {
        return amplitudes_;
    }
    const Complex &operator[](size_t index) const {
        return amplitudes_[index];
    }

    double norm_squared() const;
    /// Rescales to unit norm and returns the norm before rescaling.
    double normalize();

    bool operator==(const StateVector &) const = default;

   private:
    size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// One factor sigma_qubit^axis of a Pauli string.
struct PauliFactor {
    size_t qubit;
    PauliAxis axis;
};

/// Single-qubit Bloch vectors R and two-qubit correlators Q of a pure state.
struct Correlators {
    size_t num_qubits = 0;
    /// bloch[n][a] = <sigma_n^a>.
    std::vector<std::array<double, 3>> bloch;
    /// Row-major N x N x 3 x 3; entries with n == m are zero.
    std::vector<double> two_body;

    double R(size_t n, size_t a) const {
        return bloch[n][a];
    }
    double Q(size_t n, size_t m, size_t a, size_t b) const {
        return two_body[((n * num_qubits + m) * 3 + a) * 3 + b];
    }
    double &Q(size_t n, size_t m, size_t a, size_t b) {
        return two_body[((n * num_qubits + m) * 3 + a) * 3 + b];
    }
};

/// Basis state from a bit string; character k is qubit k, so (2, "01") is
/// basis index 2.
StateVector basis_state(size_t num_qubits, std::string_view bits);
StateVector basis_state(size_t num_qubits, uint64_t index);

StateVector apply_pauli(StateVector state, size_t qubit, PauliAxis axis);
void apply_pauli_in_place(std::span<Complex> amplitudes, size_t qubit, PauliAxis axis);

/// <psi| prod sigma_q^axis |psi>. Qubits must be distinct.
double expectation_pauli_string(const StateVector &state, std::span<const PauliFactor> factors);

Complex inner_product(const StateVector &a, const StateVector &b);

Correlators correlators(const StateVector &state);
/// All Bloch vectors, but two-body entries only for pairs touching one of
/// the given qubits (all pairs when rows is empty); the rest stay zero.
Correlators correlators(const StateVector &state, std::span<const size_t> rows);

/// Haar-random state: iid standard complex normal amplitudes, normalized.
StateVector random_state(size_t num_qubits, Rng &rng);
/// Tensor product of independent Haar-random single-qubit states.
StateVector random_product_state(size_t num_qubits, Rng &rng);

// ---------------------------------------------------------------------------
// Pair-subspace kernels. All operations on a qubit pair visit the 2^(N-2)
// blocks of four amplitudes that differ only in the two pair bits.

/// Invokes fn(i00, i10, i01, i11) for every block, with the local index
/// order bit(first) + 2 * bit(second).
template <typename Fn>
void for_each_pair_block(size_t num_qubits, QubitPair pair, Fn &&fn) {
    const size_t lo = pair.first < pair.second ? pair.first : pair.second;
    const size_t hi = pair.first < pair.second ? pair.second : pair.first;
    const size_t lo_mask = (size_t{1} << lo) - 1;
    const size_t hi_mask = (size_t{1} << hi) - 1;
    const size_t bf = size_t{1} << pair.first;
    const size_t bs = size_t{1} << pair.second;
    const size_t blocks = (size_t{1} << num_qubits) >> 2;
    for (size_t k = 0; k < blocks; k++) {
        size_t i = ((k & ~lo_mask) << 1) | (k & lo_mask);
        i = ((i & ~hi_mask) << 1) | (i & hi_mask);
        fn(i, i | bf, i | bs, i | bf | bs);
    }
}

/// G[a][b] = sum_r conj(u[a, r]) v[b, r] over the rest index r.
Matrix4c pair_gram(size_t num_qubits, std::span<const Complex> u, std::span<const Complex> v, QubitPair pair);

/// amplitudes <- (op on pair) amplitudes.
void apply_pair_matrix(std::span<Complex> amplitudes, size_t num_qubits, QubitPair pair, const Matrix4c &op);

/// a (x) b on the pair subspace with the local index order above.
Matrix4c pair_kron(const Matrix2c &on_first, const Matrix2c &on_second);

}  // namespace qsteer

#endif
