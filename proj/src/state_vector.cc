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

#include "qsteer/state_vector.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qsteer/errors.h"

using namespace qsteer;

namespace {

void check_capacity(size_t num_qubits) {
    if (num_qubits < 1 || num_qubits > MAX_QUBITS) {
        throw CapacityError(
            "qubit count " + std::to_string(num_qubits) + " outside supported range [1, " +
            std::to_string(MAX_QUBITS) + "]");
    }
}

void check_qubit(size_t qubit, size_t num_qubits) {
    if (qubit >= num_qubits) {
        throw std::out_of_range(
            "qubit index " + std::to_string(qubit) + " out of range for " + std::to_string(num_qubits) +
            " qubits");
    }
}

}  // namespace

char qsteer::axis_name(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X:
            return 'X';
        case PauliAxis::Y:
            return 'Y';
        case PauliAxis::Z:
            return 'Z';
    }
    return '?';
}

PauliAxis qsteer::parse_axis(char c) {
    switch (c) {
        case 'X':
        case 'x':
            return PauliAxis::X;
        case 'Y':
        case 'y':
            return PauliAxis::Y;
        case 'Z':
        case 'z':
            return PauliAxis::Z;
        default:
            throw std::invalid_argument(std::string("not a Pauli axis: '") + c + "'");
    }
}

Matrix2c qsteer::pauli_matrix(PauliAxis axis) {
    Matrix2c m;
    const Complex i(0, 1);
    switch (axis) {
        case PauliAxis::X:
            m << 0, 1, 1, 0;
            break;
        case PauliAxis::Y:
            m << 0, -i, i, 0;
            break;
        case PauliAxis::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

StateVector::StateVector(size_t num_qubits) : num_qubits_(num_qubits) {
    check_capacity(num_qubits);
    amplitudes_.assign(size_t{1} << num_qubits, Complex{0, 0});
    amplitudes_[0] = 1;
}

StateVector::StateVector(size_t num_qubits, std::vector<Complex> amplitudes, bool normalize)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    check_capacity(num_qubits);
    if (amplitudes_.size() != (size_t{1} << num_qubits)) {
        throw std::invalid_argument(
            "amplitude count " + std::to_string(amplitudes_.size()) + " is not 2^" + std::to_string(num_qubits));
    }
    if (normalize) {
        if (norm_squared() == 0) {
            throw std::invalid_argument("cannot normalize the zero vector");
        }
        this->normalize();
    }
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

double StateVector::normalize() {
    double norm = std::sqrt(norm_squared());
    double inv = 1.0 / norm;
    for (auto &a : amplitudes_) {
        a *= inv;
    }
    return norm;
}

StateVector qsteer::basis_state(size_t num_qubits, std::string_view bits) {
    if (bits.size() != num_qubits) {
        throw std::invalid_argument("bit string length does not match qubit count");
    }
    uint64_t index = 0;
    for (size_t k = 0; k < bits.size(); k++) {
        if (bits[k] == '1') {
            index |= uint64_t{1} << k;
        } else if (bits[k] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return basis_state(num_qubits, index);
}

StateVector qsteer::basis_state(size_t num_qubits, uint64_t index) {
    StateVector state(num_qubits);
    if (index >= state.dim()) {
        throw std::out_of_range("basis index out of range");
    }
    auto amps = state.mutable_amplitudes();
    amps[0] = 0;
    amps[index] = 1;
    return state;
}

void qsteer::apply_pauli_in_place(std::span<Complex> amplitudes, size_t qubit, PauliAxis axis) {
    const size_t bit = size_t{1} << qubit;
    if (bit >= amplitudes.size()) {
        throw std::out_of_range("qubit index out of range");
    }
    const Complex i(0, 1);
    for (size_t k = 0; k < amplitudes.size(); k++) {
        if (k & bit) {
            continue;
        }
        Complex &a0 = amplitudes[k];
        Complex &a1 = amplitudes[k | bit];
        switch (axis) {
            case PauliAxis::X:
                std::swap(a0, a1);
                break;
            case PauliAxis::Y: {
                Complex t = a0;
                a0 = -i * a1;
                a1 = i * t;
                break;
            }
            case PauliAxis::Z:
                a1 = -a1;
                break;
        }
    }
}

StateVector qsteer::apply_pauli(StateVector state, size_t qubit, PauliAxis axis) {
    check_qubit(qubit, state.num_qubits());
    apply_pauli_in_place(state.mutable_amplitudes(), qubit, axis);
    return state;
}

double qsteer::expectation_pauli_string(const StateVector &state, std::span<const PauliFactor> factors) {
    uint64_t seen = 0;
    std::vector<Complex> scratch(state.amplitudes().begin(), state.amplitudes().end());
    for (const auto &f : factors) {
        check_qubit(f.qubit, state.num_qubits());
        if (seen & (uint64_t{1} << f.qubit)) {
            throw std::invalid_argument("duplicate qubit " + std::to_string(f.qubit) + " in Pauli string");
        }
        seen |= uint64_t{1} << f.qubit;
        apply_pauli_in_place(scratch, f.qubit, f.axis);
    }
    Complex total = 0;
    auto amps = state.amplitudes();
    for (size_t k = 0; k < amps.size(); k++) {
        total += std::conj(amps[k]) * scratch[k];
    }
    // Products of Paulis on distinct qubits are Hermitian.
    if (std::abs(total.imag()) > 1e-10) {
        throw std::logic_error("Pauli string expectation has an imaginary part");
    }
    return total.real();
}

Complex qsteer::inner_product(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner_product: qubit counts differ");
    }
    Complex total = 0;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (size_t k = 0; k < x.size(); k++) {
        total += std::conj(x[k]) * y[k];
    }
    return total;
}

Matrix4c qsteer::pair_kron(const Matrix2c &on_first, const Matrix2c &on_second) {
    Matrix4c out;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            for (int k = 0; k < 2; k++) {
                for (int l = 0; l < 2; l++) {
                    out(i + 2 * k, j + 2 * l) = on_first(i, j) * on_second(k, l);
                }
            }
        }
    }
    return out;
}

Matrix4c qsteer::pair_gram(size_t num_qubits, std::span<const Complex> u, std::span<const Complex> v, QubitPair pair) {
    Complex g[4][4] = {};
    for_each_pair_block(num_qubits, pair, [&](size_t i0, size_t i1, size_t i2, size_t i3) {
        const Complex cu[4] = {std::conj(u[i0]), std::conj(u[i1]), std::conj(u[i2]), std::conj(u[i3])};
        const Complex cv[4] = {v[i0], v[i1], v[i2], v[i3]};
        for (int a = 0; a < 4; a++) {
            for (int b = 0; b < 4; b++) {
                g[a][b] += cu[a] * cv[b];
            }
        }
    });
    Matrix4c out;
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            out(a, b) = g[a][b];
        }
    }
    return out;
}

void qsteer::apply_pair_matrix(std::span<Complex> amplitudes, size_t num_qubits, QubitPair pair, const Matrix4c &op) {
    Complex m[4][4];
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            m[a][b] = op(a, b);
        }
    }
    for_each_pair_block(num_qubits, pair, [&](size_t i0, size_t i1, size_t i2, size_t i3) {
        const Complex in[4] = {amplitudes[i0], amplitudes[i1], amplitudes[i2], amplitudes[i3]};
        Complex out[4];
        for (int a = 0; a < 4; a++) {
            out[a] = m[a][0] * in[0] + m[a][1] * in[1] + m[a][2] * in[2] + m[a][3] * in[3];
        }
        amplitudes[i0] = out[0];
        amplitudes[i1] = out[1];
        amplitudes[i2] = out[2];
        amplitudes[i3] = out[3];
    });
}

Correlators qsteer::correlators(const StateVector &state, std::span<const size_t> rows) {
    const size_t n = state.num_qubits();
    Correlators c;
    c.num_qubits = n;
    c.bloch.assign(n, {0, 0, 0});
    c.two_body.assign(n * n * 9, 0.0);
    auto amps = state.amplitudes();

    for (size_t q = 0; q < n; q++) {
        const size_t bit = size_t{1} << q;
        Complex off = 0;
        double z = 0;
        for (size_t k = 0; k < amps.size(); k++) {
            if (k & bit) {
                continue;
            }
            off += std::conj(amps[k]) * amps[k | bit];
            z += std::norm(amps[k]) - std::norm(amps[k | bit]);
        }
        c.bloch[q] = {2 * off.real(), 2 * off.imag(), z};
    }

    std::vector<bool> wanted(n, rows.empty());
    for (size_t r : rows) {
        if (r >= n) {
            throw std::out_of_range("correlator row out of range");
        }
        wanted[r] = true;
    }
    std::array<Matrix2c, 3> paulis{
        pauli_matrix(PauliAxis::X), pauli_matrix(PauliAxis::Y), pauli_matrix(PauliAxis::Z)};
    for (size_t q1 = 0; q1 < n; q1++) {
        for (size_t q2 = q1 + 1; q2 < n; q2++) {
            if (!wanted[q1] && !wanted[q2]) {
                continue;
            }
            // <X> = sum_ab X_ab G[a][b] with G the pair Gram matrix of the state.
            Matrix4c g = pair_gram(n, amps, amps, {q1, q2});
            for (size_t a = 0; a < 3; a++) {
                for (size_t b = 0; b < 3; b++) {
                    double v = pair_kron(paulis[a], paulis[b]).cwiseProduct(g).sum().real();
                    c.Q(q1, q2, a, b) = v;
                    c.Q(q2, q1, b, a) = v;
                }
            }
        }
    }
    return c;
}

Correlators qsteer::correlators(const StateVector &state) {
    return correlators(state, {});
}

StateVector qsteer::random_state(size_t num_qubits, Rng &rng) {
    check_capacity(num_qubits);
    std::vector<Complex> amps(size_t{1} << num_qubits);
    for (auto &a : amps) {
        double re = rng.normal();
        double im = rng.normal();
        a = Complex(re, im);
    }
    return StateVector(num_qubits, std::move(amps));
}

StateVector qsteer::random_product_state(size_t num_qubits, Rng &rng) {
    check_capacity(num_qubits);
    std::vector<Complex> amps{1};
    for (size_t q = 0; q < num_qubits; q++) {
        Complex v0(rng.normal(), rng.normal());
        Complex v1(rng.normal(), rng.normal());
        std::vector<Complex> next(amps.size() * 2);
        for (size_t k = 0; k < amps.size(); k++) {
            next[k] = amps[k] * v0;
            next[k + amps.size()] = amps[k] * v1;
        }
        amps = std::move(next);
    }
    return StateVector(num_qubits, std::move(amps));
}
