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

#include "qsteer/oracle/dense_oracle.h"

#include <cmath>
#include <stdexcept>

using namespace qsteer;

namespace {

Eigen::Matrix2cd pauli(PauliAxis axis) {
    Eigen::Matrix2cd m;
    switch (axis) {
        case PauliAxis::X:
            m << 0, 1, 1, 0;
            break;
        case PauliAxis::Y:
            m << 0, Complex(0, -1), Complex(0, 1), 0;
            break;
        case PauliAxis::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

Eigen::VectorXcd as_vector(const StateVector &state) {
    Eigen::VectorXcd v(state.dim());
    for (size_t k = 0; k < state.dim(); k++) {
        v[static_cast<Eigen::Index>(k)] = state[k];
    }
    return v;
}

}  // namespace

Eigen::MatrixXcd oracle::kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::MatrixXcd oracle::embed(size_t num_qubits, size_t qubit, const Eigen::Matrix2cd &op) {
    if (qubit >= num_qubits) {
        throw std::out_of_range("qubit out of range");
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    // The highest qubit is the leftmost tensor factor.
    for (size_t q = num_qubits; q-- > 0;) {
        Eigen::MatrixXcd factor = q == qubit ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd::Identity(2, 2);
        out = kron(out, factor);
    }
    return out;
}

Eigen::MatrixXcd oracle::pauli_string_matrix(size_t num_qubits, std::span<const PauliFactor> factors) {
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto &f : factors) {
        out = out * embed(num_qubits, f.qubit, pauli(f.axis));
    }
    return out;
}

Eigen::MatrixXcd oracle::observable_matrix(const CollectiveObservable &obs) {
    const size_t n = obs.num_qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (size_t q = 0; q < n; q++) {
        const auto &s = obs.direction(q);
        Eigen::Matrix2cd local = s[0] * pauli(PauliAxis::X) + s[1] * pauli(PauliAxis::Y) + s[2] * pauli(PauliAxis::Z);
        out += 0.5 * embed(n, q, local);
    }
    return out;
}

double oracle::pauli_expectation(const StateVector &state, std::span<const PauliFactor> factors) {
    Eigen::VectorXcd v = as_vector(state);
    return v.dot(pauli_string_matrix(state.num_qubits(), factors) * v).real();
}

double oracle::qfi(const StateVector &state, const CollectiveObservable &obs) {
    Eigen::VectorXcd v = as_vector(state);
    Eigen::MatrixXcd o = observable_matrix(obs);
    Eigen::VectorXcd ov = o * v;
    const double mean = v.dot(ov).real();
    const double second = ov.squaredNorm();
    return 4 * (second - mean * mean);
}

StateVector oracle::detector_step(
    const StateVector &state, const PairCoupling &coupling, const StepParams &params, BellOutcome outcome) {
    const size_t n = state.num_qubits();
    const size_t total = n + 2;
    const size_t det_first = n;
    const size_t det_second = n + 1;
    auto detector_op = [](DetectorAxis beta) {
        return pauli(beta == DetectorAxis::X ? PauliAxis::X : PauliAxis::Z);
    };
    const auto &k = coupling.choice;
    Eigen::MatrixXcd h = params.j_coupling * (embed(total, coupling.pair.first, pauli(k.first.alpha)) *
                                                  embed(total, det_first, detector_op(k.first.beta)) +
                                              embed(total, coupling.pair.second, pauli(k.second.alpha)) *
                                                  embed(total, det_second, detector_op(k.second.beta)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    Eigen::VectorXcd phases(eig.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); i++) {
        phases[i] = std::exp(Complex(0, -params.dt * eig.eigenvalues()[i]));
    }
    Eigen::MatrixXcd u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();

    // Detectors occupy the two highest bits and start in |00>_d.
    const size_t dim = state.dim();
    Eigen::VectorXcd joint = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(4 * dim));
    for (size_t i = 0; i < dim; i++) {
        joint[static_cast<Eigen::Index>(i)] = state[i];
    }
    Eigen::VectorXcd evolved = u * joint;

    // <Phi_{xi,eta}| = (<a b| + eta <a' b'|)/sqrt2 with (a, b) = (0, xi) and
    // (a', b') = (1, 1 - xi); a is the first detector.
    const int a0 = 0, b0 = outcome.xi, a1 = 1, b1 = 1 - outcome.xi;
    auto detector_block = [&](int a, int b) {
        const size_t offset = (static_cast<size_t>(a) << det_first) | (static_cast<size_t>(b) << det_second);
        return evolved.segment(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(dim));
    };
    Eigen::VectorXcd system =
        (detector_block(a0, b0) + static_cast<double>(outcome.eta) * detector_block(a1, b1)) / std::sqrt(2.0);
    std::vector<Complex> amps(system.data(), system.data() + system.size());
    return StateVector(n, std::move(amps), false);
}
