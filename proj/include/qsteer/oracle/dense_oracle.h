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

#ifndef _QSTEER_ORACLE_DENSE_ORACLE_H
#define _QSTEER_ORACLE_DENSE_ORACLE_H

#include <Eigen/Dense>
#include <span>

#include "qsteer/observable.h"
#include "qsteer/state_vector.h"
#include "qsteer/weak_measurement.h"

namespace qsteer::oracle {

/// Reference implementations built from explicit dense matrices. They share
/// no kernels with the production code and are meant for small N only.

/// Kronecker product a (x) b with b acting on the lower bits.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

/// The single-qubit operator `op` on `qubit` of an n-qubit register.
Eigen::MatrixXcd embed(size_t num_qubits, size_t qubit, const Eigen::Matrix2cd &op);

Eigen::MatrixXcd pauli_string_matrix(size_t num_qubits, std::span<const PauliFactor> factors);
Eigen::MatrixXcd observable_matrix(const CollectiveObservable &obs);

double pauli_expectation(const StateVector &state, std::span<const PauliFactor> factors);
double qfi(const StateVector &state, const CollectiveObservable &obs);

/// Simulates the step with both detectors as explicit qubits: appends
/// |00>_d (first detector on qubit N, second on N+1), evolves with
/// exp(-i dt H_K) from an eigendecomposition of H_K, and projects the
/// detectors on the Bell state of `outcome`. Returns the unnormalized
/// system state.
StateVector detector_step(
    const StateVector &state, const PairCoupling &coupling, const StepParams &params, BellOutcome outcome);

}  // namespace qsteer::oracle

#endif
