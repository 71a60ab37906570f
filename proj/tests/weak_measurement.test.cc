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

#include <numbers>

#include "gtest/gtest.h"
#include "qsteer/decision.h"
#include "qsteer/errors.h"
#include "qsteer/oracle/dense_oracle.h"
#include "test_util.h"

using namespace qsteer;
using qsteer::testing::max_abs_diff;

namespace {

const Complex I{0, 1};

bool both_z(const CouplingChoice &c) {
    return c.first.beta == DetectorAxis::Z && c.second.beta == DetectorAxis::Z;
}

QubitPair random_pair(size_t n, Rng &rng) {
    QubitPair p{rng.below(n), 0};
    do {
        p.second = rng.below(n);
    } while (p.second == p.first);
    return p;
}

/// exp(-i theta sigma) = cos(theta) - i sin(theta) sigma.
Matrix2c rotation(PauliAxis axis, double theta) {
    return std::cos(theta) * Matrix2c::Identity() - I * std::sin(theta) * pauli_matrix(axis);
}

double aligned_distance(const StateVector &a, const StateVector &b) {
    Complex overlap = inner_product(b, a);
    Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1);
    double d2 = 0;
    for (size_t i = 0; i < a.dim(); i++) {
        d2 += std::norm(a[i] - phase * b[i]);
    }
    return std::sqrt(d2);
}

}  // namespace

TEST(weak_measurement, coupling_text_round_trip) {
    for (const auto &c : coupling_family()) {
        ASSERT_EQ(parse_coupling(to_string(c)), c);
    }
    ASSERT_EQ(to_string(CouplingChoice{{PauliAxis::Z, DetectorAxis::X}, {PauliAxis::Y, DetectorAxis::Z}}), "ZX,YZ");
    ASSERT_THROW(parse_coupling("ZY,ZX"), std::invalid_argument);
    ASSERT_THROW(parse_coupling("ZX"), std::invalid_argument);
}

TEST(weak_measurement, outcome_index_round_trip) {
    for (size_t k = 0; k < 4; k++) {
        ASSERT_EQ(BellOutcome::from_index(k).index(), k);
    }
    ASSERT_EQ((BellOutcome{0, +1}.index()), 0u);
    ASSERT_EQ((BellOutcome{0, -1}.index()), 1u);
    ASSERT_EQ((BellOutcome{1, +1}.index()), 2u);
    ASSERT_EQ((BellOutcome{1, -1}.index()), 3u);
}

TEST(weak_measurement, kraus_matches_dense_detector_oracle) {
    Rng rng(31);
    for (size_t t = 0; t < 20; t++) {
        StateVector s = random_state(4, rng);
        QubitPair pair = random_pair(4, rng);
        StepParams p{1.0, t % 2 ? 0.2 : 0.07};
        for (const auto &c : coupling_family()) {
            KrausSet ks = kraus_set({pair, c}, p);
            for (size_t o = 0; o < 4; o++) {
                BellOutcome outcome = BellOutcome::from_index(o);
                StateVector expected = oracle::detector_step(s, {pair, c}, p, outcome);
                ASSERT_LT(max_abs_diff(apply_kraus(s, ks, outcome), expected), 1e-10) << to_string(c) << " " << o;
            }
        }
    }
}

TEST(weak_measurement, completeness) {
    Rng rng(32);
    for (size_t t = 0; t < 100; t++) {
        size_t n = 2 + t % 4;
        StateVector s = random_state(n, rng);
        StepParams p{1.0, std::array{0.05, 0.1, 0.2}[t % 3]};
        PairCoupling c{random_pair(n, rng), coupling_family()[rng.below(NUM_COUPLINGS)]};
        auto probs = outcome_probabilities(s, kraus_set(c, p));
        double total = 0;
        for (double q : probs) {
            ASSERT_GE(q, 0.0);
            total += q;
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
    }
    // As an operator identity on the pair.
    for (const auto &c : coupling_family()) {
        KrausSet ks = kraus_set({{0, 1}, c}, {1.0, 0.3});
        Matrix4c sum = Matrix4c::Zero();
        for (size_t k = 0; k < 4; k++) {
            sum += ks.local(k).adjoint() * ks.local(k);
        }
        ASSERT_LT((sum - Matrix4c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(weak_measurement, parity_superselection) {
    Rng rng(33);
    for (const auto &c : coupling_family()) {
        KrausSet ks = kraus_set({{0, 2}, c}, {1.0, 0.2});
        if (!both_z(c)) {
            continue;
        }
        ASSERT_TRUE(ks.op({1, +1}).is_zero());
        ASSERT_TRUE(ks.op({1, -1}).is_zero());
        for (size_t t = 0; t < 5; t++) {
            StateVector s = random_state(3, rng);
            auto probs = outcome_probabilities(s, ks);
            ASSERT_EQ(probs[2], 0.0);
            ASSERT_EQ(probs[3], 0.0);
            for (size_t d = 0; d < 20; d++) {
                ASSERT_EQ(sample_and_apply(s, ks, rng).outcome.xi, 0);
            }
        }
    }
}

TEST(weak_measurement, zz_no_jump_operators_are_product_rotations) {
    double theta = 0.2;
    for (const auto &c : coupling_family()) {
        if (!both_z(c)) {
            continue;
        }
        KrausSet ks = kraus_set({{0, 1}, c}, {1.0, theta});
        Matrix4c expected =
            pair_kron(rotation(c.first.alpha, theta), rotation(c.second.alpha, theta)) / std::numbers::sqrt2;
        ASSERT_LT((ks.local(0) - expected).cwiseAbs().maxCoeff(), 1e-14);
        ASSERT_LT((ks.local(1) - expected).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(weak_measurement, probability_quadruple) {
    // beta = (X, X), alpha = (Z, Z), J dt = 0.2, |00>.
    KrausSet ks = kraus_set({{0, 1}, parse_coupling("ZX,ZX")}, {1.0, 0.2});
    auto p = outcome_probabilities(basis_state(2, "00"), ks);
    ASSERT_NEAR(p[0], std::pow(std::cos(0.4), 2) / 2, 1e-12);
    ASSERT_NEAR(p[1], 0.5, 1e-12);
    ASSERT_NEAR(p[2], std::pow(std::sin(0.4), 2) / 2, 1e-12);
    ASSERT_NEAR(p[3], 0.0, 1e-12);
    ASSERT_NEAR(p[0], 0.4242, 1e-4);
    ASSERT_NEAR(p[2], 0.0758, 1e-4);
}

TEST(weak_measurement, jump_probability_leading_order) {
    // p_{1,+} = sin^2(2 J dt)/2 -> 2 (J dt)^2 = dt <c_+^dag c_+>/2 with <c^dag c> = 4 J^2 dt.
    for (double theta : {0.02, 0.01, 0.005}) {
        StepParams p{1.0, theta};
        PairCoupling c{{0, 1}, parse_coupling("ZX,ZX")};
        double exact = outcome_probabilities(basis_state(2, "00"), kraus_set(c, p))[2];
        Matrix4c gram = pair_gram(2, basis_state(2, "00").amplitudes(), basis_state(2, "00").amplitudes(), c.pair);
        double first_order = sse_outcome_probabilities(gram, c, p)[2];
        ASSERT_NEAR(first_order, 2 * theta * theta, 1e-15);
        ASSERT_LT(std::abs(exact - first_order) / first_order, 2 * theta * theta * 4);
    }
}

TEST(weak_measurement, weak_limit) {
    KrausSet ks = kraus_set({{0, 1}, parse_coupling("XX,YZ")}, {1.0, 1e-12});
    Matrix4c h = Matrix4c::Identity() / std::numbers::sqrt2;
    ASSERT_LT((ks.local(0) - h).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_LT((ks.local(1) - h).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_LT(ks.local(2).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_LT(ks.local(3).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(weak_measurement, sampling_contract) {
    Rng rng(34);
    StateVector s = random_state(3, rng);
    PairCoupling c{{2, 0}, parse_coupling("YX,XX")};
    KrausSet ks = kraus_set(c, {1.0, 0.3});
    auto probs = outcome_probabilities(s, ks);
    std::array<size_t, 4> counts{};
    const size_t draws = 20000;
    Rng a(99), b(99);
    for (size_t d = 0; d < draws; d++) {
        MeasurementResult r = sample_and_apply(s, ks, a);
        MeasurementResult r2 = sample_and_apply(s, ks, b);
        ASSERT_EQ(r.outcome, r2.outcome);
        ASSERT_NEAR(r.state.norm_squared(), 1.0, 1e-10);
        counts[r.outcome.index()]++;
    }
    for (size_t k = 0; k < 4; k++) {
        double mean = draws * probs[k];
        ASSERT_LT(std::abs(counts[k] - mean), 5 * std::sqrt(mean * (1 - probs[k])) + 1e-9);
    }
    // The post-state is the normalized Kraus image.
    MeasurementResult r = sample_and_apply(s, ks, rng);
    StateVector expected = apply_kraus(s, ks, r.outcome);
    expected.normalize();
    ASSERT_LT(max_abs_diff(r.state, expected), 1e-12);
}

TEST(weak_measurement, sample_outcome_skips_zero_probabilities) {
    Rng rng(35);
    for (size_t d = 0; d < 1000; d++) {
        ASSERT_EQ(sample_outcome({0.0, 1.0, 0.0, 0.0}, rng).index(), 1u);
    }
    ASSERT_THROW(sample_outcome({0.0, 0.0, 0.0, 0.0}, rng), std::exception);
}

TEST(weak_measurement, jump_operator_examples) {
    StepParams p{1.0, 0.2};
    double j2dt = p.j_coupling * p.j_coupling * p.dt;
    for (const auto &c : coupling_family()) {
        JumpOperators jo = jump_operators({{0, 1}, c}, p);
        if (both_z(c)) {
            ASSERT_TRUE(jo.ops[0].is_zero());
            ASSERT_TRUE(jo.ops[1].is_zero());
        }
    }
    // beta = (X, Z): c_eta = -i J sqrt(dt) eta sigma_n, so <c^dag c> = J^2 dt on any state.
    Rng rng(36);
    StateVector s = random_state(2, rng);
    Matrix4c gram = pair_gram(2, s.amplitudes(), s.amplitudes(), {0, 1});
    PairCoupling xz{{0, 1}, parse_coupling("YX,ZZ")};
    JumpOperators jo = jump_operators(xz, p);
    Matrix4c expected = -I * std::sqrt(p.dt) * pair_kron(pauli_matrix(PauliAxis::Y), Matrix2c::Identity());
    ASSERT_LT((jo.local(+1) - expected).cwiseAbs().maxCoeff(), 1e-15);
    ASSERT_LT((jo.local(-1) + expected).cwiseAbs().maxCoeff(), 1e-15);
    auto rates = jump_rates(gram, xz, p);
    ASSERT_NEAR(rates[0], j2dt, 1e-14);
    ASSERT_NEAR(rates[1], j2dt, 1e-14);
    // beta = (X, X), alpha = (Z, Z), |00>: 4 J^2 dt and 0.
    StateVector zero = basis_state(2, "00");
    Matrix4c g0 = pair_gram(2, zero.amplitudes(), zero.amplitudes(), {0, 1});
    auto r00 = jump_rates(g0, {{0, 1}, parse_coupling("ZX,ZX")}, p);
    ASSERT_NEAR(r00[0], 4 * j2dt, 1e-14);
    ASSERT_NEAR(r00[1], 0.0, 1e-14);
}

TEST(weak_measurement, sse_probabilities_normalized) {
    Rng rng(37);
    for (size_t t = 0; t < 50; t++) {
        StateVector s = random_state(3, rng);
        PairCoupling c{random_pair(3, rng), coupling_family()[rng.below(NUM_COUPLINGS)]};
        Matrix4c g = pair_gram(3, s.amplitudes(), s.amplitudes(), c.pair);
        auto p = sse_outcome_probabilities(g, c, {1.0, 0.1});
        ASSERT_NEAR(p[0] + p[1] + p[2] + p[3], 1.0, 1e-14);
        if (both_z(c.choice)) {
            ASSERT_EQ(p[2] + p[3], 0.0);
        }
    }
}

TEST(weak_measurement, sse_zz_no_jump_is_unitary_to_first_order) {
    Rng rng(38);
    StateVector s = random_state(3, rng);
    for (const auto &c : coupling_family()) {
        if (!both_z(c)) {
            continue;
        }
        for (double theta : {0.02, 0.01}) {
            PairCoupling pc{{1, 2}, c};
            StateVector sse = sse_step_first_order(s, pc, {1.0, theta}, {0, +1});
            ASSERT_NEAR(sse.norm_squared(), 1.0, 1e-12);
            std::vector<Complex> amps(s.amplitudes().begin(), s.amplitudes().end());
            apply_pair_matrix(amps, 3, pc.pair, pair_kron(rotation(c.first.alpha, theta), rotation(c.second.alpha, theta)));
            ASSERT_LT(aligned_distance(sse, StateVector(3, amps)), 2 * theta * theta);
        }
        ASSERT_THROW(sse_step_first_order(s, {{1, 2}, c}, {1.0, 0.1}, {1, +1}), InvalidOutcome);
    }
}

TEST(weak_measurement, sse_converges_quadratically_to_kraus) {
    // Distance between the no-jump SSE and exact post-states shrinks at
    // least about fourfold per halving of J dt; exactly fourfold for (Z,Z)
    // detectors, where the leading term is a fixed second-order operator.
    Rng rng(39);
    for (size_t t = 0; t < 72; t++) {
        StateVector s = random_state(4, rng);
        PairCoupling pc{random_pair(4, rng), coupling_family()[t % NUM_COUPLINGS]};
        for (int eta : {+1, -1}) {
            std::array<double, 3> d{};
            std::array<double, 3> thetas{0.04, 0.02, 0.01};
            for (size_t k = 0; k < 3; k++) {
                StepParams p{1.0, thetas[k]};
                StateVector exact = apply_kraus(s, kraus_set(pc, p), {0, eta});
                exact.normalize();
                d[k] = aligned_distance(exact, sse_step_first_order(s, pc, p, {0, eta}));
            }
            if (d[2] < 1e-13) {
                // Agreement beyond rounding, e.g. when the pair is in an
                // eigenstate of the steering operators.
                continue;
            }
            ASSERT_GT(d[0] / d[1], 3.0) << to_string(pc.choice) << " " << d[0] << " " << d[1] << " " << d[2];
            ASSERT_GT(d[1] / d[2], 3.0) << to_string(pc.choice) << " " << d[0] << " " << d[1] << " " << d[2];
            if (both_z(pc.choice)) {
                ASSERT_NEAR(d[1] / d[2], 4.0, 0.3) << to_string(pc.choice);
            }
        }
    }
}

TEST(weak_measurement, step_params_validation) {
    ASSERT_THROW((StepParams{1.0, 0.0}.validate()), std::invalid_argument);
    ASSERT_THROW((StepParams{1.0, -0.1}.validate()), std::invalid_argument);
    ASSERT_NO_THROW((StepParams{1.0, 0.2}.validate()));
    ASSERT_TRUE((StepParams{1.0, 0.2}.weak_regime()));
    ASSERT_FALSE((StepParams{1.0, 0.8}.weak_regime()));
}
