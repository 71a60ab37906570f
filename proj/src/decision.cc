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

#include "qsteer/decision.h"

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace qsteer;

namespace {

/// Outcomes with smaller probability do not contribute to expected costs.
constexpr double PROBABILITY_FLOOR = 1e-14;

double expectation(const Matrix4c &op, const Matrix4c &gram) {
    return op.cwiseProduct(gram).sum().real();
}

/// H(k, l) = sum_ij a(i, j) g(i + 2k, j + 2l): contracts the first-qubit
/// factor of a pair operator a (x) b against g.
Matrix2c contract_first(const Matrix2c &a, const Matrix4c &g) {
    Matrix2c h;
    for (int k = 0; k < 2; k++) {
        for (int l = 0; l < 2; l++) {
            h(k, l) = a(0, 0) * g(2 * k, 2 * l) + a(0, 1) * g(2 * k, 1 + 2 * l) + a(1, 0) * g(1 + 2 * k, 2 * l) +
                      a(1, 1) * g(1 + 2 * k, 1 + 2 * l);
        }
    }
    return h;
}

Complex contract_second(const Matrix2c &b, const Matrix2c &h) {
    return b(0, 0) * h(0, 0) + b(0, 1) * h(0, 1) + b(1, 0) * h(1, 0) + b(1, 1) * h(1, 1);
}

double levi_civita(size_t a, size_t b, size_t c) {
    if (a == b || b == c || a == c) {
        return 0;
    }
    return ((b + 3 - a) % 3 == 1) ? 1.0 : -1.0;
}

double cost_term(const CostMode &mode, double p, double fq_post) {
    if (mode.kind == CostMode::Kind::MaximizeQfi) {
        return p * fq_post;
    }
    return p * std::abs(fq_post - mode.f_star);
}

double finish_score(const CostMode &mode, double expected_term, double fq_pre) {
    if (mode.kind == CostMode::Kind::MaximizeQfi) {
        return expected_term - fq_pre;
    }
    return -(expected_term - std::abs(fq_pre - mode.f_star));
}

void check_pair(QubitPair pair, size_t num_qubits) {
    if (pair.first == pair.second || pair.first >= num_qubits || pair.second >= num_qubits) {
        throw std::invalid_argument("invalid qubit pair for decision");
    }
}

}  // namespace

CostMode CostMode::target(double f_star) {
    if (!(f_star >= 0) || !std::isfinite(f_star)) {
        throw std::invalid_argument("target QFI must be finite and nonnegative");
    }
    return {Kind::TargetQfi, f_star};
}

const std::array<Steering, 6> &qsteer::steering_options() {
    static const std::array<Steering, 6> options{{
        {PauliAxis::X, DetectorAxis::X},
        {PauliAxis::X, DetectorAxis::Z},
        {PauliAxis::Y, DetectorAxis::X},
        {PauliAxis::Y, DetectorAxis::Z},
        {PauliAxis::Z, DetectorAxis::X},
        {PauliAxis::Z, DetectorAxis::Z},
    }};
    return options;
}

const std::array<CouplingChoice, NUM_COUPLINGS> &qsteer::coupling_family() {
    static const std::array<CouplingChoice, NUM_COUPLINGS> family = [] {
        std::array<CouplingChoice, NUM_COUPLINGS> out;
        const auto &opts = steering_options();
        for (size_t f = 0; f < 6; f++) {
            for (size_t s = 0; s < 6; s++) {
                out[6 * f + s] = {opts[f], opts[s]};
            }
        }
        return out;
    }();
    return family;
}

double qsteer::expected_cost_change_exact(
    const StateVector &state,
    const CollectiveObservable &obs,
    const PairCoupling &coupling,
    const StepParams &params,
    const CostMode &mode) {
    KrausSet kraus = kraus_set(coupling, params);
    auto p = outcome_probabilities(state, kraus);
    double expected = 0;
    for (size_t k = 0; k < 4; k++) {
        if (p[k] <= PROBABILITY_FLOOR) {
            continue;
        }
        StateVector post = apply_kraus(state, kraus, BellOutcome::from_index(k));
        post.normalize();
        expected += cost_term(mode, p[k], qfi(post, obs));
    }
    return finish_score(mode, expected, qfi(state, obs));
}

PairMoments qsteer::pair_moments(
    const StateVector &state, std::span<const Complex> obs_psi, const CollectiveObservable &obs, QubitPair pair) {
    check_pair(pair, state.num_qubits());
    if (obs_psi.size() != state.dim() || obs.num_qubits() != state.num_qubits()) {
        throw std::invalid_argument("pair_moments: dimension mismatch");
    }
    PairMoments m;
    m.pair = pair;
    m.obs_first = obs.local_matrix(pair.first);
    m.obs_second = obs.local_matrix(pair.second);
    const Matrix2c id = Matrix2c::Identity();
    const Matrix4c pair_obs = 0.5 * (pair_kron(m.obs_first, id) + pair_kron(id, m.obs_second));
    Complex p[4][4];
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            p[a][b] = pair_obs(a, b);
        }
    }

    Complex g0[4][4] = {}, g1[4][4] = {}, g2[4][4] = {};
    auto psi = state.amplitudes();
    for_each_pair_block(state.num_qubits(), pair, [&](size_t i0, size_t i1, size_t i2, size_t i3) {
        const size_t idx[4] = {i0, i1, i2, i3};
        Complex v[4], rest[4];
        for (int a = 0; a < 4; a++) {
            v[a] = psi[idx[a]];
        }
        for (int a = 0; a < 4; a++) {
            rest[a] = obs_psi[idx[a]] - (p[a][0] * v[0] + p[a][1] * v[1] + p[a][2] * v[2] + p[a][3] * v[3]);
        }
        for (int a = 0; a < 4; a++) {
            const Complex cv = std::conj(v[a]);
            const Complex cr = std::conj(rest[a]);
            for (int b = 0; b < 4; b++) {
                g0[a][b] += cv * v[b];
                g1[a][b] += cv * rest[b];
                g2[a][b] += cr * rest[b];
            }
        }
    });
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            m.g[0](a, b) = g0[a][b];
            m.g[1](a, b) = g1[a][b];
            m.g[2](a, b) = g2[a][b];
        }
    }
    return m;
}

double qsteer::moments_qfi(const PairMoments &m) {
    const Matrix2c id = Matrix2c::Identity();
    const Matrix4c pf = pair_kron(m.obs_first, id);
    const Matrix4c ps = pair_kron(id, m.obs_second);
    const Matrix4c pp = pair_kron(m.obs_first, m.obs_second);
    const double norm = m.g[0].trace().real();
    const double mean = 0.5 * (expectation(pf, m.g[0]) + expectation(ps, m.g[0])) + m.g[1].trace().real();
    const double second = 0.5 * (norm + expectation(pp, m.g[0])) + expectation(pf, m.g[1]) +
                          expectation(ps, m.g[1]) + m.g[2].trace().real();
    return 4 * (second / norm - (mean / norm) * (mean / norm));
}

std::array<double, NUM_COUPLINGS> qsteer::exact_scores(
    const PairMoments &m, const StepParams &params, const CostMode &mode) {
    params.validate();
    const double theta = params.theta();
    const auto &options = steering_options();
    const Matrix2c id = Matrix2c::Identity();

    // A product Kraus operator sum_t w_t A_f^{t_f} (x) A_s^{t_s} turns every
    // needed expectation into sums of <(A_f^dag x A_f') (x) (A_s^dag y A_s')>_g.
    // The first-qubit factor is contracted against g once per steering option.
    struct FirstSide {
        // [d][d'][slot], slots: (1, g0), (p, g0), (1, g1), (p, g1), (1, g2).
        Matrix2c h[2][2][5];
        bool nonzero[2];
    };
    struct SecondSide {
        // [d][d'][slot], slots: 1, p.
        Matrix2c b[2][2][2];
        bool nonzero[2];
    };
    std::array<FirstSide, 6> first;
    std::array<SecondSide, 6> second;
    for (size_t k = 0; k < 6; k++) {
        auto branches = detector_branches(options[k], theta);
        const Matrix2c sigma = pauli_matrix(options[k].alpha);
        Matrix2c a[2];
        bool nonzero[2];
        for (int d = 0; d < 2; d++) {
            a[d] = branches[d].identity * id + branches[d].pauli * sigma;
            nonzero[d] = branches[d].identity != Complex{0, 0} || branches[d].pauli != Complex{0, 0};
            first[k].nonzero[d] = nonzero[d];
            second[k].nonzero[d] = nonzero[d];
        }
        for (int d = 0; d < 2; d++) {
            for (int e = 0; e < 2; e++) {
                if (!nonzero[d] || !nonzero[e]) {
                    continue;
                }
                const Matrix2c fi = a[d].adjoint() * a[e];
                const Matrix2c fp = a[d].adjoint() * m.obs_first * a[e];
                first[k].h[d][e][0] = contract_first(fi, m.g[0]);
                first[k].h[d][e][1] = contract_first(fp, m.g[0]);
                first[k].h[d][e][2] = contract_first(fi, m.g[1]);
                first[k].h[d][e][3] = contract_first(fp, m.g[1]);
                first[k].h[d][e][4] = contract_first(fi, m.g[2]);
                second[k].b[d][e][0] = fi;
                second[k].b[d][e][1] = a[d].adjoint() * m.obs_second * a[e];
            }
        }
    }

    const double fq_pre = moments_qfi(m);
    // Detector branch pairs (first, second) selected by each Bell parity.
    static constexpr int TERMS[2][2][2] = {{{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}};

    std::array<double, NUM_COUPLINGS> scores{};
    for (size_t kf = 0; kf < 6; kf++) {
        for (size_t ks = 0; ks < 6; ks++) {
            double expected = 0;
            for (int xi = 0; xi < 2; xi++) {
                Complex diag[8] = {}, off[8] = {};
                for (int t = 0; t < 2; t++) {
                    for (int u = 0; u < 2; u++) {
                        const int df = TERMS[xi][t][0], ds = TERMS[xi][t][1];
                        const int ef = TERMS[xi][u][0], es = TERMS[xi][u][1];
                        if (!first[kf].nonzero[df] || !first[kf].nonzero[ef] || !second[ks].nonzero[ds] ||
                            !second[ks].nonzero[es]) {
                            continue;
                        }
                        const auto &h = first[kf].h[df][ef];
                        const auto &b = second[ks].b[ds][es];
                        const Complex v[8] = {
                            contract_second(b[0], h[0]),  // <1 (x) 1>_0
                            contract_second(b[0], h[1]),  // <p (x) 1>_0
                            contract_second(b[1], h[0]),  // <1 (x) p>_0
                            contract_second(b[1], h[1]),  // <p (x) p>_0
                            contract_second(b[0], h[2]),  // <1 (x) 1>_1
                            contract_second(b[0], h[3]),  // <p (x) 1>_1
                            contract_second(b[1], h[2]),  // <1 (x) p>_1
                            contract_second(b[0], h[4]),  // <1 (x) 1>_2
                        };
                        Complex *dst = (t == u) ? diag : off;
                        for (int j = 0; j < 8; j++) {
                            dst[j] += v[j];
                        }
                    }
                }
                for (int eta : {+1, -1}) {
                    double q[8];
                    for (int j = 0; j < 8; j++) {
                        q[j] = 0.5 * (diag[j] + static_cast<double>(eta) * off[j]).real();
                    }
                    const double p = q[0];
                    if (p <= PROBABILITY_FLOOR) {
                        continue;
                    }
                    const double mean = 0.5 * (q[1] + q[2]) + q[4];
                    const double sq = 0.5 * (q[0] + q[3]) + q[5] + q[6] + q[7];
                    const double fq_post = 4 * (sq - mean * mean / p) / p;
                    expected += cost_term(mode, p, fq_post);
                }
            }
            scores[6 * kf + ks] = finish_score(mode, expected, fq_pre);
        }
    }
    return scores;
}

PairCorrelators qsteer::pair_correlators(const Correlators &corr, const CollectiveObservable &obs, QubitPair pair) {
    const size_t n = corr.num_qubits;
    check_pair(pair, n);
    if (obs.num_qubits() != n) {
        throw std::invalid_argument("observable and correlators have different qubit counts");
    }
    PairCorrelators p;
    p.pair = pair;
    for (size_t q = 0; q < n; q++) {
        for (size_t mu = 0; mu < 3; mu++) {
            p.mean += obs.direction(q)[mu] * corr.R(q, mu);
        }
    }
    const size_t members[2] = {pair.first, pair.second};
    for (size_t i = 0; i < 2; i++) {
        const size_t q = members[i];
        for (size_t g = 0; g < 3; g++) {
            p.bloch[i][g] = corr.R(q, g);
            for (size_t l = 0; l < n; l++) {
                if (l == q) {
                    continue;
                }
                for (size_t nu = 0; nu < 3; nu++) {
                    p.field[i][g] += corr.Q(q, l, g, nu) * obs.direction(l)[nu];
                }
            }
        }
    }
    for (size_t a = 0; a < 3; a++) {
        for (size_t b = 0; b < 3; b++) {
            p.pair_corr[a][b] = corr.Q(pair.first, pair.second, a, b);
        }
    }
    p.fq = qfi_from_correlators(corr, obs);
    return p;
}

PairCorrelators qsteer::pair_correlators(
    const Matrix4c &gram,
    const Matrix4c &cross_gram,
    double mean,
    const CollectiveObservable &obs,
    QubitPair pair,
    double fq) {
    check_pair(pair, obs.num_qubits());
    PairCorrelators p;
    p.pair = pair;
    // O psi carries the spin factor 1/2; the estimator works with sum s . sigma.
    p.mean = 2 * mean;
    p.fq = fq;
    const Matrix2c id = Matrix2c::Identity();
    const std::array<Matrix2c, 3> paulis{
        pauli_matrix(PauliAxis::X), pauli_matrix(PauliAxis::Y), pauli_matrix(PauliAxis::Z)};
    const size_t members[2] = {pair.first, pair.second};
    for (size_t i = 0; i < 2; i++) {
        for (size_t g = 0; g < 3; g++) {
            const Matrix4c op = i == 0 ? pair_kron(paulis[g], id) : pair_kron(id, paulis[g]);
            p.bloch[i][g] = op.cwiseProduct(gram).sum().real();
            // Re <psi|sigma_q^g O|psi> = field + s_q^g; the on-site part
            // of the product contributes only an imaginary cross term.
            p.field[i][g] = 2 * op.cwiseProduct(cross_gram).sum().real() - obs.direction(members[i])[g];
        }
    }
    for (size_t a = 0; a < 3; a++) {
        for (size_t b = 0; b < 3; b++) {
            p.pair_corr[a][b] = pair_kron(paulis[a], paulis[b]).cwiseProduct(gram).sum().real();
        }
    }
    return p;
}

double qsteer::expected_qfi_change_correlator(
    const Correlators &corr,
    const CollectiveObservable &obs,
    const PairCoupling &coupling,
    const StepParams &params,
    const EstimatorOptions &options) {
    return expected_qfi_change_correlator(
        pair_correlators(corr, obs, coupling.pair), obs, coupling.choice, params, options);
}

double qsteer::expected_qfi_change_correlator(
    const PairCorrelators &corr,
    const CollectiveObservable &obs,
    const CouplingChoice &choice,
    const StepParams &params,
    const EstimatorOptions &options) {
    params.validate();
    const double theta = params.theta();
    const double rate = params.j_coupling * params.j_coupling * params.dt;  // <c^dag c> scale
    const double gamma = rate * options.gamma_scale;

    // Heisenberg-picture first-order generator on a steered qubit:
    // sigma^mu -> sum_g t[mu][g] sigma^g. A z-detector gives the unitary
    // rotation i theta [sigma^alpha, .]; an x-detector dephases the axes
    // orthogonal to alpha at rate 2 Gamma.
    using Mat3 = std::array<std::array<double, 3>, 3>;
    auto generator = [&](const Steering &k) {
        Mat3 t{};
        const size_t alpha = static_cast<size_t>(k.alpha);
        for (size_t mu = 0; mu < 3; mu++) {
            if (k.beta == DetectorAxis::Z) {
                for (size_t g = 0; g < 3; g++) {
                    t[mu][g] = -2 * theta * levi_civita(alpha, mu, g);
                }
            } else if (mu != alpha) {
                t[mu][mu] = -2 * gamma * params.dt;
            }
        }
        return t;
    };
    const size_t qf = corr.pair.first;
    const size_t qs = corr.pair.second;
    const Mat3 tf = generator(choice.first);
    const Mat3 ts = generator(choice.second);

    const double s_r = corr.mean;
    // Only the steered qubits have a nonzero generator, and Q_kl^{mu nu} =
    // Q_lk^{nu mu}, so sum_{k != l} s_k s_l dQ_kl = 2 sum_{q steered} s_q . T_q w_q
    // with w_q^g = sum_{l != q} sum_nu Q_ql^{g nu} s_l^nu.
    double s_dr = 0;
    double s_dq = 0;
    for (size_t i = 0; i < 2; i++) {
        const size_t q = i == 0 ? qf : qs;
        const Mat3 &t = i == 0 ? tf : ts;
        const auto &w = corr.field[i];
        const auto &r = corr.bloch[i];
        for (size_t mu = 0; mu < 3; mu++) {
            for (size_t g = 0; g < 3; g++) {
                s_dr += obs.direction(q)[mu] * t[mu][g] * r[g];
                s_dq += 2 * obs.direction(q)[mu] * t[mu][g] * w[g];
            }
        }
    }

    // Jump contribution: -2 dt sum_eta (sum s . G^eta)^2 / <c_eta^dag c_eta>.
    const double a = choice.first.beta == DetectorAxis::X ? 1 : 0;
    const double b = choice.second.beta == DetectorAxis::X ? 1 : 0;
    const size_t af = static_cast<size_t>(choice.first.alpha);
    const size_t as = static_cast<size_t>(choice.second.alpha);
    const double q_pair = corr.pair_corr[af][as];
    double jump = 0;
    for (int eta : {+1, -1}) {
        const double cc = a + b + 2 * eta * a * b * q_pair;
        if (cc <= 1e-14) {
            continue;
        }
        double s_g = 0;
        for (size_t mu = 0; mu < 3; mu++) {
            const double gf = -gamma * a * (mu != af ? 1 : 0) * corr.bloch[0][mu] +
                              eta * gamma * a * b * ((mu == af ? corr.bloch[1][as] : 0) - q_pair * corr.bloch[0][mu]);
            const double gs = -gamma * b * (mu != as ? 1 : 0) * corr.bloch[1][mu] +
                              eta * gamma * a * b * ((mu == as ? corr.bloch[0][af] : 0) - q_pair * corr.bloch[1][mu]);
            s_g += obs.direction(qf)[mu] * gf + obs.direction(qs)[mu] * gs;
        }
        jump += s_g * s_g / (rate * cc);
    }
    return s_dq - 2 * s_dr * s_r - 2 * params.dt * jump;
}

std::array<double, NUM_COUPLINGS> qsteer::correlator_scores(
    const Correlators &corr,
    const CollectiveObservable &obs,
    QubitPair pair,
    const StepParams &params,
    const CostMode &mode,
    const EstimatorOptions &options) {
    return correlator_scores(pair_correlators(corr, obs, pair), obs, params, mode, options);
}

std::array<double, NUM_COUPLINGS> qsteer::correlator_scores(
    const PairCorrelators &corr,
    const CollectiveObservable &obs,
    const StepParams &params,
    const CostMode &mode,
    const EstimatorOptions &options) {
    std::array<double, NUM_COUPLINGS> scores{};
    const auto &family = coupling_family();
    for (size_t k = 0; k < NUM_COUPLINGS; k++) {
        double dfq = expected_qfi_change_correlator(corr, obs, family[k], params, options);
        if (mode.kind == CostMode::Kind::MaximizeQfi) {
            scores[k] = dfq;
        } else {
            scores[k] = -(std::abs(corr.fq + dfq - mode.f_star) - std::abs(corr.fq - mode.f_star));
        }
    }
    return scores;
}

size_t qsteer::select_best(std::span<const double> scores, Rng &rng, double tie_tolerance, size_t *tie_count) {
    if (scores.empty()) {
        throw std::invalid_argument("select_best: no scores");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (double s : scores) {
        if (std::isnan(s)) {
            throw std::domain_error("select_best: NaN score");
        }
        best = std::max(best, s);
    }
    std::array<size_t, 64> tied_small;
    std::vector<size_t> tied_large;
    size_t count = 0;
    for (size_t k = 0; k < scores.size(); k++) {
        if (scores[k] >= best - tie_tolerance) {
            if (count < tied_small.size()) {
                tied_small[count] = k;
            } else {
                if (tied_large.empty()) {
                    tied_large.assign(tied_small.begin(), tied_small.end());
                }
                tied_large.push_back(k);
            }
            count++;
        }
    }
    if (tie_count) {
        *tie_count = count;
    }
    if (count == 1) {
        return tied_small[0];
    }
    size_t pick = rng.below(count);
    return count <= tied_small.size() ? tied_small[pick] : tied_large[pick];
}

DecisionReport qsteer::report_from_scores(
    const std::array<double, NUM_COUPLINGS> &scores, DecisionMethod method, Rng &rng) {
    DecisionReport report;
    report.scores = scores;
    report.method = method;
    report.chosen_index = select_best(scores, rng, TIE_TOLERANCE, &report.tie_count);
    report.chosen = coupling_family()[report.chosen_index];
    double runner_up = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < NUM_COUPLINGS; k++) {
        if (k != report.chosen_index) {
            runner_up = std::max(runner_up, scores[k]);
        }
    }
    report.gap = std::max(0.0, scores[report.chosen_index] - runner_up);
    return report;
}

DecisionReport qsteer::choose_coupling(
    const StateVector &state,
    const CollectiveObservable &obs,
    QubitPair pair,
    const StepParams &params,
    const CostMode &mode,
    DecisionMethod method,
    Rng &rng,
    const EstimatorOptions &options) {
    check_pair(pair, state.num_qubits());
    std::array<double, NUM_COUPLINGS> scores;
    if (method == DecisionMethod::Exact) {
        auto obs_psi = apply_observable(state, obs);
        scores = exact_scores(pair_moments(state, obs_psi, obs, pair), params, mode);
    } else {
        scores = correlator_scores(correlators(state), obs, pair, params, mode, options);
    }
    return report_from_scores(scores, method, rng);
}
