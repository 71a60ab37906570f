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

#include "qsteer/cli/run_spec.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace qsteer;
using namespace qsteer::cli;

SpecError::SpecError(size_t line, const std::string &message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {
}

std::string qsteer::cli::format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

/// Thrown by value parsers; converted to SpecError with the line number.
struct BadValue {
    std::string why;
};

std::string trim(const std::string &s) {
    const char *ws = " \t\r";
    size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) {
        return "";
    }
    size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string &v) {
    double out;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw BadValue{"expected a finite number, got '" + v + "'"};
    }
    return out;
}

uint64_t parse_u64(const std::string &v) {
    uint64_t out;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw BadValue{"expected a nonnegative integer, got '" + v + "'"};
    }
    return out;
}

size_t parse_size(const std::string &v) {
    return static_cast<size_t>(parse_u64(v));
}

bool parse_bool(const std::string &v) {
    if (v == "true" || v == "1") {
        return true;
    }
    if (v == "false" || v == "0") {
        return false;
    }
    throw BadValue{"expected true or false, got '" + v + "'"};
}

std::vector<std::string> split_commas(const std::string &v) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        parts.push_back(trim(item));
    }
    return parts;
}

template <typename Enum>
Enum parse_choice(const std::string &v, const std::vector<std::pair<std::string, Enum>> &choices) {
    for (const auto &[name, value] : choices) {
        if (name == v) {
            return value;
        }
    }
    std::string names;
    for (const auto &c : choices) {
        names += (names.empty() ? "" : ", ") + c.first;
    }
    throw BadValue{"expected one of " + names + ", got '" + v + "'"};
}

template <typename Enum>
std::string choice_name(Enum value, const std::vector<std::pair<std::string, Enum>> &choices) {
    for (const auto &[name, v] : choices) {
        if (v == value) {
            return name;
        }
    }
    throw std::logic_error("unnamed enum value");
}

const std::vector<std::pair<std::string, CostMode::Kind>> MODES = {
    {"max-qfi", CostMode::Kind::MaximizeQfi}, {"target-qfi", CostMode::Kind::TargetQfi}};
const std::vector<std::pair<std::string, PairingMode>> PAIRINGS = {
    {"nn-random", PairingMode::NearestNeighborRandom},
    {"nn-alternating", PairingMode::NearestNeighborAlternating},
    {"full-random", PairingMode::FullyConnectedRandom}};
const std::vector<std::pair<std::string, DecisionMethod>> METHODS = {
    {"correlator", DecisionMethod::Correlator}, {"exact", DecisionMethod::Exact}};
const std::vector<std::pair<std::string, Propagation>> PROPAGATIONS = {
    {"sse", Propagation::Sse}, {"kraus", Propagation::Kraus}};
const std::vector<std::pair<std::string, UpdateOrder>> ORDERS = {
    {"sequential", UpdateOrder::Sequential}, {"frozen", UpdateOrder::Frozen}};
const std::vector<std::pair<std::string, TerminationKind>> TERMINATIONS = {
    {"fixed", TerminationKind::Fixed},
    {"qfi-threshold", TerminationKind::QfiThreshold},
    {"phase-window", TerminationKind::PhaseWindow}};

struct Field {
    std::string key;
    std::function<void(RunSpec &, const std::string &)> parse;
    /// nullopt: key omitted from the canonical text.
    std::function<std::optional<std::string>(const RunSpec &)> emit;
};

template <typename Enum>
Field choice_field(const std::string &key, Enum RunSpec::*member, const std::vector<std::pair<std::string, Enum>> &choices) {
    return {
        key,
        [member, &choices](RunSpec &s, const std::string &v) { s.*member = parse_choice(v, choices); },
        [member, &choices](const RunSpec &s) -> std::optional<std::string> { return choice_name(s.*member, choices); },
    };
}

Field double_field(const std::string &key, double RunSpec::*member) {
    return {
        key,
        [member](RunSpec &s, const std::string &v) { s.*member = parse_double(v); },
        [member](const RunSpec &s) -> std::optional<std::string> { return format_double(s.*member); },
    };
}

Field size_field(const std::string &key, size_t RunSpec::*member) {
    return {
        key,
        [member](RunSpec &s, const std::string &v) { s.*member = parse_size(v); },
        [member](const RunSpec &s) -> std::optional<std::string> { return std::to_string(s.*member); },
    };
}

Field bool_field(const std::string &key, bool RunSpec::*member) {
    return {
        key,
        [member](RunSpec &s, const std::string &v) { s.*member = parse_bool(v); },
        [member](const RunSpec &s) -> std::optional<std::string> { return s.*member ? "true" : "false"; },
    };
}

const std::vector<Field> &fields() {
    static const std::vector<Field> table = {
        {"n_qubits",
         [](RunSpec &s, const std::string &v) { s.n_qubits = parse_size(v); },
         [](const RunSpec &s) -> std::optional<std::string> {
             return s.n_qubits ? std::optional(std::to_string(*s.n_qubits)) : std::nullopt;
         }},
        double_field("j_coupling", &RunSpec::j_coupling),
        double_field("jdt", &RunSpec::jdt),
        choice_field("mode", &RunSpec::mode, MODES),
        {"f_star",
         [](RunSpec &s, const std::string &v) { s.f_star = parse_double(v); },
         [](const RunSpec &s) -> std::optional<std::string> {
             return s.f_star ? std::optional(format_double(*s.f_star)) : std::nullopt;
         }},
        {"dicke_k",
         [](RunSpec &s, const std::string &v) { s.dicke_k = parse_size(v); },
         [](const RunSpec &s) -> std::optional<std::string> {
             return s.dicke_k ? std::optional(std::to_string(*s.dicke_k)) : std::nullopt;
         }},
        choice_field("pairing", &RunSpec::pairing, PAIRINGS),
        choice_field("method", &RunSpec::method, METHODS),
        choice_field("propagation", &RunSpec::propagation, PROPAGATIONS),
        choice_field("update_order", &RunSpec::update_order, ORDERS),
        size_field("steps", &RunSpec::steps),
        size_field("trajectories", &RunSpec::trajectories),
        {"seed",
         [](RunSpec &s, const std::string &v) { s.seed = parse_u64(v); },
         [](const RunSpec &s) -> std::optional<std::string> { return std::to_string(s.seed); }},
        choice_field("termination", &RunSpec::termination, TERMINATIONS),
        double_field("threshold", &RunSpec::threshold),
        double_field("phase_center", &RunSpec::phase_center),
        double_field("phase_halfwidth", &RunSpec::phase_halfwidth),
        size_field("phase_bins", &RunSpec::phase_bins),
        bool_field("purity", &RunSpec::purity),
        size_field("purity_limit", &RunSpec::purity_limit),
        {"observable",
         [](RunSpec &s, const std::string &v) {
             auto parts = split_commas(v);
             if (parts.size() != 3) {
                 throw BadValue{"expected three comma-separated components, got '" + v + "'"};
             }
             Direction d;
             for (size_t k = 0; k < 3; k++) {
                 d[k] = parse_double(parts[k]);
             }
             if (d[0] == 0 && d[1] == 0 && d[2] == 0) {
                 throw BadValue{"observable direction must be nonzero"};
             }
             s.observable = d;
         },
         [](const RunSpec &s) -> std::optional<std::string> {
             return format_double(s.observable[0]) + "," + format_double(s.observable[1]) + "," +
                    format_double(s.observable[2]);
         }},
        double_field("convergence_fraction", &RunSpec::convergence_fraction),
        {"n_list",
         [](RunSpec &s, const std::string &v) {
             s.n_list.clear();
             for (const auto &part : split_commas(v)) {
                 s.n_list.push_back(parse_size(part));
             }
             if (s.n_list.empty()) {
                 throw BadValue{"n_list must not be empty"};
             }
         },
         [](const RunSpec &s) -> std::optional<std::string> {
             if (s.n_list.empty()) {
                 return std::nullopt;
             }
             std::string out;
             for (size_t n : s.n_list) {
                 out += (out.empty() ? "" : ",") + std::to_string(n);
             }
             return out;
         }},
        size_field("log_trajectories", &RunSpec::log_trajectories),
        bool_field("track_phase", &RunSpec::track_phase),
    };
    return table;
}

/// Single-field range checks, reported against the field's line.
void check_field(const RunSpec &s, const std::string &key) {
    auto fail = [](const std::string &why) { throw BadValue{why}; };
    if (key == "n_qubits" && s.n_qubits && (*s.n_qubits < 2 || *s.n_qubits > MAX_QUBITS)) {
        fail("n_qubits must lie in [2, " + std::to_string(MAX_QUBITS) + "]");
    }
    if (key == "j_coupling" && !(s.j_coupling > 0)) {
        fail("j_coupling must be positive");
    }
    if (key == "jdt" && !(s.jdt > 0)) {
        fail("jdt must be positive");
    }
    if (key == "f_star" && s.f_star && *s.f_star < 0) {
        fail("f_star must be nonnegative");
    }
    if (key == "steps" && s.steps < 1) {
        fail("steps must be at least 1");
    }
    if (key == "trajectories" && s.trajectories < 1) {
        fail("trajectories must be at least 1");
    }
    if ((key == "threshold" && !(s.threshold > 0 && s.threshold <= 1)) ||
        (key == "convergence_fraction" && !(s.convergence_fraction > 0 && s.convergence_fraction <= 1))) {
        fail(key + " must lie in (0, 1]");
    }
    if (key == "phase_halfwidth" && !(s.phase_halfwidth > 0)) {
        fail("phase_halfwidth must be positive");
    }
    if (key == "phase_bins" && s.phase_bins < 2) {
        fail("phase_bins must be at least 2");
    }
    if (key == "n_list") {
        for (size_t n : s.n_list) {
            if (n < 2 || n > MAX_QUBITS) {
                fail("n_list entries must lie in [2, " + std::to_string(MAX_QUBITS) + "]");
            }
        }
    }
}

}  // namespace

const std::vector<std::string> &qsteer::cli::run_spec_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto &f : fields()) {
            out.push_back(f.key);
        }
        return out;
    }();
    return keys;
}

RunSpec qsteer::cli::parse_run_spec(const std::string &text) {
    RunSpec spec;
    std::map<std::string, size_t> seen;
    std::istringstream in(text);
    std::string raw;
    size_t line_no = 0;
    while (std::getline(in, raw)) {
        line_no++;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw SpecError(line_no, "expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const Field *field = nullptr;
        for (const auto &f : fields()) {
            if (f.key == key) {
                field = &f;
            }
        }
        if (!field) {
            throw SpecError(line_no, "unknown key '" + key + "'");
        }
        if (seen.count(key)) {
            throw SpecError(line_no, "key '" + key + "' already set on line " + std::to_string(seen[key]));
        }
        seen[key] = line_no;
        try {
            field->parse(spec, value);
            check_field(spec, key);
        } catch (const BadValue &e) {
            throw SpecError(line_no, "invalid value for '" + key + "': " + e.why);
        }
    }
    auto line_of = [&](const std::string &key) { return seen.count(key) ? seen[key] : 0; };
    if (spec.mode == CostMode::Kind::TargetQfi && !spec.f_star && !spec.dicke_k) {
        throw SpecError(line_of("mode"), "mode=target-qfi needs f_star or dicke_k");
    }
    if (spec.f_star && spec.dicke_k) {
        throw SpecError(line_of("dicke_k"), "set only one of f_star and dicke_k");
    }
    if (spec.n_qubits && spec.dicke_k && *spec.dicke_k > *spec.n_qubits) {
        throw SpecError(line_of("dicke_k"), "dicke_k exceeds n_qubits");
    }
    if (spec.purity && spec.n_qubits && *spec.n_qubits > spec.purity_limit) {
        throw SpecError(line_of("purity"), "purity accumulation is limited to " + std::to_string(spec.purity_limit) + " qubits");
    }
    return spec;
}

RunSpec qsteer::cli::load_run_spec(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SpecError(0, "cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_spec(buf.str());
}

std::string qsteer::cli::emit_run_spec(const RunSpec &spec) {
    std::string out;
    for (const auto &f : fields()) {
        if (auto v = f.emit(spec)) {
            out += f.key + "=" + *v + "\n";
        }
    }
    return out;
}

void qsteer::cli::validate_for(const RunSpec &spec, size_t n_qubits) {
    if (n_qubits < 2 || n_qubits > MAX_QUBITS) {
        throw SpecError(0, "n_qubits must lie in [2, " + std::to_string(MAX_QUBITS) + "]");
    }
    if (spec.dicke_k && *spec.dicke_k > n_qubits) {
        throw SpecError(0, "dicke_k exceeds n_qubits=" + std::to_string(n_qubits));
    }
    if (spec.purity && n_qubits > spec.purity_limit) {
        throw SpecError(0, "purity accumulation is limited to " + std::to_string(spec.purity_limit) + " qubits");
    }
}

ProtocolConfig qsteer::cli::protocol_config(const RunSpec &spec, size_t n_qubits) {
    validate_for(spec, n_qubits);
    ProtocolConfig c;
    c.n_qubits = n_qubits;
    c.params = {spec.j_coupling, spec.jdt / spec.j_coupling};
    if (spec.mode == CostMode::Kind::TargetQfi) {
        c.mode = CostMode::target(spec.dicke_k ? dicke_target_qfi(n_qubits, *spec.dicke_k) : *spec.f_star);
    }
    c.pairing = spec.pairing;
    c.decision_method = spec.method;
    c.propagation = spec.propagation;
    c.update_order = spec.update_order;
    c.max_steps = spec.steps;
    c.seed = spec.seed;
    switch (spec.termination) {
        case TerminationKind::Fixed:
            c.termination = FixedSteps{};
            break;
        case TerminationKind::QfiThreshold:
            c.termination = QfiThreshold{spec.threshold};
            break;
        case TerminationKind::PhaseWindow:
            c.termination = PhaseWindow{spec.phase_center, spec.phase_halfwidth, spec.threshold};
            break;
    }
    c.track_phase = spec.track_phase;
    c.validate();
    return c;
}

CollectiveObservable qsteer::cli::make_observable(const RunSpec &spec, size_t n_qubits) {
    return uniform_observable(n_qubits, spec.observable);
}

EnsembleOptions qsteer::cli::ensemble_options(const RunSpec &spec, size_t workers) {
    EnsembleOptions o;
    o.n_traj = spec.trajectories;
    o.workers = workers;
    o.purity = spec.purity;
    o.purity_limit = spec.purity_limit;
    o.phase_bins = spec.phase_bins;
    o.convergence_fraction = spec.convergence_fraction;
    o.keep_records = spec.log_trajectories;
    return o;
}
