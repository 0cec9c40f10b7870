// Copyright 2026 The QEM Toolkit Authors
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

#include "qem/cli/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qem/core/gates.hpp"

namespace qem::cli {

using nlohmann::json;

namespace {

// Typed access to one JSON object, with unknown keys rejected up front.
class Fields {
   public:
    Fields(const json &j, std::string where, std::initializer_list<const char *> allowed) : j_(j), where_(std::move(where)) {
        if (!j.is_object()) {
            fail("expected an object");
        }
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto &item : j.items()) {
            if (!ok.count(item.key())) {
                fail("unknown key '" + item.key() + "'");
            }
        }
    }

    bool has(const char *key) const {
        return j_.contains(key);
    }
    const json &at(const char *key) const {
        if (!has(key)) {
            fail(std::string("missing key '") + key + "'");
        }
        return j_.at(key);
    }

    double number(const char *key) const {
        const json &v = at(key);
        if (!v.is_number()) {
            fail(std::string("'") + key + "' must be a number");
        }
        return v.get<double>();
    }
    double number(const char *key, double def) const {
        return has(key) ? number(key) : def;
    }
    long long integer(const char *key) const {
        const json &v = at(key);
        if (!v.is_number_integer()) {
            fail(std::string("'") + key + "' must be an integer");
        }
        return v.get<long long>();
    }
    long long integer(const char *key, long long def) const {
        return has(key) ? integer(key) : def;
    }
    std::size_t count(const char *key, std::size_t def) const {
        long long v = integer(key, static_cast<long long>(def));
        if (v < 0) {
            fail(std::string("'") + key + "' must be nonnegative");
        }
        return static_cast<std::size_t>(v);
    }
    bool boolean(const char *key, bool def) const {
        if (!has(key)) {
            return def;
        }
        if (!j_.at(key).is_boolean()) {
            fail(std::string("'") + key + "' must be true or false");
        }
        return j_.at(key).get<bool>();
    }
    std::string text(const char *key) const {
        const json &v = at(key);
        if (!v.is_string()) {
            fail(std::string("'") + key + "' must be a string");
        }
        return v.get<std::string>();
    }
    std::string choice(const char *key, const std::string &def, std::initializer_list<const char *> options) const {
        std::string v = has(key) ? text(key) : def;
        for (const char *o : options) {
            if (v == o) {
                return v;
            }
        }
        fail(std::string("'") + key + "' has unsupported value '" + v + "'");
    }
    std::vector<double> numbers(const char *key) const {
        const json &v = at(key);
        if (!v.is_array()) {
            fail(std::string("'") + key + "' must be an array of numbers");
        }
        std::vector<double> out;
        for (const auto &x : v) {
            if (!x.is_number()) {
                fail(std::string("'") + key + "' must be an array of numbers");
            }
            out.push_back(x.get<double>());
        }
        return out;
    }
    std::vector<int> ints(const char *key) const {
        const json &v = at(key);
        if (!v.is_array()) {
            fail(std::string("'") + key + "' must be an array of integers");
        }
        std::vector<int> out;
        for (const auto &x : v) {
            if (!x.is_number_integer()) {
                fail(std::string("'") + key + "' must be an array of integers");
            }
            out.push_back(x.get<int>());
        }
        return out;
    }
    std::vector<std::string> strings(const char *key) const {
        const json &v = at(key);
        if (!v.is_array()) {
            fail(std::string("'") + key + "' must be an array of strings");
        }
        std::vector<std::string> out;
        for (const auto &x : v) {
            if (!x.is_string()) {
                fail(std::string("'") + key + "' must be an array of strings");
            }
            out.push_back(x.get<std::string>());
        }
        return out;
    }

    [[noreturn]] void fail(const std::string &msg) const {
        throw ConfigError(where_ + ": " + msg);
    }

   private:
    const json &j_;
    std::string where_;
};

PauliString parse_pauli(const std::string &label, int n, const std::string &where) {
    PauliString p;
    try {
        p = PauliString::from_label(label);
    } catch (const std::exception &e) {
        throw ConfigError(where + ": bad Pauli label '" + label + "': " + e.what());
    }
    if (p.n_qubits() != n) {
        throw ConfigError(where + ": Pauli label '" + label + "' does not have " + std::to_string(n) + " qubits");
    }
    return p;
}

void check_qubits(const std::vector<int> &targets, int n, const std::string &where) {
    for (int q : targets) {
        if (q < 0 || q >= n) {
            throw ConfigError(where + ": qubit " + std::to_string(q) + " is out of range");
        }
    }
}

MethodBlock parse_method(const json &j, int n, std::size_t index) {
    std::string where = "methods[" + std::to_string(index) + "]";
    if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
        throw ConfigError(where + ": every method needs a string 'name'");
    }
    MethodBlock m;
    m.name = j["name"].get<std::string>();
    if (m.name == "raw" || m.name == "ev") {
        Fields f(j, where, {"name", "label"});
        m.label = m.name;
    } else if (m.name == "zne") {
        Fields f(j, where, {"name", "label", "nodes", "model", "degree", "boost"});
        m.zne.nodes = f.has("nodes") ? f.numbers("nodes") : std::vector<double>{1, 2, 3};
        std::string model = f.choice("model", "richardson", {"richardson", "polynomial", "exponential"});
        m.zne.model = model == "richardson" ? zne::Model::richardson
                      : model == "polynomial" ? zne::Model::polynomial
                                              : zne::Model::exponential;
        m.zne.degree = static_cast<int>(f.integer("degree", 1));
        m.zne.boost = f.choice("boost", "linear", {"linear", "exponential"}) == "linear" ? BoostMode::linear
                                                                                       : BoostMode::exponential;
        try {
            zne::ZneConfig probe = m.zne;
            probe.exact = true;
            zne::validate(probe);
        } catch (const std::invalid_argument &e) {
            f.fail(e.what());
        }
        m.label = "zne_" + model;
    } else if (m.name == "pec") {
        Fields f(j, where, {"name", "label", "basis", "lambda_target", "twirl", "max_patterns"});
        m.pec_basis = f.choice("basis", "rewrite", {"rewrite", "inversion"}) == "rewrite" ? pec::Basis::rewrite
                                                                                         : pec::Basis::inversion;
        if (f.has("lambda_target")) {
            m.lambda_target = f.number("lambda_target");
            if (*m.lambda_target < 0) {
                f.fail("'lambda_target' must be nonnegative");
            }
        }
        m.twirl = f.boolean("twirl", false);
        m.max_patterns = f.count("max_patterns", m.max_patterns);
        m.label = m.lambda_target ? "pec_partial" : "pec";
    } else if (m.name == "readout") {
        Fields f(j, where, {"name", "label", "assignment", "unfold", "iterations"});
        if (f.has("assignment")) {
            m.assignment_path = f.text("assignment");
        }
        m.ibu = f.choice("unfold", "invert", {"invert", "ibu"}) == "ibu";
        m.ibu_iterations = static_cast<int>(f.integer("iterations", 100));
        if (m.ibu_iterations < 1) {
            f.fail("'iterations' must be positive");
        }
        m.label = m.ibu ? "readout_ibu" : "readout";
    } else if (m.name == "sv") {
        Fields f(j, where, {"name", "label", "symmetries", "eigenvalues", "verify"});
        symx::SymmetrySpec spec;
        for (const auto &label : f.strings("symmetries")) {
            spec.ops.push_back(parse_pauli(label, n, where));
        }
        spec.eigenvalues = f.has("eigenvalues") ? f.ints("eigenvalues") : std::vector<int>(spec.ops.size(), 1);
        try {
            spec.validate();
        } catch (const std::invalid_argument &e) {
            f.fail(e.what());
        }
        m.symmetry = spec;
        m.sv_mode = f.choice("verify", "postprocess", {"direct", "postprocess"}) == "direct" ? symx::SvMode::direct
                                                                                            : symx::SvMode::postprocess;
        m.label = m.sv_mode == symx::SvMode::direct ? "sv_direct" : "sv_postprocess";
    } else if (m.name == "subspace") {
        Fields f(j, where, {"name", "label", "basis", "hamiltonian", "threshold"});
        for (const auto &label : f.strings("basis")) {
            m.expansion.push_back(parse_pauli(label, n, where));
        }
        if (f.has("hamiltonian")) {
            m.hamiltonian = parse_observable(f.at("hamiltonian"), n);
        }
        m.threshold = f.number("threshold", 1e-10);
        if (!(m.threshold > 0)) {
            f.fail("'threshold' must be positive");
        }
        m.label = "subspace";
    } else if (m.name == "vd") {
        Fields f(j, where, {"name", "label", "copies"});
        m.copies = static_cast<int>(f.integer("copies", 2));
        if (m.copies < 1) {
            f.fail("'copies' must be at least 1");
        }
        m.label = "vd_M" + std::to_string(m.copies);
    } else if (m.name == "learn") {
        Fields f(j, where, {"name", "label", "train_count", "truncate_top", "exhaustive"});
        m.learn.train_count = f.count("train_count", 16);
        m.learn.truncate_top = f.count("truncate_top", 0);
        m.learn.exhaustive = f.boolean("exhaustive", false);
        if (!m.learn.exhaustive && m.learn.train_count < 2) {
            f.fail("'train_count' must be at least 2");
        }
        m.label = "learn";
    } else {
        throw ConfigError(where + ": unknown method '" + m.name + "'");
    }
    if (j.contains("label")) {
        if (!j["label"].is_string() || j["label"].get<std::string>().empty() ||
            j["label"].get<std::string>().find_first_of(",\"\r\n") != std::string::npos) {
            throw ConfigError(where + ": 'label' must be a nonempty string without commas, quotes or newlines");
        }
        m.label = j["label"].get<std::string>();
    }
    return m;
}

}  // namespace

Channel parse_channel(const json &j, const std::vector<int> &default_targets, int n_qubits) {
    Fields f(j, "noise", {"type", "targets", "qubit", "probs", "gamma", "theta", "p"});
    std::string type = f.choice("type", "", {"depolarizing", "dephasing", "bit_flip", "pauli", "amplitude_damping",
                                             "coherent_rz"});
    std::vector<int> targets = f.has("targets") ? f.ints("targets") : default_targets;
    if (f.has("qubit")) {
        targets = {static_cast<int>(f.integer("qubit"))};
    }
    check_qubits(targets, n_qubits, "noise");
    auto single = [&]() {
        if (targets.size() != 1) {
            f.fail("'" + type + "' acts on one qubit; give 'qubit'");
        }
        return targets.front();
    };
    try {
        if (type == "depolarizing") {
            return Channel::depolarizing(1.0, targets);
        }
        if (type == "dephasing") {
            return Channel::pauli_error(PauliString::from_label("Z"), {single()});
        }
        if (type == "bit_flip") {
            return Channel::pauli_error(PauliString::from_label("X"), {single()});
        }
        if (type == "amplitude_damping") {
            return Channel::amplitude_damping(f.number("gamma"), single());
        }
        if (type == "coherent_rz") {
            return Channel::unitary(gates::rz(f.number("theta")), {single()});
        }
        const json &probs = f.at("probs");
        if (!probs.is_object()) {
            f.fail("'probs' must map Pauli labels to probabilities");
        }
        std::vector<PauliProbability> terms;
        for (const auto &item : probs.items()) {
            if (!item.value().is_number()) {
                f.fail("'probs' values must be numbers");
            }
            PauliString p = PauliString::from_label(item.key());
            if (p.n_qubits() != static_cast<int>(targets.size())) {
                f.fail("Pauli '" + item.key() + "' does not match the noise targets");
            }
            terms.push_back({p, item.value().get<double>()});
        }
        return Channel::from_pauli(std::move(terms), targets);
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        f.fail(e.what());
    }
}

Observable parse_observable(const json &j, int n_qubits) {
    std::vector<std::pair<double, std::string>> terms;
    if (j.is_string()) {
        terms.emplace_back(1.0, j.get<std::string>());
    } else if (j.is_array() && !j.empty()) {
        for (const auto &t : j) {
            Fields f(t, "observable term", {"coeff", "pauli"});
            terms.emplace_back(f.number("coeff", 1.0), f.text("pauli"));
        }
    } else {
        throw ConfigError("observable: expected a Pauli label or a nonempty array of {coeff, pauli}");
    }
    Observable obs;
    try {
        obs = Observable::from_labels(terms);
    } catch (const std::exception &e) {
        throw ConfigError(std::string("observable: ") + e.what());
    }
    if (obs.n_qubits() != n_qubits) {
        throw ConfigError("observable: qubit count differs from n_qubits");
    }
    return obs;
}

ExperimentConfig parse_config(const std::string &text, const std::string &base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    Fields f(j, "config", {"description", "n_qubits", "mode", "shots", "seed", "circuit", "observable", "methods",
                           "readout"});
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    long long n = f.integer("n_qubits");
    if (n < 1 || n > kMaxQubits) {
        f.fail("'n_qubits' must lie in [1, " + std::to_string(kMaxQubits) + "]");
    }
    const int nq = static_cast<int>(n);
    cfg.exact = f.choice("mode", "exact", {"exact", "sampled"}) == "exact";
    cfg.shots = f.count("shots", 0);
    if (!cfg.exact) {
        if (!f.has("seed")) {
            f.fail("'seed' is mandatory in sampled mode");
        }
        if (cfg.shots < 2) {
            f.fail("'shots' must be at least 2 in sampled mode");
        }
    }
    if (f.has("seed")) {
        const json &s = f.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            f.fail("'seed' must be a nonnegative integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }

    cfg.circuit = NoisyCircuit(nq);
    const json &gates_json = f.at("circuit");
    if (!gates_json.is_array()) {
        f.fail("'circuit' must be an array of gates");
    }
    for (std::size_t i = 0; i < gates_json.size(); ++i) {
        std::string where = "circuit[" + std::to_string(i) + "]";
        Fields g(gates_json[i], where, {"gate", "targets", "params", "noise", "p"});
        std::vector<int> targets = g.ints("targets");
        check_qubits(targets, nq, where);
        Gate gate;
        try {
            gate = Gate::named(g.text("gate"), targets, g.has("params") ? g.numbers("params") : std::vector<double>{});
        } catch (const std::invalid_argument &e) {
            g.fail(e.what());
        }
        if (g.has("noise") != g.has("p")) {
            g.fail("'noise' and 'p' must be given together");
        }
        if (!g.has("noise")) {
            cfg.circuit.add(std::move(gate));
            continue;
        }
        double p = g.number("p");
        if (p < 0 || p >= 1) {
            g.fail("'p' must lie in [0, 1)");
        }
        cfg.circuit.add(std::move(gate), parse_channel(g.at("noise"), targets, nq), p);
    }

    cfg.observable = parse_observable(f.at("observable"), nq);

    if (f.has("readout")) {
        Fields r(f.at("readout"), "readout", {"mode", "channels"});
        ReadoutSpec spec;
        spec.mode = r.choice("mode", "full", {"full", "tensor"}) == "full" ? readout::AssignmentMatrix::Form::full
                                                                           : readout::AssignmentMatrix::Form::tensor;
        const json &chs = r.at("channels");
        if (!chs.is_array()) {
            r.fail("'channels' must be an array");
        }
        for (const auto &c : chs) {
            if (!c.is_object() || !c.contains("p") || !c["p"].is_number()) {
                r.fail("every readout channel needs a numeric 'p'");
            }
            double p = c["p"].get<double>();
            if (p < 0 || p > 1) {
                r.fail("readout 'p' must lie in [0, 1]");
            }
            spec.channels.push_back(parse_channel(c, {}, nq).mixed_with_identity(p));
        }
        cfg.readout = std::move(spec);
    }

    const json &methods = f.at("methods");
    if (!methods.is_array() || methods.empty()) {
        f.fail("'methods' must be a nonempty array");
    }
    std::set<std::string> labels;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        MethodBlock m = parse_method(methods[i], nq, i);
        if (m.name == "readout" && m.assignment_path.empty() && !cfg.readout) {
            throw ConfigError("methods[" + std::to_string(i) + "]: readout needs 'assignment' or a 'readout' block");
        }
        if (m.label == "ideal" || !labels.insert(m.label).second) {
            throw ConfigError("methods[" + std::to_string(i) + "]: duplicate method label '" + m.label +
                              "'; set 'label'");
        }
        cfg.methods.push_back(std::move(m));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_config(ss.str(), dir.empty() ? "." : dir);
}

}  // namespace qem::cli
