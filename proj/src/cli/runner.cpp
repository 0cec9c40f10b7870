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

#include "qem/cli/runner.hpp"

#include <filesystem>
#include <iostream>

#include <fmt/format.h>

#include "qem/core/parallel.hpp"
#include "qem/core/sampling.hpp"
#include "qem/purify/purify.hpp"
#include "qem/symx/subspace.hpp"

namespace qem::cli {

namespace {

struct Context {
    const ExperimentConfig &cfg;
    DensityMatrix noisy;
    double ideal = 0;
};

EstimatorReport raw_row(const Context &ctx, const RngStream &stream) {
    const auto &cfg = ctx.cfg;
    EstimatorReport r;
    if (cfg.exact) {
        r = exact_report(expectation(ctx.noisy, cfg.observable), shot_variance(ctx.noisy, cfg.observable), ctx.ideal);
    } else {
        std::vector<double> samples(cfg.shots);
        parallel_for(cfg.shots, [&](std::size_t i) {
            Rng rng = stream.shot(i);
            samples[i] = sample_observable_shot(ctx.noisy, cfg.observable, rng);
        });
        r = summarize(samples, ctx.ideal);
    }
    r.method = "raw";
    r.seed = cfg.seed;
    r.set_overhead(1.0, OverheadKind::predicted);
    return r;
}

EstimatorReport run_zne(const Context &ctx, const MethodBlock &m, const RngStream &stream, RunOutput &out) {
    zne::ZneConfig zc = m.zne;
    zc.exact = ctx.cfg.exact;
    zc.shots_per_node = ctx.cfg.shots;
    zne::ZneResult res = zne::zne_mitigate(ctx.cfg.circuit, ctx.cfg.observable, zc, stream);
    for (const auto &node : res.nodes) {
        out.sweep.push_back({m.label, node.lambda, node.mean, node.variance, node.shots});
    }
    return res.report;
}

EstimatorReport run_pec(const Context &ctx, const MethodBlock &m, const RngStream &stream) {
    pec::PecConfig pc;
    pc.exact = ctx.cfg.exact;
    pc.shots = ctx.cfg.shots;
    pc.basis = m.pec_basis;
    pc.twirl = m.twirl;
    pc.max_patterns = m.max_patterns;
    if (m.lambda_target) {
        return pec::partial_pec(ctx.cfg.circuit, ctx.cfg.observable, *m.lambda_target, pc, stream);
    }
    return pec::pec_mitigate(ctx.cfg.circuit, ctx.cfg.observable, pc, stream);
}

EstimatorReport run_readout(const Context &ctx, const MethodBlock &m, const RngStream &stream) {
    const auto &cfg = ctx.cfg;
    if (!cfg.observable.is_diagonal()) {
        throw ConfigError("readout mitigation needs a Z-type observable");
    }
    readout::AssignmentMatrix a;
    if (!m.assignment_path.empty()) {
        std::filesystem::path p(m.assignment_path);
        if (p.is_relative()) {
            p = std::filesystem::path(cfg.base_dir) / p;
        }
        try {
            a = readout::AssignmentMatrix::load(p.string());
        } catch (const std::exception &e) {
            throw ConfigError(std::string("readout assignment: ") + e.what());
        }
        if (a.n_qubits() != cfg.circuit.n_qubits()) {
            throw ConfigError("readout assignment qubit count differs from the circuit");
        }
    } else {
        a = calibrate_from_config(cfg);
    }
    // The device's readout noise: the configured channels, else the stored matrix.
    readout::AssignmentMatrix truth =
        cfg.readout ? readout::calibrate(cfg.readout->channels, cfg.circuit.n_qubits(), readout::AssignmentMatrix::Form::full)
                    : a;
    std::cerr << fmt::format("{}: assignment condition number {:.6g}\n", m.label, a.condition_number());

    readout::ReadoutDistribution p_noisy = readout::forward(truth, readout::measurement_distribution(ctx.noisy));
    if (!cfg.exact) {
        Rng rng = stream.shot(0);
        p_noisy = readout::sample_counts(p_noisy, cfg.shots, rng);
    }
    RealVector spectrum = cfg.observable.diagonal_spectrum();
    RealVector y = a.solve(spectrum, true);
    double linear = y.dot(p_noisy.probs);
    double value = linear;
    if (m.ibu) {
        value = spectrum.dot(readout::ibu(a, p_noisy, m.ibu_iterations).dist.probs);
    }
    double second = p_noisy.probs.dot(y.cwiseProduct(y));
    double raw_mean = p_noisy.probs.dot(spectrum);
    double raw_var = p_noisy.probs.dot(spectrum.cwiseProduct(spectrum)) - raw_mean * raw_mean;
    EstimatorReport r;
    r.mean = value;
    r.variance = std::max(0.0, second - linear * linear);
    r.n_shots = cfg.exact ? 0 : cfg.shots;
    r.set_reference(ctx.ideal);
    if (raw_var > 1e-15) {
        r.set_overhead(r.variance / raw_var, OverheadKind::variance_ratio);
    }
    return r;
}

EstimatorReport run_sv(const Context &ctx, const MethodBlock &m, const RngStream &stream) {
    const auto &cfg = ctx.cfg;
    const symx::SymmetrySpec &sym = *m.symmetry;
    if (!cfg.exact) {
        return symx::sv_shot_mitigate(cfg.circuit, sym, cfg.observable, cfg.shots, m.sv_mode, stream).report;
    }
    Matrix pi = symx::projector(sym);
    symx::SvValue v = symx::sv_postprocess(ctx.noisy, pi, cfg.observable);
    EstimatorReport r;
    r.mean = v.value;
    if (m.sv_mode == symx::SvMode::direct) {
        r.variance = shot_variance(symx::postselect_state(ctx.noisy, pi).state, cfg.observable);
        r.set_overhead(1.0 / v.pass_rate, OverheadKind::predicted);
    } else {
        double var_num = shot_variance(ctx.noisy, symx::projected_observable(sym, cfg.observable));
        double var_den = shot_variance(ctx.noisy, symx::projector_terms(sym));
        r.variance = (var_num + v.value * v.value * var_den) / (v.pass_rate * v.pass_rate);
        r.set_overhead(v.overhead, OverheadKind::predicted);
    }
    r.set_reference(ctx.ideal);
    return r;
}

EstimatorReport run_subspace(const Context &ctx, const MethodBlock &m) {
    const auto &cfg = ctx.cfg;
    symx::ExpansionBasis basis = symx::ExpansionBasis::from_paulis(m.expansion);
    const Observable &h = m.hamiltonian ? *m.hamiltonian : cfg.observable;
    symx::SubspaceResult sr = symx::subspace_expand(ctx.noisy, h, basis, m.threshold);
    if (sr.below_spectrum) {
        std::cerr << fmt::format("{}: expanded energy {:.6g} lies below the spectrum of H\n", m.label, sr.energy);
    }
    DensityMatrix expanded = symx::expanded_state(ctx.noisy, basis, sr.weights);
    return exact_report(symx::expanded_expectation(ctx.noisy, cfg.observable, basis, sr.weights),
                        shot_variance(expanded, cfg.observable), ctx.ideal);
}

EstimatorReport run_purify(const Context &ctx, const MethodBlock &m) {
    const auto &cfg = ctx.cfg;
    int copies = m.name == "ev" ? 2 : m.copies;
    purify::PurifiedEstimate est = m.name == "ev" ? purify::echo_verification(ctx.noisy, cfg.observable)
                                                  : purify::vd_expectation(ctx.noisy, cfg.observable, copies);
    Matrix power = ctx.noisy.matrix();
    for (int k = 1; k < copies; ++k) {
        power = power * ctx.noisy.matrix();
    }
    DensityMatrix purified =
        DensityMatrix::from_matrix_unchecked(ctx.noisy.n_qubits(), power / power.trace().real());
    EstimatorReport r = exact_report(est.value, shot_variance(purified, cfg.observable), ctx.ideal);
    r.set_overhead(est.overhead, OverheadKind::predicted);
    return r;
}

EstimatorReport run_learn(const Context &ctx, const MethodBlock &m, const RngStream &stream) {
    learn::LearnConfig lc = m.learn;
    lc.exact = ctx.cfg.exact;
    lc.shots = ctx.cfg.shots;
    return learn::learn_mitigate(ctx.cfg.circuit, ctx.cfg.observable, lc, stream).report;
}

}  // namespace

readout::AssignmentMatrix calibrate_from_config(const ExperimentConfig &cfg) {
    if (!cfg.readout) {
        throw ConfigError("config has no 'readout' block");
    }
    return readout::calibrate(cfg.readout->channels, cfg.circuit.n_qubits(), cfg.readout->mode);
}

RunOutput run_experiment(const ExperimentConfig &cfg) {
    RngStream master(cfg.seed);
    Context ctx{cfg, run_circuit(cfg.circuit), 0.0};
    ctx.ideal = expectation(ideal_state(cfg.circuit), cfg.observable);

    RunOutput out;
    EstimatorReport ideal = exact_report(ctx.ideal, 0.0, ctx.ideal);
    ideal.method = "ideal";
    ideal.seed = cfg.seed;
    out.rows.push_back(ideal);
    out.rows.push_back(raw_row(ctx, master.substream(0)));

    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
        const MethodBlock &m = cfg.methods[i];
        RngStream stream = master.substream(i + 1);
        EstimatorReport r;
        if (m.name == "raw") {
            continue;
        } else if (m.name == "zne") {
            r = run_zne(ctx, m, stream, out);
        } else if (m.name == "pec") {
            r = run_pec(ctx, m, stream);
        } else if (m.name == "readout") {
            r = run_readout(ctx, m, stream);
        } else if (m.name == "sv") {
            r = run_sv(ctx, m, stream);
        } else if (m.name == "subspace") {
            r = run_subspace(ctx, m);
        } else if (m.name == "vd" || m.name == "ev") {
            r = run_purify(ctx, m);
        } else if (m.name == "learn") {
            r = run_learn(ctx, m, stream);
        } else {
            throw ConfigError("unknown method '" + m.name + "'");
        }
        r.method = m.label;
        r.seed = cfg.seed;
        out.rows.push_back(std::move(r));
    }
    return out;
}

std::string results_csv(const RunOutput &out) {
    std::string s = csv_header() + "\n";
    for (const auto &r : out.rows) {
        s += to_csv_row(r) + "\n";
    }
    return s;
}

std::string sweep_csv(const RunOutput &out) {
    std::string s = "method,lambda,mean,variance,n_shots\n";
    for (const auto &row : out.sweep) {
        s += fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", row.method, row.lambda, row.mean, row.variance, row.n_shots);
    }
    return s;
}

}  // namespace qem::cli
