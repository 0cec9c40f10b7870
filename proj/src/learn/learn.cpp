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

#include "qem/learn/learn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qem/core/gates.hpp"
#include "qem/core/parallel.hpp"
#include "qem/core/sampling.hpp"

namespace qem::learn {

namespace {

std::vector<std::size_t> single_qubit_slots(const NoisyCircuit &c) {
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Gate &g = c.locations()[i].gate;
        if (g.targets.size() == 1) {
            slots.push_back(i);
        } else if (!gates::is_clifford(g.unitary)) {
            throw std::invalid_argument("gate '" + g.name + "' is a non-Clifford multi-qubit gate");
        }
    }
    return slots;
}

NoisyCircuit substitute(const NoisyCircuit &c, const std::vector<std::size_t> &slots,
                        const std::vector<std::size_t> &choice) {
    const auto &cliffords = gates::single_qubit_cliffords();
    NoisyCircuit out(c.n_qubits());
    std::size_t next = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        Location loc = c.locations()[i];
        if (next < slots.size() && slots[next] == i) {
            std::size_t k = choice[next++];
            loc.gate = Gate("C" + std::to_string(k), cliffords[k], loc.gate.targets);
        }
        out.add(std::move(loc));
    }
    return out;
}

double noisy_value(const NoisyCircuit &c, const Observable &obs, const LearnConfig &cfg, const RngStream &stream,
                   double *variance) {
    DensityMatrix state = run_circuit(c);
    if (cfg.exact) {
        if (variance != nullptr) {
            *variance = shot_variance(state, obs);
        }
        return expectation(state, obs);
    }
    std::vector<double> samples(cfg.shots);
    parallel_for(cfg.shots, [&](std::size_t i) {
        Rng rng = stream.shot(i);
        samples[i] = sample_observable_shot(state, obs, rng);
    });
    EstimatorReport r = summarize(samples);
    if (variance != nullptr) {
        *variance = r.variance;
    }
    return r.mean;
}

void truncate(TrainingSet &ts, std::size_t keep) {
    if (keep > 0 && keep < ts.pairs.size()) {
        std::stable_sort(ts.pairs.begin(), ts.pairs.end(), [](const TrainingPair &a, const TrainingPair &b) {
            return std::abs(a.ideal) > std::abs(b.ideal);
        });
        ts.pairs.resize(keep);
    }
}

}  // namespace

std::vector<NoisyCircuit> make_clifford_variants(const NoisyCircuit &c, std::size_t count, Rng &rng) {
    auto slots = single_qubit_slots(c);
    std::uniform_int_distribution<std::size_t> pick(0, gates::single_qubit_cliffords().size() - 1);
    std::vector<NoisyCircuit> out;
    out.reserve(count);
    for (std::size_t v = 0; v < count; ++v) {
        std::vector<std::size_t> choice(slots.size());
        for (auto &k : choice) {
            k = pick(rng);
        }
        out.push_back(substitute(c, slots, choice));
    }
    return out;
}

std::vector<NoisyCircuit> exhaustive_clifford_variants(const NoisyCircuit &c) {
    auto slots = single_qubit_slots(c);
    const std::size_t base = gates::single_qubit_cliffords().size();
    if (slots.size() > 3) {
        throw std::invalid_argument("exhaustive Clifford enumeration is limited to 3 single-qubit gates");
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        total *= base;
    }
    std::vector<NoisyCircuit> out;
    out.reserve(total);
    for (std::size_t v = 0; v < total; ++v) {
        std::vector<std::size_t> choice(slots.size());
        std::size_t rest = v;
        for (std::size_t i = slots.size(); i-- > 0;) {
            choice[i] = rest % base;
            rest /= base;
        }
        out.push_back(substitute(c, slots, choice));
    }
    return out;
}

TrainingSet build_training_set(const std::vector<NoisyCircuit> &variants, const Observable &obs,
                               std::size_t truncate_top) {
    if (variants.empty()) {
        throw std::invalid_argument("training needs at least one circuit");
    }
    TrainingSet ts;
    ts.pairs.resize(variants.size());
    parallel_for(variants.size(), [&](std::size_t i) {
        std::string desc;
        for (const auto &loc : variants[i].locations()) {
            desc += (desc.empty() ? "" : " ") + loc.gate.name;
        }
        ts.pairs[i] = {expectation(ideal_state(variants[i]), obs), expectation(run_circuit(variants[i]), obs),
                       std::move(desc)};
    });
    truncate(ts, truncate_top);
    return ts;
}

RescaleShift fit_rescale_shift(const TrainingSet &ts) {
    if (ts.pairs.size() < 2) {
        throw std::invalid_argument("rescale-and-shift fit needs at least two training pairs");
    }
    const double n = static_cast<double>(ts.pairs.size());
    double mx = 0;
    double my = 0;
    for (const auto &p : ts.pairs) {
        mx += p.noisy;
        my += p.ideal;
    }
    mx /= n;
    my /= n;
    double sxx = 0;
    double sxy = 0;
    for (const auto &p : ts.pairs) {
        sxx += (p.noisy - mx) * (p.noisy - mx);
        sxy += (p.noisy - mx) * (p.ideal - my);
    }
    if (!(sxx > 1e-24)) {
        throw std::invalid_argument("training noisy values are all equal; the fit is degenerate");
    }
    RescaleShift fit;
    fit.theta1 = sxy / sxx;
    fit.theta0 = my - fit.theta1 * mx;
    return fit;
}

double depolarizing_rescale(double p0, const Observable &obs, double noisy) {
    if (!(p0 > 0) || p0 > 1) {
        throw std::invalid_argument("fault-free probability must lie in (0, 1]");
    }
    double d = std::ldexp(1.0, obs.n_qubits());
    return (noisy - (1.0 - p0) * obs.trace() / d) / p0;
}

double purity_from_P0(double p0, int n_qubits, PurityConvention conv) {
    double d = std::ldexp(1.0, n_qubits);
    double k = conv == PurityConvention::exact_mixture ? 1.0 / d : 1.0 / (d * d);
    return p0 * p0 + 2.0 * p0 * (1.0 - p0) / d + (1.0 - p0) * (1.0 - p0) * k;
}

double purity_estimate_P0(double purity, int n_qubits, PurityConvention conv) {
    if (n_qubits < 1) {
        throw std::invalid_argument("qubit count must be positive");
    }
    double d = std::ldexp(1.0, n_qubits);
    double k = conv == PurityConvention::exact_mixture ? 1.0 / d : 1.0 / (d * d);
    if (purity > 1.0 + 1e-12 || purity < k - 1e-12) {
        throw std::domain_error("purity lies outside [P0 = 0 floor, 1]");
    }
    // a u^2 + b u + c = 0 from expanding the purity in u = P0.
    double a = 1.0 - 2.0 / d + k;
    double b = 2.0 / d - 2.0 * k;
    double c = k - purity;
    double disc = std::max(0.0, b * b - 4.0 * a * c);
    double root = (-b + std::sqrt(disc)) / (2.0 * a);
    return std::clamp(root, 0.0, 1.0);
}

LearnResult learn_mitigate(const NoisyCircuit &c, const Observable &obs, const LearnConfig &cfg,
                           const RngStream &stream) {
    if (!cfg.exact && cfg.shots < 2) {
        throw std::invalid_argument("sampled learning needs at least two shots per circuit");
    }
    std::vector<NoisyCircuit> variants;
    if (cfg.exhaustive) {
        variants = exhaustive_clifford_variants(c);
    } else {
        Rng rng = stream.substream(0).shot(0);
        variants = make_clifford_variants(c, cfg.train_count, rng);
    }
    LearnResult r;
    r.training = build_training_set(variants, obs, 0);
    if (!cfg.exact) {
        RngStream train = stream.substream(1);
        for (std::size_t i = 0; i < variants.size(); ++i) {
            r.training.pairs[i].noisy = noisy_value(variants[i], obs, cfg, train.substream(i), nullptr);
        }
    }
    truncate(r.training, cfg.truncate_top);
    r.fit = fit_rescale_shift(r.training);
    double var = 0;
    double noisy = noisy_value(c, obs, cfg, stream.substream(2), &var);
    EstimatorReport &rep = r.report;
    rep.method = "learn";
    rep.mean = r.fit.apply(noisy);
    rep.variance = r.fit.theta1 * r.fit.theta1 * var;
    rep.n_shots = cfg.exact ? 0 : cfg.shots;
    rep.seed = stream.seed();
    rep.set_reference(expectation(ideal_state(c), obs));
    rep.set_overhead(r.fit.theta1 * r.fit.theta1, OverheadKind::predicted);
    return r;
}

}  // namespace qem::learn
