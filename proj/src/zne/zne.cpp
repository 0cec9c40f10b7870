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

#include "qem/zne/zne.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qem/core/parallel.hpp"
#include "qem/core/sampling.hpp"

namespace qem::zne {

std::vector<double> richardson_coefficients(std::span<const double> nodes, bool diagnostic) {
    if (nodes.empty()) {
        throw std::invalid_argument("Richardson extrapolation needs nodes");
    }
    if (nodes.size() == 1) {
        if (!diagnostic) {
            throw std::invalid_argument("Richardson extrapolation needs at least two nodes");
        }
        return {1.0};
    }
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        if (nodes[m] == 0) {
            throw std::invalid_argument("Richardson nodes must be nonzero");
        }
        for (std::size_t k = 0; k < m; ++k) {
            if (nodes[k] == nodes[m]) {
                throw std::invalid_argument("Richardson nodes must be distinct");
            }
        }
    }
    std::vector<double> gamma(nodes.size());
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        double g = 1;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            if (k != m) {
                g *= nodes[k] / (nodes[k] - nodes[m]);
            }
        }
        gamma[m] = g;
    }
    return gamma;
}

double richardson_overhead(std::span<const double> nodes) {
    double a = 0;
    for (double g : richardson_coefficients(nodes)) {
        a += std::abs(g);
    }
    return a * a;
}

std::vector<double> polynomial_coefficients(std::span<const double> nodes, int degree) {
    if (degree < 0 || static_cast<std::size_t>(degree) >= nodes.size()) {
        throw std::invalid_argument("polynomial degree must be below the node count");
    }
    const auto m = static_cast<Eigen::Index>(nodes.size());
    RealMatrix v(m, degree + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        double p = 1;
        for (int j = 0; j <= degree; ++j) {
            v(i, j) = p;
            p *= nodes[static_cast<std::size_t>(i)];
        }
    }
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(v);
    if (cod.rank() != degree + 1) {
        throw std::invalid_argument("polynomial fit is rank deficient; nodes must be distinct");
    }
    RealMatrix pinv = cod.pseudoInverse();
    std::vector<double> c(nodes.size());
    for (Eigen::Index i = 0; i < m; ++i) {
        c[static_cast<std::size_t>(i)] = pinv(0, i);
    }
    return c;
}

ExponentialFit fit_exponential(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("exponential fit needs at least two points");
    }
    double sign = points.front().second > 0 ? 1.0 : -1.0;
    for (const auto &[lambda, value] : points) {
        if (value == 0 || (value > 0) != (sign > 0)) {
            throw std::domain_error("exponential fit needs nonzero values of one sign");
        }
    }
    const double n = static_cast<double>(points.size());
    double mx = 0;
    double my = 0;
    for (const auto &[lambda, value] : points) {
        mx += lambda;
        my += std::log(std::abs(value));
    }
    mx /= n;
    my /= n;
    double sxx = 0;
    double sxy = 0;
    for (const auto &[lambda, value] : points) {
        sxx += (lambda - mx) * (lambda - mx);
        sxy += (lambda - mx) * (std::log(std::abs(value)) - my);
    }
    if (sxx == 0) {
        throw std::invalid_argument("exponential fit needs distinct noise levels");
    }
    double slope = sxy / sxx;
    return {sign * std::exp(my - slope * mx), -slope};
}

void validate(const ZneConfig &cfg) {
    if (cfg.nodes.size() < 2) {
        throw std::invalid_argument("ZNE needs at least two nodes");
    }
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
        if (cfg.nodes[i] < 1.0) {
            throw std::invalid_argument("ZNE nodes are scale factors and must be >= 1");
        }
        if (i > 0 && !(cfg.nodes[i] > cfg.nodes[i - 1])) {
            throw std::invalid_argument("ZNE nodes must be strictly increasing");
        }
    }
    if (cfg.model == Model::polynomial &&
        (cfg.degree < 1 || static_cast<std::size_t>(cfg.degree) >= cfg.nodes.size())) {
        throw std::invalid_argument("polynomial degree must be in [1, nodes - 1]");
    }
    if (!cfg.exact && cfg.shots_per_node < 2) {
        throw std::invalid_argument("sampled ZNE needs at least two shots per node");
    }
}

std::pair<double, double> extrapolate(const ZneConfig &cfg, std::span<const NodeResult> nodes) {
    std::vector<double> lambdas;
    for (const auto &n : nodes) {
        lambdas.push_back(n.lambda);
    }
    if (cfg.model == Model::exponential) {
        std::vector<std::pair<double, double>> pts;
        for (const auto &n : nodes) {
            pts.emplace_back(n.lambda, n.mean);
        }
        ExponentialFit fit = fit_exponential(pts);
        // Delta method: log a is linear in log|y_m| with the intercept weights.
        auto w = polynomial_coefficients(lambdas, 1);
        double var = 0;
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            var += w[m] * w[m] * nodes[m].variance / (nodes[m].mean * nodes[m].mean);
        }
        return {fit.amplitude, fit.amplitude * fit.amplitude * var};
    }
    std::vector<double> c = cfg.model == Model::richardson
                                ? richardson_coefficients(lambdas)
                                : polynomial_coefficients(lambdas, cfg.degree);
    double value = 0;
    double var = 0;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        value += c[m] * nodes[m].mean;
        var += c[m] * c[m] * nodes[m].variance;
    }
    return {value, var};
}

ZneResult zne_mitigate(const NoisyCircuit &circuit, const Observable &obs, const ZneConfig &cfg,
                       const RngStream &stream) {
    validate(cfg);
    ZneResult result;
    for (std::size_t m = 0; m < cfg.nodes.size(); ++m) {
        DensityMatrix state = run_circuit(circuit, cfg.nodes[m], cfg.boost);
        NodeResult node;
        node.lambda = cfg.nodes[m];
        if (cfg.exact) {
            node.mean = expectation(state, obs);
            node.variance = shot_variance(state, obs);
        } else {
            RngStream node_stream = stream.substream(m);
            std::vector<double> samples(cfg.shots_per_node);
            parallel_for(samples.size(), [&](std::size_t i) {
                Rng rng = node_stream.shot(i);
                samples[i] = sample_observable_shot(state, obs, rng);
            });
            EstimatorReport r = summarize(samples);
            node.mean = r.mean;
            node.variance = r.variance;
            node.shots = cfg.shots_per_node;
        }
        result.nodes.push_back(node);
    }
    auto [value, var] = extrapolate(cfg, result.nodes);
    EstimatorReport &rep = result.report;
    rep.method = "zne";
    rep.mean = value;
    rep.variance = var;
    rep.n_shots = cfg.exact ? 0 : cfg.shots_per_node;
    rep.seed = stream.seed();
    rep.set_reference(expectation(ideal_state(circuit), obs));
    if (cfg.model == Model::richardson) {
        rep.set_overhead(richardson_overhead(cfg.nodes), OverheadKind::predicted);
    } else if (cfg.model == Model::polynomial) {
        double a = 0;
        for (double c : polynomial_coefficients(cfg.nodes, cfg.degree)) {
            a += std::abs(c);
        }
        rep.set_overhead(a * a, OverheadKind::predicted);
    } else {
        double raw = result.nodes.front().variance;
        if (raw > 0) {
            rep.set_overhead(var / raw, OverheadKind::variance_ratio);
        }
    }
    return result;
}

}  // namespace qem::zne
