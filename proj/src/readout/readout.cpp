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

#include "qem/readout/readout.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qem/core/parallel.hpp"

namespace qem::readout {

namespace {

constexpr int kMaxFullQubits = 10;

void check_stochastic(const RealMatrix &a, double tol) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        double s = 0;
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            double v = a(r, c);
            if (v < -tol || v > 1 + tol) {
                throw std::invalid_argument("assignment matrix entries must lie in [0, 1]");
            }
            s += v;
        }
        if (std::abs(s - 1.0) > tol) {
            throw std::invalid_argument("assignment matrix columns must sum to 1");
        }
    }
}

// Applies a 2x2 map to qubit q of a vector over basis indices.
void apply_factor(RealVector &v, int n, int q, const Eigen::Matrix2d &f) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(v.size()); ++i) {
        if ((i & bit) != 0) {
            continue;
        }
        auto a = static_cast<Eigen::Index>(i);
        auto b = static_cast<Eigen::Index>(i | bit);
        double v0 = v(a);
        double v1 = v(b);
        v(a) = f(0, 0) * v0 + f(0, 1) * v1;
        v(b) = f(1, 0) * v0 + f(1, 1) * v1;
    }
}

Matrix apply_all(const DensityMatrix &start, std::span<const Channel> channels, int n) {
    Matrix rho = start.matrix();
    for (const auto &ch : channels) {
        ch.apply_in_place(rho, n);
    }
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        for (Eigen::Index r = 0; r < rho.rows(); ++r) {
            if (r != c && std::abs(rho(r, c)) > 1e-10) {
                throw std::domain_error("measurement channel leaks out of the computational basis");
            }
        }
    }
    return rho;
}

double condition_2norm(const RealMatrix &a) {
    Eigen::JacobiSVD<RealMatrix> svd(a);
    const auto &s = svd.singularValues();
    double smin = s(s.size() - 1);
    return smin > 0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

AssignmentMatrix AssignmentMatrix::full(int n_qubits, RealMatrix a) {
    check_qubit_count(n_qubits);
    if (n_qubits > kMaxFullQubits) {
        throw std::invalid_argument("full assignment matrices are capped at 10 qubits");
    }
    const auto dim = Eigen::Index{1} << n_qubits;
    if (a.rows() != dim || a.cols() != dim) {
        throw std::invalid_argument("assignment matrix size does not match the qubit count");
    }
    AssignmentMatrix m;
    m.n_ = n_qubits;
    m.form_ = Form::full;
    m.full_ = std::move(a);
    m.validate();
    return m;
}

AssignmentMatrix AssignmentMatrix::tensor(std::vector<RealMatrix> factors) {
    check_qubit_count(static_cast<int>(factors.size()));
    for (const auto &f : factors) {
        if (f.rows() != 2 || f.cols() != 2) {
            throw std::invalid_argument("tensor factors must be 2x2");
        }
    }
    AssignmentMatrix m;
    m.n_ = static_cast<int>(factors.size());
    m.form_ = Form::tensor;
    m.factors_ = std::move(factors);
    m.validate();
    return m;
}

void AssignmentMatrix::validate() const {
    if (form_ == Form::full) {
        check_stochastic(full_, 1e-10);
    } else {
        for (const auto &f : factors_) {
            check_stochastic(f, 1e-10);
        }
    }
}

RealMatrix AssignmentMatrix::dense() const {
    if (form_ == Form::full) {
        return full_;
    }
    if (n_ > kMaxFullQubits) {
        throw std::invalid_argument("dense expansion is capped at 10 qubits");
    }
    RealMatrix out = RealMatrix::Ones(1, 1);
    for (const auto &f : factors_) {
        RealMatrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
            }
        }
        out = std::move(next);
    }
    return out;
}

RealVector AssignmentMatrix::apply(const RealVector &p, bool transpose) const {
    if (p.size() != (Eigen::Index{1} << n_)) {
        throw std::invalid_argument("distribution size does not match the assignment matrix");
    }
    if (form_ == Form::full) {
        return transpose ? RealVector(full_.transpose() * p) : RealVector(full_ * p);
    }
    RealVector v = p;
    for (int q = 0; q < n_; ++q) {
        Eigen::Matrix2d f = factors_[static_cast<std::size_t>(q)];
        apply_factor(v, n_, q, transpose ? Eigen::Matrix2d(f.transpose()) : f);
    }
    return v;
}

RealVector AssignmentMatrix::solve(const RealVector &b, bool transpose) const {
    if (b.size() != (Eigen::Index{1} << n_)) {
        throw std::invalid_argument("vector size does not match the assignment matrix");
    }
    const double limit = 1e14;
    if (form_ == Form::full) {
        RealMatrix m = transpose ? RealMatrix(full_.transpose()) : full_;
        Eigen::PartialPivLU<RealMatrix> lu(m);
        if (!(lu.rcond() * limit > 1.0)) {
            throw std::domain_error("assignment matrix is singular");
        }
        return lu.solve(b);
    }
    RealVector v = b;
    for (int q = 0; q < n_; ++q) {
        Eigen::Matrix2d f = factors_[static_cast<std::size_t>(q)];
        if (transpose) {
            f.transposeInPlace();
        }
        Eigen::FullPivLU<Eigen::Matrix2d> lu(f);
        if (!lu.isInvertible() || !(lu.rcond() * limit > 1.0)) {
            throw std::domain_error("assignment matrix is singular");
        }
        Eigen::Matrix2d inv_apply;
        inv_apply.col(0) = lu.solve(Eigen::Vector2d(1, 0));
        inv_apply.col(1) = lu.solve(Eigen::Vector2d(0, 1));
        apply_factor(v, n_, q, inv_apply);
    }
    return v;
}

double AssignmentMatrix::condition_number() const {
    if (form_ == Form::full) {
        return condition_2norm(full_);
    }
    double c = 1;
    for (const auto &f : factors_) {
        c *= condition_2norm(f);
    }
    return c;
}

std::string AssignmentMatrix::to_json() const {
    nlohmann::json j;
    j["n_qubits"] = n_;
    auto rows = [](const RealMatrix &m) {
        nlohmann::json out = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            std::vector<double> row;
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                row.push_back(m(r, c));
            }
            out.push_back(row);
        }
        return out;
    };
    if (form_ == Form::full) {
        j["form"] = "full";
        j["matrix"] = rows(full_);
    } else {
        j["form"] = "tensor";
        j["factors"] = nlohmann::json::array();
        for (const auto &f : factors_) {
            j["factors"].push_back(rows(f));
        }
    }
    return j.dump(2);
}

AssignmentMatrix AssignmentMatrix::from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("assignment matrix JSON: ") + e.what());
    }
    auto read = [](const nlohmann::json &rows) {
        if (!rows.is_array() || rows.empty()) {
            throw std::invalid_argument("assignment matrix JSON: expected a nonempty array of rows");
        }
        RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_array() || rows[r].size() != rows[0].size()) {
                throw std::invalid_argument("assignment matrix JSON: ragged rows");
            }
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
            }
        }
        return m;
    };
    try {
        std::string form = j.at("form").get<std::string>();
        if (form == "full") {
            return full(j.at("n_qubits").get<int>(), read(j.at("matrix")));
        }
        if (form == "tensor") {
            std::vector<RealMatrix> factors;
            for (const auto &f : j.at("factors")) {
                factors.push_back(read(f));
            }
            if (j.contains("n_qubits") && j["n_qubits"].get<int>() != static_cast<int>(factors.size())) {
                throw std::invalid_argument("assignment matrix JSON: factor count differs from n_qubits");
            }
            return tensor(std::move(factors));
        }
        throw std::invalid_argument("assignment matrix JSON: unknown form '" + form + "'");
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("assignment matrix JSON: ") + e.what());
    }
}

void AssignmentMatrix::save(const std::string &path) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << to_json() << '\n';
}

AssignmentMatrix AssignmentMatrix::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

ReadoutDistribution measurement_distribution(const DensityMatrix &rho) {
    return {rho.matrix().diagonal().real(), false};
}

ReadoutDistribution sample_counts(const ReadoutDistribution &dist, std::size_t shots, Rng &rng) {
    if (shots == 0) {
        throw std::invalid_argument("sample_counts needs at least one shot");
    }
    std::vector<double> w(dist.probs.data(), dist.probs.data() + dist.probs.size());
    for (double &x : w) {
        if (x < 0) {
            throw std::invalid_argument("cannot sample from a quasi-distribution");
        }
    }
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    RealVector counts = RealVector::Zero(dist.probs.size());
    for (std::size_t s = 0; s < shots; ++s) {
        counts(static_cast<Eigen::Index>(pick(rng))) += 1;
    }
    return {counts / static_cast<double>(shots), false};
}

AssignmentMatrix calibrate(std::span<const Channel> meas_channels, int n_qubits, AssignmentMatrix::Form mode) {
    check_qubit_count(n_qubits);
    if (mode == AssignmentMatrix::Form::full) {
        if (n_qubits > kMaxFullQubits) {
            throw std::invalid_argument("full calibration is capped at 10 qubits");
        }
        const std::uint64_t dim = std::uint64_t{1} << n_qubits;
        RealMatrix a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        parallel_for(dim, [&](std::size_t y) {
            Matrix out = apply_all(DensityMatrix::basis_state(n_qubits, y), meas_channels, n_qubits);
            a.col(static_cast<Eigen::Index>(y)) = out.diagonal().real();
        });
        return AssignmentMatrix::full(n_qubits, std::move(a));
    }
    std::vector<RealMatrix> factors(static_cast<std::size_t>(n_qubits));
    parallel_for(factors.size(), [&](std::size_t q) {
        const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - static_cast<int>(q));
        RealMatrix f = RealMatrix::Zero(2, 2);
        for (int b = 0; b < 2; ++b) {
            Matrix out = apply_all(DensityMatrix::basis_state(n_qubits, b ? bit : 0), meas_channels, n_qubits);
            for (Eigen::Index i = 0; i < out.rows(); ++i) {
                f((static_cast<std::uint64_t>(i) & bit) ? 1 : 0, b) += out(i, i).real();
            }
        }
        factors[q] = std::move(f);
    });
    return AssignmentMatrix::tensor(std::move(factors));
}

ReadoutDistribution forward(const AssignmentMatrix &a, const ReadoutDistribution &p) {
    return {a.apply(p.probs), p.quasi};
}

ReadoutDistribution invert(const AssignmentMatrix &a, const ReadoutDistribution &p_noisy) {
    return {a.solve(p_noisy.probs), true};
}

double mitigated_expectation(const AssignmentMatrix &a, const RealVector &spectrum,
                             const ReadoutDistribution &p_noisy) {
    return a.solve(spectrum, true).dot(p_noisy.probs);
}

IbuResult ibu(const AssignmentMatrix &a, const ReadoutDistribution &p_noisy, int max_iterations, double tol) {
    if (max_iterations < 1) {
        throw std::invalid_argument("IBU needs at least one iteration");
    }
    if ((p_noisy.probs.array() < 0).any()) {
        throw std::invalid_argument("IBU needs a nonnegative noisy distribution");
    }
    const auto dim = p_noisy.probs.size();
    RealVector p = RealVector::Constant(dim, 1.0 / static_cast<double>(dim));
    IbuResult r;
    for (int it = 1; it <= max_iterations; ++it) {
        RealVector q = a.apply(p);
        RealVector ratio = p_noisy.probs.array() / q.array().max(1e-15);
        RealVector next = p.array() * a.apply(ratio, true).array();
        next /= next.sum();
        r.last_step = (next - p).lpNorm<1>();
        r.iterations = it;
        p = std::move(next);
        if (r.last_step < tol) {
            break;
        }
    }
    r.dist = {p, false};
    return r;
}

RealMatrix z_transfer_matrix(const AssignmentMatrix &a) {
    RealMatrix dense = a.dense();
    const auto dim = dense.rows();
    RealMatrix h(dim, dim);
    for (Eigen::Index u = 0; u < dim; ++u) {
        for (Eigen::Index x = 0; x < dim; ++x) {
            h(u, x) = (std::popcount(static_cast<std::uint64_t>(u & x)) & 1) ? -1.0 : 1.0;
        }
    }
    return h * dense * h / static_cast<double>(dim);
}

AssignmentMatrix bit_flip_twirl(const AssignmentMatrix &a) {
    RealMatrix dense = a.dense();
    const auto dim = static_cast<std::uint64_t>(dense.rows());
    RealMatrix out = RealMatrix::Zero(dense.rows(), dense.cols());
    for (std::uint64_t s = 0; s < dim; ++s) {
        for (std::uint64_t y = 0; y < dim; ++y) {
            for (std::uint64_t x = 0; x < dim; ++x) {
                out(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) +=
                    dense(static_cast<Eigen::Index>(x ^ s), static_cast<Eigen::Index>(y ^ s));
            }
        }
    }
    return AssignmentMatrix::full(a.n_qubits(), out / static_cast<double>(dim));
}

double twirl_factor(const AssignmentMatrix &a, const PauliString &z_string) {
    if (!z_string.is_diagonal() || z_string.n_qubits() != a.n_qubits()) {
        throw std::invalid_argument("twirl factor needs a Z-type string on the readout qubits");
    }
    const std::uint64_t mask = z_string.basis_z();
    RealVector s(Eigen::Index{1} << a.n_qubits());
    for (Eigen::Index x = 0; x < s.size(); ++x) {
        s(x) = (std::popcount(mask & static_cast<std::uint64_t>(x)) & 1) ? -1.0 : 1.0;
    }
    return s.dot(a.apply(s)) / static_cast<double>(s.size());
}

std::vector<double> twirled_rescale(std::span<const double> factors, std::span<const double> noisy_values) {
    if (factors.size() != noisy_values.size()) {
        throw std::invalid_argument("one twirl factor per value is required");
    }
    std::vector<double> out(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (std::abs(factors[i]) < 1e-6) {
            throw std::domain_error("twirl factor vanishes; the readout signal is unrecoverable");
        }
        out[i] = noisy_values[i] / factors[i];
    }
    return out;
}

}  // namespace qem::readout
