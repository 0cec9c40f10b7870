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

// qem: run mitigation experiments, calibrate readout, compare results.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid config or input, 3 simulation failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qem/cli/compare.hpp"
#include "qem/cli/config.hpp"
#include "qem/cli/runner.hpp"

namespace {

constexpr int kIoError = 1;
constexpr int kSchemaError = 2;
constexpr int kSimulationError = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content)) {
        throw IoError("cannot write " + path.string());
    }
}

int cmd_run(const std::string &config_path, const std::string &out_dir) {
    qem::cli::ExperimentConfig cfg = qem::cli::load_config(config_path);
    qem::cli::RunOutput out;
    try {
        out = qem::cli::run_experiment(cfg);
    } catch (const qem::cli::ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        std::cerr << "simulation failed: " << e.what() << '\n';
        return kSimulationError;
    }
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / "results.csv", qem::cli::results_csv(out));
    write_file(std::filesystem::path(out_dir) / "sweep.csv", qem::cli::sweep_csv(out));
    return 0;
}

int cmd_calibrate(const std::string &config_path, const std::string &output) {
    qem::cli::ExperimentConfig cfg = qem::cli::load_config(config_path);
    qem::readout::AssignmentMatrix a;
    try {
        a = qem::cli::calibrate_from_config(cfg);
    } catch (const qem::cli::ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        std::cerr << "calibration failed: " << e.what() << '\n';
        return kSimulationError;
    }
    write_file(output, a.to_json() + "\n");
    std::cerr << "condition number " << a.condition_number() << '\n';
    return 0;
}

int cmd_compare(const std::string &csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw IoError("cannot read " + csv_path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<qem::cli::CompareRow> rows;
    try {
        rows = qem::cli::parse_results(ss.str());
    } catch (const std::invalid_argument &e) {
        throw qem::cli::ConfigError(csv_path + ": " + e.what());
    }
    qem::cli::rank_rows(rows);
    std::cout << qem::cli::format_comparison(rows);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum error mitigation experiments on an exact density-matrix simulator"};
    app.require_subcommand(1);

    std::string run_config;
    std::string out_dir = ".";
    auto *run = app.add_subcommand("run", "Run every method block; write results.csv and sweep.csv");
    run->add_option("config", run_config, "Experiment config (JSON)")->required();
    run->add_option("-d,--out-dir", out_dir, "Directory for the CSV outputs");

    std::string cal_config;
    std::string cal_output;
    auto *cal = app.add_subcommand("calibrate-readout", "Calibrate the assignment matrix of the readout block");
    cal->add_option("config", cal_config, "Experiment config (JSON)")->required();
    cal->add_option("-o,--output", cal_output, "Assignment matrix file (JSON)")->required();

    std::string csv_path;
    auto *cmp = app.add_subcommand("compare", "Tabulate bias, variance and overheads of a results.csv");
    cmp->add_option("results", csv_path, "results.csv from qem run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kSchemaError;
    }

    try {
        if (*run) {
            return cmd_run(run_config, out_dir);
        }
        if (*cal) {
            return cmd_calibrate(cal_config, cal_output);
        }
        return cmd_compare(csv_path);
    } catch (const qem::cli::ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSchemaError;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    }
}
