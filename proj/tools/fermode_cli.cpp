// Copyright 2026 The fermode Authors
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

// Command-line front end. Exit codes: 0 success, 1 input or usage error,
// 2 invariant violation, 3 demo verdict differs from the expected one.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "fermode/entanglement.hpp"
#include "fermode/error.hpp"
#include "fermode/fock.hpp"
#include "fermode/mapping.hpp"
#include "fermode/textio.hpp"
#include "fermode/trace.hpp"

namespace {

using namespace fermode;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitRegression = 3;

// Largest system handed to the consistency-condition cross-check in
// `reduce`; its linear solve grows as 64^kept.
constexpr std::size_t kOracleMaxModes = 6;
constexpr std::size_t kOracleMaxKept = 4;

struct RunConfig {
    std::string input;
    std::string modes_keep = "1";
    std::string out;
    std::uint64_t seed = 0;
    std::optional<double> tol;
    unsigned jobs = 1;
    std::size_t n_modes = 0;
    std::string demo;
    std::size_t restarts = SsrEofBudget{}.restarts;
    std::size_t iterations = SsrEofBudget{}.iterations;
};

class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string &path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open input '" + path + "'");
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_output(const RunConfig &cfg, const std::string &text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out || !(out << text)) {
        throw InputError("cannot write output '" + cfg.out + "'");
    }
}

std::vector<std::size_t> parse_mode_list(const std::string &list) {
    std::vector<std::size_t> modes;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw InputError("--modes-keep expects a comma-separated list of mode labels, got '" + list + "'");
        }
        modes.push_back(value);
    }
    if (modes.empty()) {
        throw InputError("--modes-keep is empty");
    }
    return modes;
}

DensityOperator load_state(const RunConfig &cfg, StateDocument &doc) {
    doc = parse_state(read_input(cfg.input));
    return assemble(doc);
}

int run_car_check(const RunConfig &cfg) {
    const double tol = cfg.tol.value_or(kExactTolerance);
    const double residual = car_residual(LadderOperators(cfg.n_modes));
    const CarReport report{cfg.n_modes, residual, tol, residual <= tol};
    write_output(cfg, emit_report(report));
    return report.ok ? kExitOk : kExitInvariant;
}

int run_reduce(const RunConfig &cfg) {
    StateDocument doc;
    const DensityOperator rho = load_state(cfg, doc);
    const ModePartition p(rho.n_modes(), parse_mode_list(cfg.modes_keep));
    ReductionReport report{p, inside_out_partial_trace(rho, p).matrix(), std::nullopt, {}};
    if (rho.n_modes() <= kOracleMaxModes && p.kept().size() <= kOracleMaxKept) {
        const ComplexMatrix oracle = ConsistencyOracle(p).reduce(rho).matrix();
        report.oracle_residual = max_abs_diff(oracle, report.reduced);
    } else {
        report.notes.emplace_back("consistency-condition cross-check skipped (limited to " +
                                  std::to_string(kOracleMaxModes) + " modes with at most " +
                                  std::to_string(kOracleMaxKept) + " kept)");
    }
    write_output(cfg, emit_report(report));
    const double tol = cfg.tol.value_or(1e-10);
    return report.oracle_residual.value_or(0.0) <= tol ? kExitOk : kExitInvariant;
}

int run_demo(const RunConfig &cfg) {
    SparsityPattern pattern = SparsityPattern::unrestricted(2);
    bool expected = false;
    if (cfg.demo == "two-mode-ssr") {
        pattern = SparsityPattern::charge_conserving(2, ChargePattern::uniform(2));
        expected = true;
    } else if (cfg.demo == "three-mode-ssr") {
        pattern = SparsityPattern::charge_conserving(3, ChargePattern::uniform(3));
    }
    const DemoReport report{cfg.demo, expected, consistent_mapping_search(pattern, SearchOptions{cfg.jobs})};
    write_output(cfg, emit_report(report));
    return report.matches() ? kExitOk : kExitRegression;
}

int run_measure(const RunConfig &cfg) {
    StateDocument doc;
    const DensityOperator rho = load_state(cfg, doc);
    const ModePartition p(rho.n_modes(), parse_mode_list(cfg.modes_keep));
    MeasureOptions options;
    options.charges = doc.charges;
    options.budget = {cfg.restarts, cfg.iterations};
    options.seed = cfg.seed;
    options.jobs = cfg.jobs;
    const EntanglementReport report = measure(rho, p, options);
    write_output(cfg, emit_report(report));
    return report.bound_chain_ok ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fermionic mode subsystems: reductions, qubit mappings and entanglement measures"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_out = [&](CLI::App *sub) { sub->add_option("--out", cfg.out, "Write the report to PATH instead of stdout"); };

    CLI::App *car = app.add_subcommand("car-check", "Check the anticommutation relations on n modes");
    car->add_option("--modes", cfg.n_modes, "Number of modes (1..8)")->required()->check(CLI::Range(1, 8));
    car->add_option("--tol", cfg.tol, "Largest accepted residual (default 1e-12)");
    add_out(car);

    CLI::App *reduce = app.add_subcommand("reduce", "Fermionic partial trace of a state document");
    reduce->add_option("--input", cfg.input, "State document path, or - for stdin")->required();
    reduce->add_option("--modes-keep", cfg.modes_keep, "Comma-separated kept modes (default 1)");
    reduce->add_option("--tol", cfg.tol, "Largest accepted oracle residual (default 1e-10)");
    add_out(reduce);

    CLI::App *demo = app.add_subcommand("demo", "Run a named sign-mapping experiment");
    demo->add_option("name", cfg.demo, "two-mode-free, two-mode-ssr or three-mode-ssr")
        ->required()
        ->check(CLI::IsMember({"two-mode-free", "two-mode-ssr", "three-mode-ssr"}));
    demo->add_option("--jobs", cfg.jobs, "Worker threads for the exhaustive search")->check(CLI::Range(1, 64));
    add_out(demo);

    CLI::App *meas = app.add_subcommand("measure", "Entanglement report for a state document");
    meas->add_option("--input", cfg.input, "State document path, or - for stdin")->required();
    meas->add_option("--modes-keep", cfg.modes_keep, "Comma-separated kept modes (default 1)");
    meas->add_option("--seed", cfg.seed, "Seed of the SSR decomposition search");
    meas->add_option("--restarts", cfg.restarts, "Restarts of the SSR decomposition search");
    meas->add_option("--iterations", cfg.iterations, "Iterations per restart");
    meas->add_option("--jobs", cfg.jobs, "Worker threads for the mapping search")->check(CLI::Range(1, 64));
    add_out(meas);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (car->parsed()) {
            return run_car_check(cfg);
        }
        if (reduce->parsed()) {
            return run_reduce(cfg);
        }
        if (demo->parsed()) {
            return run_demo(cfg);
        }
        return run_measure(cfg);
    } catch (const fermode::Error &e) {
        std::cerr << "fermode: " << e.what() << "\n";
        return kExitInput;
    } catch (const InputError &e) {
        std::cerr << "fermode: " << e.what() << "\n";
        return kExitInput;
    }
}
