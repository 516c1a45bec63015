// SPDX-License-Identifier: Apache-2.0
//
// cfmimo-sim — link-level simulator for cell-free massive MIMO uplink
// with hybrid RF/FSO fronthaul
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cfmimo/harness.hpp"

namespace {

int parse_enum(const std::string& value, cfmimo::Weather& out) {
    using cfmimo::Weather;
    if (value == "clear") out = Weather::clear;
    else if (value == "rainy") out = Weather::rainy;
    else if (value == "snowy") out = Weather::snowy;
    else if (value == "foggy") out = Weather::foggy;
    else return 1;
    return 0;
}

int parse_enum(const std::string& value, cfmimo::Policy& out) {
    using cfmimo::Policy;
    if (value == "fso") out = Policy::fso_only;
    else if (value == "rf") out = Policy::rf_only;
    else if (value == "both") out = Policy::rf_and_fso;
    else if (value == "cognitive") out = Policy::cognitive;
    else return 1;
    return 0;
}

int parse_enum(const std::string& value, cfmimo::Solver& out) {
    using cfmimo::Solver;
    if (value == "full") out = Solver::full;
    else if (value == "wmmse") out = Solver::wmmse;
    else if (value == "gp") out = Solver::gp;
    else return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uplink Monte Carlo simulator for cell-free massive MIMO with "
                 "cognitively assigned RF/FSO fronthaul"};

    std::string config_path;
    std::string scenario_name = "custom";
    std::string weather_s = "clear", policy_s = "cognitive", solver_s = "wmmse", mode_s = "cf";
    int trials = 200;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 0;
    int good = -1, moderate = -1, poor = -1;
    bool dump_links = false;
    bool dump_solver_trace = false;

    app.add_option("--config", config_path, "JSON config file (defaults used when omitted)");
    app.add_option("--scenario", scenario_name, "A|B|C|D|custom (alignment mix preset)");
    app.add_option("--weather", weather_s, "clear|rainy|snowy|foggy");
    app.add_option("--policy", policy_s, "fso|rf|both|cognitive");
    app.add_option("--solver", solver_s, "full|wmmse|gp");
    app.add_option("--mode", mode_s, "cf|uc");
    app.add_option("--trials", trials, "Monte Carlo trials");
    app.add_option("--seed", seed, "base seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_option("--good", good, "good-aligned links (custom scenario)");
    app.add_option("--moderate", moderate, "moderately aligned links (custom scenario)");
    app.add_option("--poor", poor, "poorly aligned links (custom scenario)");
    app.add_flag("--dump-links", dump_links, "write links.csv with trial 0's per-link assignment");
    app.add_flag("--dump-solver-trace", dump_solver_trace,
                 "write solver_trace.csv for trial 0's allocation solve");

    CLI11_PARSE(app, argc, argv);

    cfmimo::SimulationConfig cfg;
    cfmimo::Scenario scenario;
    try {
        if (!config_path.empty()) cfg = cfmimo::load_config(config_path);
        else cfg.validate();

        scenario.name = scenario_name;
        scenario.trials = trials;
        scenario.seed = seed;
        if (parse_enum(weather_s, scenario.weather) || parse_enum(policy_s, scenario.policy) ||
            parse_enum(solver_s, scenario.solver)) {
            std::cerr << "error: unknown weather/policy/solver value\n";
            return 2;
        }
        if (mode_s == "cf") scenario.mode = cfmimo::ServingMode::cell_free;
        else if (mode_s == "uc") scenario.mode = cfmimo::ServingMode::user_centric;
        else {
            std::cerr << "error: unknown mode " << mode_s << "\n";
            return 2;
        }
        cfg.network.mode = scenario.mode;

        cfmimo::apply_alignment_preset(scenario, cfg.network.num_aps);
        if (scenario.name == "custom") {
            // Default custom mix: all links well aligned.
            scenario.good_count = good >= 0 ? good : cfg.network.num_aps;
            scenario.moderate_count = moderate >= 0 ? moderate : 0;
            scenario.poor_count = poor >= 0 ? poor : cfg.network.num_aps - scenario.good_count -
                                                         scenario.moderate_count;
        }
        scenario.validate(cfg.network);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        const cfmimo::ExperimentAggregate agg = cfmimo::run_experiment(cfg, scenario, threads);
        cfmimo::emit_outputs(agg, cfg, out_dir);

        if (dump_links || dump_solver_trace) {
            std::vector<cfmimo::AssignmentRow> rows;
            cfmimo::SolverReport report;
            cfmimo::run_trial(cfg, scenario, 0, dump_links ? &rows : nullptr,
                              dump_solver_trace ? &report : nullptr);
            if (dump_links) {
                std::ofstream os(std::filesystem::path(out_dir) / "links.csv", std::ios::binary);
                cfmimo::dump_assignment_csv(os, rows);
            }
            if (dump_solver_trace) {
                std::ofstream os(std::filesystem::path(out_dir) / "solver_trace.csv",
                                 std::ios::binary);
                cfmimo::write_solver_trace(os, report);
            }
        }

        std::printf("scenario %s weather %s policy %s solver %s mode %s: %d trials\n",
                    scenario.name.c_str(), weather_s.c_str(), policy_s.c_str(), solver_s.c_str(),
                    mode_s.c_str(), scenario.trials);
        std::printf("mean EE %.6g Mbits/J, mean sum rate %.6g bits/s/Hz, 95%%-likely rate %.6g\n",
                    agg.mean_ee / 1e6, agg.mean_sum_rate, agg.rate_95_likely);
        std::printf("mean links: fso-only %.2f, rf-only %.2f, hybrid %.2f\n", agg.mean_n_fso,
                    agg.mean_n_rf, agg.mean_n_hybrid);
        if (agg.nonconverged_trials > 0) {
            std::fprintf(stderr, "warning: solver failed to converge in %d trial(s)\n",
                         agg.nonconverged_trials);
            return 3;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
