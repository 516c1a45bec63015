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

#ifndef CFMIMO_HARNESS_HPP
#define CFMIMO_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "assign.hpp"
#include "config.hpp"
#include "optim.hpp"

namespace cfmimo {

enum class Policy { fso_only, rf_only, rf_and_fso, cognitive };
enum class Solver { full, wmmse, gp };

const char* to_string(Policy p);
const char* to_string(Solver s);

/// One experiment description. Alignment counts must sum to the number of
/// APs; presets A-D fix the good/moderate/poor proportions at
/// 10/10/80, 20/20/60, 30/30/40 and 40/40/20 percent.
struct Scenario {
    std::string name = "custom"; // A, B, C, D or custom
    int good_count = 0;
    int moderate_count = 0;
    int poor_count = 0;
    Weather weather = Weather::clear;
    Policy policy = Policy::cognitive;
    Solver solver = Solver::wmmse;
    ServingMode mode = ServingMode::cell_free;
    int trials = 200;
    std::uint64_t seed = 1;

    void validate(const NetworkConfig& network) const;
};

/// Fill the alignment counts of a named preset for M APs.
void apply_alignment_preset(Scenario& scenario, int num_aps);

struct TrialResult {
    std::vector<double> sinr;  // per UE
    std::vector<double> rate;  // per UE [bits/s/Hz]
    double ee = 0.0;           // [bits/J]
    double p_net = 0.0;        // [W]
    double bw_access = 0.0;    // BW_0 [Hz]
    double sum_rate = 0.0;
    int n_fso_only = 0;
    int n_rf_only = 0;
    int n_hybrid = 0;
    bool solver_converged = true;
    int solver_iterations = 0;
};

/// Full pipeline for one Monte Carlo trial: geometry and fading draws,
/// estimation statistics, fronthaul assignment per policy, bandwidth
/// split, statistic refresh, power allocation, closed-form rates.
/// Deterministic for a given (config, scenario, trial_index).
TrialResult run_trial(const SimulationConfig& cfg, const Scenario& scenario, int trial_index,
                      std::vector<AssignmentRow>* link_rows = nullptr,
                      SolverReport* solver_report = nullptr);

struct ExperimentAggregate {
    Scenario scenario;
    std::vector<TrialResult> trials;     // indexed by trial
    std::vector<double> ee_sorted;       // CDF support
    double mean_ee = 0.0;
    double mean_sum_rate = 0.0;
    double rate_95_likely = 0.0;         // 5th percentile of pooled per-UE rates
    double mean_n_fso = 0.0, mean_n_rf = 0.0, mean_n_hybrid = 0.0;
    int nonconverged_trials = 0;
};

/// Runs all trials (concurrently; per-trial substreams keep the result
/// independent of scheduling) and aggregates.
ExperimentAggregate run_experiment(const SimulationConfig& cfg, const Scenario& scenario,
                                   int num_threads = 0);

/// Writes trials.csv, cdf.csv, assignment.csv and report.json under
/// `out_dir` (created if missing). Byte-reproducible for a fixed
/// (config, scenario): no timestamps, fixed float formatting.
void emit_outputs(const ExperimentAggregate& aggregate, const SimulationConfig& cfg,
                  const std::string& out_dir);

} // namespace cfmimo

#endif
