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

#ifndef CFMIMO_OPTIM_HPP
#define CFMIMO_OPTIM_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "perf.hpp"

namespace cfmimo {

/// Shared inputs of the power-allocation solvers.
struct SolverContext {
    const SinrTerms* terms = nullptr;
    PowerModel power;
    double p_fso_max = 0.0398; // per-AP optical forward cap [W]
    double p_rf_max = 0.1;     // per-AP radio forward cap [W]
    double ap_thermal = 0.0;   // sigma_u,m^2 entering the forward power
    int num_ans = 1;
    double bw_access = 40e6;   // for EE rows in reports
    int coherence = 100;
    int pilot_len = 20;

    double fixed_power() const { return power.fixed_power(terms->num_aps, num_ans); }
    /// Largest feasible optical/radio reform gain of AP m at the given UE powers.
    double fso_gain_cap(int m, const std::vector<double>& eta) const;
    double rf_gain_cap(int m, const std::vector<double>& eta) const;

    double sum_rate(const PowerAllocation& alloc) const;
    double ee(const PowerAllocation& alloc) const;
    /// Max constraint violation of (eta <= 1, per-AP power caps, budget).
    double feasibility_slack(const PowerAllocation& alloc) const;
};

struct IterationRow {
    int iteration = 0;
    double sum_rate = 0.0;
    double ee = 0.0;
    double surrogate = 0.0; // W-MMSE only
};

struct SolverReport {
    int iterations = 0;
    bool converged = false;
    std::string termination;
    double kkt_residual = 0.0; // GP only
    std::vector<IterationRow> trace;
};

/// CSV dump of the per-iteration trace (iteration, sum_rate, ee).
void write_solver_trace(std::ostream& os, const SolverReport& report);

/// eta_k = 1 with both reform gains at their power caps.
PowerAllocation full_power(const SolverContext& ctx);

/// Scalar-receiver mean-square decoding error of UE k at receiver u:
/// e_k = u^2 (S_k + T_k) - 2 u rho_k L_k + 1 with S_k = eta_k L_k^2 and
/// T_k the interference-plus-noise quadratic. At the minimizing receiver
/// 1/e_k = 1 + SINR_k exactly.
double mse_e_k(const SinrTerms& terms, int k, const PowerAllocation& alloc, double u);

/// Receiver minimizing mse_e_k.
double mmse_receiver(const SinrTerms& terms, int k, const PowerAllocation& alloc);

struct WmmseOptions {
    double stop_eps = 1e-3; // on the sum-rate increment per cycle
    int max_iterations = 500;
};

/// Weighted-MMSE block coordinate descent on (receivers, weights, UE
/// amplitudes, AP optical gains, AP radio gains). Every amplitude/gain
/// update is an exact box-constrained scalar minimization with the other
/// coordinates held at their freshest values, so the surrogate
/// sum(theta_k e_k - ln theta_k) never increases and every iterate is
/// feasible. Throws on an infeasible initial point.
std::pair<PowerAllocation, SolverReport> wmmse_solve(const PowerAllocation& initial,
                                                     const SolverContext& ctx,
                                                     const WmmseOptions& opts = {});

struct GpOptions {
    int max_outer = 40;        // condensation rounds
    int max_inner = 4000;      // descent steps per round
    double kkt_tol = 1e-5;
    double penalty_init = 1e2;
    double penalty_max = 1e9;
};

/// High-SINR product-of-SINRs maximization in log variables: posynomial
/// constraints become log-sum-exp, the posynomial SINR numerators are
/// monomial-condensed around the current iterate, and each round's smooth
/// penalized problem is minimized by Barzilai-Borwein descent. The
/// returned point is feasibility-restored. Throws when the power budget
/// cannot cover the fixed loads.
std::pair<PowerAllocation, SolverReport> gp_solve(const SolverContext& ctx,
                                                  const GpOptions& opts = {});

struct GridSpec {
    int eta_points = 11;  // per UE dimension
    int gain_points = 9;  // per active AP gain dimension (fraction of cap)
    int zoom_rounds = 2;
    long max_points = 10'000'000;
};

struct GridResult {
    PowerAllocation best;
    double best_ee = 0.0;
    long evaluated = 0;
};

/// Exhaustive energy-efficiency search over the feasible box, gains
/// parameterized as fractions of their eta-dependent caps, with optional
/// zoom refinement around the incumbent. Test oracle for tiny instances;
/// throws if the grid would exceed max_points.
GridResult brute_force_oracle(const SolverContext& ctx, const GridSpec& spec = {});

} // namespace cfmimo

#endif
