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

#ifndef CFMIMO_PERF_HPP
#define CFMIMO_PERF_HPP

#include <vector>

#include "estimation.hpp"
#include "hardware.hpp"
#include "matrix.hpp"
#include "topology.hpp"

namespace cfmimo {

/// Joint second/fourth-order moments of one fronthaul branch's
/// (estimate, channel) pair: cross = E{est* ch}, est_sq = E{|est|^2},
/// joint4 = E{|est|^2 |ch|^2}. For the LMMSE estimators cross == est_sq.
struct BranchMoments {
    double cross = 0.0;
    double est_sq = 0.0;
    double joint4 = 0.0;
};

/// Perfectly known optical gain: est == ch, so the moments are the raw
/// second and fourth moments of the gain.
BranchMoments fso_branch_perfect(double gamma2, double gamma4);

/// LMMSE-estimated optical gain: est = zeta (sqrt(tp p) ch + noise).
BranchMoments fso_branch_lmmse(double gamma2, double gamma4, double zeta,
                               const PilotConfig& pilots);

/// LMMSE-estimated Rayleigh radio link with prior power beta:
/// joint4 = gamma (gamma + beta) by joint Gaussianity.
BranchMoments rf_branch_lmmse(double beta, double gamma);

/// How the quadratic combining terms are evaluated.
///   exact:   moments carried exactly (optical fourth moment, estimate/
///            channel correlation, hybrid-branch cross terms, antenna
///            count). This is what the Monte Carlo chain reproduces.
///   printed: the closed form as printed in the source material, which
///            substitutes Gaussian fourth moments for the optical branch
///            and drops hybrid cross terms. Kept for comparison reports.
enum class TermConvention { exact, printed };

/// Per-network inputs needed to assemble the combining statistics.
struct SinrInputs {
    const Topology* topo = nullptr;
    int num_antennas = 1;
    double ue_power = 0.1; // rho_u [W]

    // Access statistics (per m,k).
    const Matrix* beta_access = nullptr;
    const Matrix* gamma_access = nullptr; // per-antenna estimate mean square

    // Fronthaul branch moments (per AP).
    const std::vector<BranchMoments>* fso = nullptr;
    const std::vector<BranchMoments>* rf = nullptr;

    // Assignment and AN-side fixed reform gains/noises (per AP).
    const FronthaulAssignment* assignment = nullptr;
    const std::vector<double>* an_fso_gain = nullptr;   // mu_am
    const std::vector<double>* an_rf_gain = nullptr;    // mu'_am
    const std::vector<double>* an_fso_noise = nullptr;  // delta_d,am^2
    const std::vector<double>* an_rf_noise = nullptr;   // delta'_d,am^2

    // AP-side distortion noises (per AP) and additive floors.
    const std::vector<double>* ap_fso_noise = nullptr;  // delta_d,m^2
    const std::vector<double>* ap_rf_noise = nullptr;   // delta'_d,m^2
    double ap_thermal = 0.0;                            // sigma_u,m^2
    double an_fso_floor = 0.0;                          // (phi_u^FSO)^2
    const std::vector<double>* an_rf_floor = nullptr;   // (phi_u,am^RF)^2 per AP
    double cpu_floor = 0.0;                             // phi_CPU^2
};

/**
 * Combining statistics of the use-and-then-forget SINR, laid out per
 * serving (m,k) pair so the power allocators can evaluate and
 * differentiate the closed form cheaply:
 *
 *   SINR_k = eta_k * L_k^2 / T_k,
 *   L_k = sum_m [ mu_m A(m,k) + mu'_m A'(m,k) ],
 *   T_k = sum_m [ mu_m^2 (C W_m + E eta_k) + mu'_m^2 (C' W_m + E' eta_k)
 *                 + mu_m mu'_m X W_m ] + D_k,
 *   D_k = sum_m [ d0 + mu_m^2 d1 + mu'_m^2 d2 + mu_m mu'_m d3 ],
 *   W_m = sum_k' eta_k' beta_mk'.
 *
 * A carries the mean effective channel; C scales every transmitter's
 * leakage through link m; E is the beamforming-uncertainty excess of the
 * served UE itself; X is the hybrid-branch coupling; d* hold the additive
 * noise chain. All entries are nonnegative.
 */
struct SinrTerms {
    int num_ues = 0;
    int num_aps = 0;
    int num_antennas = 1;
    double ue_power = 0.1;
    TermConvention convention = TermConvention::exact;

    // M x K, zero where AP m does not serve UE k.
    Matrix a_fso, a_rf;     // A, A'
    Matrix c_fso, c_rf;     // C, C'
    Matrix e_fso, e_rf;     // E, E'
    Matrix x_cross;         // X
    Matrix d0, d1, d2, d3;

    Matrix beta;            // copy of beta_access (W_m sums)
    Matrix serve;           // 0/1 serving mask
};

SinrTerms sinr_terms(const SinrInputs& in, TermConvention convention = TermConvention::exact);

/// UE transmit coefficients eta_k in [0,1] and AP reform gains.
struct PowerAllocation {
    std::vector<double> eta;      // per UE
    std::vector<double> mu_fso;   // mu_m
    std::vector<double> mu_rf;    // mu'_m
};

/// The four moment groups behind the SINR of one UE, all closed form.
struct SinrBreakdown {
    double ds_sq = 0.0;     // |desired signal|^2
    double bu = 0.0;        // beamforming-uncertainty power
    double iui = 0.0;       // total inter-user interference power
    double noise = 0.0;     // effective additive noise power

    double sinr() const {
        const double den = bu + iui + noise;
        if (ds_sq == 0.0) return 0.0;
        return ds_sq / den;
    }
};

SinrBreakdown sinr_breakdown(const SinrTerms& terms, int k, const PowerAllocation& alloc);

double sinr_closed_form(const SinrTerms& terms, int k, const PowerAllocation& alloc);

/// log2(1 + sinr); rejects negative inputs.
double rate_bits_per_symbol(double sinr);

/// Fixed circuit/fronthaul/backhaul power model.
struct PowerModel {
    double ue_power = 0.1;       // rho_u [W]
    double ap_circuit = 0.2;     // P_c,m
    double an_circuit = 0.5;     // P_c,a
    double ap_fronthaul = 0.1;   // P_fh,m
    double an_backhaul = 0.5;    // P_bh,a
    double power_budget = 60.0;  // P_0

    double fixed_power(int num_aps, int num_ans) const {
        return num_aps * (ap_circuit + ap_fronthaul) + num_ans * (an_circuit + an_backhaul);
    }
};

double net_power(const PowerAllocation& alloc, const PowerModel& model, int num_aps, int num_ans);

/// (tau - tau_p)/tau * BW_0 * sum rates / P_net  [bits/J].
double energy_efficiency(const std::vector<double>& rates, double p_net, double bw_access,
                         int coherence, int pilot_len);

} // namespace cfmimo

#endif
