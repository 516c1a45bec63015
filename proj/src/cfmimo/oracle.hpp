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

#ifndef CFMIMO_ORACLE_HPP
#define CFMIMO_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "channel.hpp"
#include "estimation.hpp"
#include "perf.hpp"
#include "topology.hpp"

namespace cfmimo {

/// Everything needed to run the physical uplink chain of one network
/// realization: pilots -> LMMSE -> data symbols -> AP reform -> fronthaul
/// -> AN reform -> CPU combining. Pointers reference caller-owned state.
struct ChainInstance {
    const Topology* topo = nullptr;
    int num_antennas = 1;
    double ue_power = 0.1;

    const Matrix* beta_access = nullptr;
    const std::vector<double>* beta_fronthaul = nullptr;
    const std::vector<FsoLinkParams>* fso_links = nullptr;
    const FronthaulAssignment* assignment = nullptr;
    PowerAllocation alloc;

    const std::vector<double>* an_fso_gain = nullptr;
    const std::vector<double>* an_rf_gain = nullptr;
    const std::vector<double>* an_fso_noise = nullptr;
    const std::vector<double>* an_rf_noise = nullptr;
    const std::vector<double>* ap_fso_noise = nullptr;
    const std::vector<double>* ap_rf_noise = nullptr;
    double ap_thermal = 0.0;
    double an_fso_floor = 0.0;
    const std::vector<double>* an_rf_floor = nullptr;
    double cpu_floor = 0.0;

    PilotConfig access_pilots;                       // noise = sigma_p^2
    PilotConfig fso_pilots;                          // noise = (phi_p^FSO)^2
    const std::vector<PilotConfig>* rf_pilots = nullptr; // per AP, post-split noise

    /// Treat the optical gains as known at the combiner (the convention the
    /// closed form defaults to); false runs the LMMSE optical estimator.
    bool perfect_fso_csi = true;
};

/// Monte Carlo estimates of the four moment groups behind the SINR and
/// their ratio. `iui_by_ue` holds the per-interferer contributions.
struct OracleMoments {
    double ds = 0.0;
    double ds_sq = 0.0;
    double bu = 0.0;
    double iui_total = 0.0;
    double noise = 0.0;
    std::vector<double> iui_by_ue;

    double sinr() const {
        const double den = bu + iui_total + noise;
        return den > 0.0 ? ds_sq / den : 0.0;
    }
};

/// Simulates `trials` independent chain realizations and accumulates the
/// desired-signal, beamforming-uncertainty, inter-user-interference and
/// additive-noise moments of UE k at the combiner output. Independent of
/// the closed-form path: it draws physical channels and noises and forms
/// the per-realization combining coefficients directly.
OracleMoments empirical_sinr_oracle(const ChainInstance& inst, int k, int trials,
                                    std::uint64_t seed);

/// Chain self-check: for one realization, forms the received combiner
/// output from the physically propagated signal vectors and verifies it
/// equals the coefficient decomposition. Returns the max absolute error.
double oracle_chain_identity_error(const ChainInstance& inst, std::uint64_t seed);

} // namespace cfmimo

#endif
