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

#ifndef CFMIMO_CONFIG_HPP
#define CFMIMO_CONFIG_HPP

#include <string>

#include "assign.hpp"
#include "channel.hpp"
#include "perf.hpp"
#include "topology.hpp"

namespace cfmimo {

/// Common FSO plant parameters; per-link distance/offset/attenuation are
/// filled in by the harness.
struct FsoSystemParams {
    double wavelength = 1550e-9;
    double cn2 = 5e-14;
    double jitter_sigma = 0.30;
    double beam_waist = 2.5;
    double receiver_radius = 0.10;
    double divergence = 5.3e-3;
};

/// Reform-stage hardware: clipping at the optical drivers (relative clip
/// level, unit-variance normalized) and a quality factor for the radio
/// repeater chain. Responsivities scale the AN-side conversion gains.
struct HardwareParams {
    double clip_level = 1.0;       // B_c relative to the drive amplitude
    double laser_gain = 1.0;       // mu_0
    double rf_quality = 0.98;      // xi_q in [0,1]
    double responsivity_fso = 0.5; // R_FSO
    double responsivity_fiber = 1.0; // R_OF
};

struct NoiseParams {
    double boltzmann = 1.381e-23;
    double temperature_k = 290.0;
    double noise_figure_db = 9.0;
    double optical_floor = 1e-14; // (phi^FSO)^2 and pilot twin [A^2]
    double cpu_floor = 1e-14;     // phi_CPU^2 [A^2]

    /// kB T0 BW F for a given bandwidth.
    double thermal(double bandwidth_hz) const;
};

struct TransmitParams {
    double ue_power = 0.1;       // rho_u [W]
    double pilot_power = 0.1;    // rho_p [W]
    double ap_fso_max_dbm = 16.0;
    double ap_rf_max_dbm = 20.0;

    double ap_fso_max_w() const;
    double ap_rf_max_w() const;
};

struct SimulationConfig {
    NetworkConfig network;
    LargeScaleModel large_scale; // heights overridden from network
    FsoSystemParams fso;
    HardwareParams hardware;
    NoiseParams noise;
    TransmitParams transmit;
    PowerModel power;
    AlignmentThresholds alignment_thresholds; // theta_zero relative to incident

    void validate() const;
};

/// Parse a JSON config (missing fields keep their defaults). Throws
/// std::runtime_error with a readable message on malformed input.
SimulationConfig load_config(const std::string& path);
SimulationConfig parse_config(const std::string& json_text);

/// Serialize the effective configuration (for the run report).
std::string config_to_json(const SimulationConfig& cfg);

} // namespace cfmimo

#endif
