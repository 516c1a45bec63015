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

#include "config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cfmimo {

using nlohmann::json;

double NoiseParams::thermal(double bandwidth_hz) const {
    return boltzmann * temperature_k * bandwidth_hz * db_to_linear(noise_figure_db);
}

double TransmitParams::ap_fso_max_w() const { return dbm_to_watt(ap_fso_max_dbm); }
double TransmitParams::ap_rf_max_w() const { return dbm_to_watt(ap_rf_max_dbm); }

void SimulationConfig::validate() const {
    network.validate();
    if (large_scale.d0 >= large_scale.d1)
        throw std::invalid_argument("d0 must be smaller than d1");
    if (large_scale.freq_mhz <= 0.0) throw std::invalid_argument("carrier frequency must be positive");
    if (hardware.rf_quality < 0.0 || hardware.rf_quality > 1.0)
        throw std::invalid_argument("rf_quality must lie in [0,1]");
    if (hardware.clip_level < 0.0 || hardware.laser_gain <= 0.0)
        throw std::invalid_argument("clipping parameters out of range");
    if (transmit.ue_power <= 0.0 || transmit.pilot_power <= 0.0)
        throw std::invalid_argument("transmit powers must be positive");
    if (noise.optical_floor <= 0.0 || noise.cpu_floor <= 0.0)
        throw std::invalid_argument("noise floors must be positive");
    if (power.ue_power <= 0.0 || power.ap_circuit < 0.0 || power.an_circuit < 0.0 ||
        power.ap_fronthaul < 0.0 || power.an_backhaul < 0.0 || power.power_budget <= 0.0)
        throw std::invalid_argument("power model entries out of range");
    FsoLinkParams probe;
    probe.wavelength = fso.wavelength;
    probe.cn2 = fso.cn2;
    probe.jitter_sigma = fso.jitter_sigma;
    probe.beam_waist = fso.beam_waist;
    probe.receiver_radius = fso.receiver_radius;
    probe.divergence = fso.divergence;
    probe.validate();
}

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

ServingMode parse_mode(const std::string& s) {
    if (s == "cf" || s == "cell_free") return ServingMode::cell_free;
    if (s == "uc" || s == "user_centric") return ServingMode::user_centric;
    throw std::runtime_error("unknown serving mode: " + s);
}

} // namespace

SimulationConfig parse_config(const std::string& json_text) {
    SimulationConfig cfg;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    try {
        if (j.contains("network")) {
            const json& n = j["network"];
            get_if(n, "area_side_m", cfg.network.area_side);
            get_if(n, "num_ues", cfg.network.num_ues);
            get_if(n, "num_aps", cfg.network.num_aps);
            get_if(n, "num_antennas", cfg.network.num_antennas);
            get_if(n, "num_ans", cfg.network.num_ans);
            get_if(n, "an_ring_radius_m", cfg.network.an_ring_radius);
            get_if(n, "cluster_size", cfg.network.cluster_size);
            get_if(n, "rf_bandwidth_hz", cfg.network.rf_bandwidth);
            get_if(n, "h_ue_m", cfg.network.h_ue);
            get_if(n, "h_ap_m", cfg.network.h_ap);
            get_if(n, "h_an_m", cfg.network.h_an);
            get_if(n, "coherence_symbols", cfg.network.coherence);
            get_if(n, "pilot_symbols", cfg.network.pilot_len);
            if (n.contains("mode")) cfg.network.mode = parse_mode(n["mode"].get<std::string>());
        }
        if (j.contains("large_scale")) {
            const json& n = j["large_scale"];
            get_if(n, "d0_m", cfg.large_scale.d0);
            get_if(n, "d1_m", cfg.large_scale.d1);
            get_if(n, "freq_mhz", cfg.large_scale.freq_mhz);
            get_if(n, "shadow_sigma_db", cfg.large_scale.shadow_sigma_db);
        }
        if (j.contains("fso")) {
            const json& n = j["fso"];
            get_if(n, "wavelength_m", cfg.fso.wavelength);
            get_if(n, "cn2", cfg.fso.cn2);
            get_if(n, "jitter_sigma_m", cfg.fso.jitter_sigma);
            get_if(n, "beam_waist_m", cfg.fso.beam_waist);
            get_if(n, "receiver_radius_m", cfg.fso.receiver_radius);
            get_if(n, "divergence_rad", cfg.fso.divergence);
        }
        if (j.contains("hardware")) {
            const json& n = j["hardware"];
            get_if(n, "clip_level", cfg.hardware.clip_level);
            get_if(n, "laser_gain", cfg.hardware.laser_gain);
            get_if(n, "rf_quality", cfg.hardware.rf_quality);
            get_if(n, "responsivity_fso", cfg.hardware.responsivity_fso);
            get_if(n, "responsivity_fiber", cfg.hardware.responsivity_fiber);
        }
        if (j.contains("noise")) {
            const json& n = j["noise"];
            get_if(n, "boltzmann", cfg.noise.boltzmann);
            get_if(n, "temperature_k", cfg.noise.temperature_k);
            get_if(n, "noise_figure_db", cfg.noise.noise_figure_db);
            get_if(n, "optical_floor_a2", cfg.noise.optical_floor);
            get_if(n, "cpu_floor_a2", cfg.noise.cpu_floor);
        }
        if (j.contains("transmit")) {
            const json& n = j["transmit"];
            get_if(n, "ue_power_w", cfg.transmit.ue_power);
            get_if(n, "pilot_power_w", cfg.transmit.pilot_power);
            get_if(n, "ap_fso_max_dbm", cfg.transmit.ap_fso_max_dbm);
            get_if(n, "ap_rf_max_dbm", cfg.transmit.ap_rf_max_dbm);
        }
        if (j.contains("power")) {
            const json& n = j["power"];
            get_if(n, "ap_circuit_w", cfg.power.ap_circuit);
            get_if(n, "an_circuit_w", cfg.power.an_circuit);
            get_if(n, "ap_fronthaul_w", cfg.power.ap_fronthaul);
            get_if(n, "an_backhaul_w", cfg.power.an_backhaul);
            get_if(n, "budget_w", cfg.power.power_budget);
        }
        if (j.contains("assign")) {
            const json& n = j["assign"];
            get_if(n, "theta_dom", cfg.alignment_thresholds.theta_dom);
            get_if(n, "theta_eq", cfg.alignment_thresholds.theta_eq);
            get_if(n, "theta_zero", cfg.alignment_thresholds.theta_zero);
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config field error: ") + e.what());
    }
    cfg.power.ue_power = cfg.transmit.ue_power;
    cfg.large_scale.h_tx = cfg.network.h_ap;
    cfg.large_scale.h_rx = cfg.network.h_ue;
    cfg.validate();
    return cfg;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const SimulationConfig& cfg) {
    json j;
    j["network"] = {{"area_side_m", cfg.network.area_side},
                    {"num_ues", cfg.network.num_ues},
                    {"num_aps", cfg.network.num_aps},
                    {"num_antennas", cfg.network.num_antennas},
                    {"num_ans", cfg.network.num_ans},
                    {"an_ring_radius_m", cfg.network.an_ring_radius},
                    {"cluster_size", cfg.network.cluster_size},
                    {"mode", cfg.network.mode == ServingMode::cell_free ? "cf" : "uc"},
                    {"rf_bandwidth_hz", cfg.network.rf_bandwidth},
                    {"h_ue_m", cfg.network.h_ue},
                    {"h_ap_m", cfg.network.h_ap},
                    {"h_an_m", cfg.network.h_an},
                    {"coherence_symbols", cfg.network.coherence},
                    {"pilot_symbols", cfg.network.pilot_len}};
    j["large_scale"] = {{"d0_m", cfg.large_scale.d0},
                        {"d1_m", cfg.large_scale.d1},
                        {"freq_mhz", cfg.large_scale.freq_mhz},
                        {"shadow_sigma_db", cfg.large_scale.shadow_sigma_db}};
    j["fso"] = {{"wavelength_m", cfg.fso.wavelength},
                {"cn2", cfg.fso.cn2},
                {"jitter_sigma_m", cfg.fso.jitter_sigma},
                {"beam_waist_m", cfg.fso.beam_waist},
                {"receiver_radius_m", cfg.fso.receiver_radius},
                {"divergence_rad", cfg.fso.divergence}};
    j["hardware"] = {{"clip_level", cfg.hardware.clip_level},
                     {"laser_gain", cfg.hardware.laser_gain},
                     {"rf_quality", cfg.hardware.rf_quality},
                     {"responsivity_fso", cfg.hardware.responsivity_fso},
                     {"responsivity_fiber", cfg.hardware.responsivity_fiber}};
    j["noise"] = {{"boltzmann", cfg.noise.boltzmann},
                  {"temperature_k", cfg.noise.temperature_k},
                  {"noise_figure_db", cfg.noise.noise_figure_db},
                  {"optical_floor_a2", cfg.noise.optical_floor},
                  {"cpu_floor_a2", cfg.noise.cpu_floor}};
    j["transmit"] = {{"ue_power_w", cfg.transmit.ue_power},
                     {"pilot_power_w", cfg.transmit.pilot_power},
                     {"ap_fso_max_dbm", cfg.transmit.ap_fso_max_dbm},
                     {"ap_rf_max_dbm", cfg.transmit.ap_rf_max_dbm}};
    j["power"] = {{"ap_circuit_w", cfg.power.ap_circuit},
                  {"an_circuit_w", cfg.power.an_circuit},
                  {"ap_fronthaul_w", cfg.power.ap_fronthaul},
                  {"an_backhaul_w", cfg.power.an_backhaul},
                  {"budget_w", cfg.power.power_budget}};
    j["assign"] = {{"theta_dom", cfg.alignment_thresholds.theta_dom},
                   {"theta_eq", cfg.alignment_thresholds.theta_eq},
                   {"theta_zero", cfg.alignment_thresholds.theta_zero}};
    return j.dump(2);
}

} // namespace cfmimo
