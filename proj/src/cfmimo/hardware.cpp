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

#include "hardware.hpp"

#include <cmath>
#include <stdexcept>

namespace cfmimo {

namespace {

double clipping_gain(const ClippingConfig& cfg) {
    return cfg.laser_gain *
           std::erf(cfg.clip_level /
                    std::sqrt(2.0 * cfg.laser_gain * cfg.laser_gain * cfg.input_variance));
}

DistortionParams clipping_common(const ClippingConfig& cfg, double first_term_const) {
    if (cfg.input_variance <= 0.0) throw std::invalid_argument("input_variance must be positive");
    if (cfg.laser_gain <= 0.0) throw std::invalid_argument("laser_gain must be positive");
    if (cfg.clip_level < 0.0) throw std::invalid_argument("clip_level must be nonnegative");

    DistortionParams out;
    out.gain = clipping_gain(cfg);
    const double ratio = out.gain / cfg.laser_gain; // erf(...)
    const double mu0_sq_var = cfg.laser_gain * cfg.laser_gain * cfg.input_variance;
    const double bc_sq = cfg.clip_level * cfg.clip_level;
    double var = bc_sq * (first_term_const - ratio) + mu0_sq_var * (1.0 - ratio) * ratio -
                 std::sqrt(2.0 * bc_sq * mu0_sq_var / M_PI) * std::exp(-bc_sq / (2.0 * mu0_sq_var));
    if (var < 0.0) {
        var = 0.0;
        out.clamped = true;
    }
    out.noise_variance = var;
    return out;
}

} // namespace

DistortionParams clipping_distortion(const ClippingConfig& cfg) {
    return clipping_common(cfg, 1.0);
}

DistortionParams clipping_distortion_literal(const ClippingConfig& cfg) {
    return clipping_common(cfg, 2.0);
}

DistortionParams hi_distortion(const HiConfig& cfg) {
    if (cfg.quality < 0.0 || cfg.quality > 1.0)
        throw std::invalid_argument("hardware quality must lie in [0,1]");
    DistortionParams out;
    out.gain = std::sqrt(cfg.quality);
    out.noise_variance = (1.0 - cfg.quality) * cfg.input_variance;
    return out;
}

EffectiveNoise effective_noise_variances(const EffectiveNoiseInputs& in) {
    EffectiveNoise out;
    const double an_fso2 = in.an_fso_gain * in.an_fso_gain;
    const double an_rf2 = in.an_rf_gain * in.an_rf_gain;
    out.fso = in.ap_fso_gain * in.ap_fso_gain * an_fso2 * in.fso_mean_square * in.ap_thermal +
              an_fso2 * in.fso_mean_square * in.ap_fso_noise + an_fso2 * in.an_fso_floor +
              in.an_fso_noise + in.cpu_floor;
    out.rf = in.ap_rf_gain * in.ap_rf_gain * an_rf2 * in.rf_mean_square * in.ap_thermal +
             an_rf2 * in.rf_mean_square * in.ap_rf_noise + an_rf2 * in.an_rf_floor +
             in.an_rf_noise + in.cpu_floor;
    return out;
}

} // namespace cfmimo
