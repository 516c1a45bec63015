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

#ifndef CFMIMO_HARDWARE_HPP
#define CFMIMO_HARDWARE_HPP

namespace cfmimo {

/// Bussgang linearization of a signal-reform stage:
/// x_out = gain * x_in + n_d with n_d ~ CN(0, noise_variance),
/// n_d uncorrelated with x_in.
struct DistortionParams {
    double gain = 1.0;           // mu
    double noise_variance = 0.0; // delta_d^2
    bool clamped = false;        // true when a negative closed form was floored at 0
};

/// Amplitude clipping stage (optical conversion): amplify by mu_0 then
/// clip at +-clip_level. input_variance is the drive power at the clipper.
struct ClippingConfig {
    double laser_gain = 1.0;     // mu_0
    double clip_level = 1.0;     // B_c
    double input_variance = 1.0; // delta^2
};

/// Residual hardware impairments: quality in [0,1]; gain sqrt(quality),
/// distortion (1-quality) * input power. Output power equals input power.
struct HiConfig {
    double quality = 1.0;        // xi_q
    double input_variance = 1.0; // delta^2
};

/// Bussgang gain mu = mu_0 erf(B_c / sqrt(2 mu_0^2 delta^2)) and residual
/// distortion variance of the clipped Gaussian,
///   delta_d^2 = B_c^2 (1 - mu/mu_0) + mu_0^2 delta^2 (1 - mu/mu_0) mu/mu_0
///             - sqrt(2 B_c^2 mu_0^2 delta^2 / pi) exp(-B_c^2 / (2 mu_0^2 delta^2)),
/// floored at 0 (the closed form can round slightly negative). The printed
/// source expression carries (2 - mu/mu_0) in the first term, which fails
/// the no-clipping limit; see clipping_distortion_literal.
DistortionParams clipping_distortion(const ClippingConfig& cfg);

/// Literal printed variant of the clipping noise variance (first term
/// B_c^2 (2 - mu/mu_0)), kept for the comparison report.
DistortionParams clipping_distortion_literal(const ClippingConfig& cfg);

DistortionParams hi_distortion(const HiConfig& cfg);

/// Inputs for the end-to-end fronthaul-noise variances of one AP->AN link.
struct EffectiveNoiseInputs {
    // AP-side reform stages (optical / radio branch).
    double ap_fso_gain = 1.0;      // mu_m
    double ap_fso_noise = 0.0;     // delta_d,m^2
    double ap_rf_gain = 1.0;       // mu'_m
    double ap_rf_noise = 0.0;      // delta'_d,m^2
    // AN-side reform stages.
    double an_fso_gain = 1.0;      // mu_am
    double an_fso_noise = 0.0;     // delta_d,am^2
    double an_rf_gain = 1.0;       // mu'_am
    double an_rf_noise = 0.0;      // delta'_d,am^2
    // Link statistics.
    double fso_mean_square = 0.0;  // Gamma^2_am
    double rf_mean_square = 0.0;   // beta_am
    // Additive noise floors.
    double ap_thermal = 0.0;       // sigma_u,m^2
    double an_fso_floor = 0.0;     // (phi_u,am^FSO)^2
    double an_rf_floor = 0.0;      // (phi_u,am^RF)^2
    double cpu_floor = 0.0;        // phi_CPU^2
};

struct EffectiveNoise {
    double fso = 0.0; // Omega^2_u,am
    double rf = 0.0;  // Omega'^2_u,am
};

/// Variance of the total additive disturbance accumulated through each
/// branch (all stages mutually uncorrelated, so variances add):
/// Omega^2 = mu_m^2 mu_am^2 G2 s_u^2 + mu_am^2 G2 d_m^2 + mu_am^2 phi^2
///           + d_am^2 + phi_cpu^2, and the radio twin with beta_am.
EffectiveNoise effective_noise_variances(const EffectiveNoiseInputs& in);

} // namespace cfmimo

#endif
