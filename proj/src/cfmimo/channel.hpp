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

#ifndef CFMIMO_CHANNEL_HPP
#define CFMIMO_CHANNEL_HPP

#include <complex>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"
#include "topology.hpp"

namespace cfmimo {

/// Three-slope propagation model (COST-231 fixed term, distances in km
/// inside the logs). Shadowing is applied on the far slope only.
struct LargeScaleModel {
    double d0 = 10.0;          // [m]
    double d1 = 50.0;          // [m]
    double freq_mhz = 1900.0;  // access carrier
    double shadow_sigma_db = 8.0;
    double h_tx = 15.0;        // base-station-side height [m]
    double h_rx = 1.65;        // terminal-side height [m]
};

/// COST-231 fixed loss L [dB] for frequency [MHz] and heights [m].
double cost231_fixed_loss_db(double freq_mhz, double h_base, double h_terminal);

/// Deterministic three-slope path loss [dB] (negative gain), d in meters.
double three_slope_path_loss_db(const LargeScaleModel& model, double dist_m);

/// Access large-scale gains beta_mk (linear power gain), shadowed on the
/// far slope with i.i.d. N(0,1) deviates. Deterministic under seed.
Matrix access_large_scale(const Topology& topo, const LargeScaleModel& model, Rng& rng);

/// Fronthaul AP->AN large-scale gains beta_am (linear), same model with
/// AN/AP heights substituted. One entry per AP (its serving AN link).
std::vector<double> fronthaul_rf_large_scale(const Topology& topo, const LargeScaleModel& model,
                                             Rng& rng);

/**
 * Free-space-optics link description. The optical intensity gain is
 *   I_fso = I_l * I_t * I_p
 * with deterministic path loss I_l, log-normal turbulence I_t
 * (E{I_t} = 1) and bounded pointing gain I_p in [0, I_0].
 *
 * Pointing parameterization: v = sqrt(pi/2) * r_a / r_s compares the
 * receiver radius against the boresight offset, so I_0 = erf(v)^2 decays
 * monotonically as the beam walks off the detector and tends to 1 for a
 * centered beam. The equivalent beamwidth w_zeq and jitter ratio
 * xi = w_zeq / (2 sigma_s) follow the usual misalignment fading model.
 */
struct FsoLinkParams {
    double wavelength = 1550e-9;    // [m]
    double aperture_area = 0.0;     // A_r [m^2]; 0 -> pi * r_a^2
    double divergence = 5.3e-3;     // phi_r [rad]
    double distance = 300.0;        // d_am [m]
    double cn2 = 5e-14;             // refraction structure index [m^-2/3]
    double atten_db_per_km = 0.44;  // weather attenuation
    double beam_waist = 2.5;        // w_z at the detector plane [m]
    double radial_offset = 1.0;     // r_s boresight displacement [m]
    double jitter_sigma = 0.30;     // sigma_s [m]
    double receiver_radius = 0.10;  // r_a [m]

    double effective_aperture() const;
    double atten_per_m() const;     // natural units 1/m
    double wave_number() const;     // k = 2 pi / lambda
    double log_amplitude_var() const; // delta_l^2 = 0.307 Cn^2 k^{7/6} d^{11/6}
    double pointing_v() const;
    double w_zeq_sq() const;
    double pointing_xi() const;     // xi
    double pointing_i0() const;     // I_0

    void validate() const;
};

struct FsoPathLoss {
    double with_attenuation = 0.0; // I_l
    double geometric = 0.0;        // I_l' (no atmospheric absorption)
};

/// I_l = A_r exp(-gamma d) / (phi_r d)^2, gamma converted from dB/km to
/// natural units per meter. Throws on d == 0.
FsoPathLoss fso_path_loss(const FsoLinkParams& link);

/// One channel draw I_fso = I_l * I_t * I_p. Turbulence is sampled from
/// ln I_t ~ N(-2 delta^2, 4 delta^2); pointing by inverse CDF
/// I_p = I_0 U^(1/xi^2).
double sample_fso(const FsoLinkParams& link, Rng& rng);

double sample_fso_turbulence(const FsoLinkParams& link, Rng& rng);
double sample_fso_pointing(const FsoLinkParams& link, Rng& rng);

/// n-th moment E{I_fso^n} as the product of component moments:
///   (I_l I_0)^n * xi^2/(xi^2+n) * exp(2 n (n-1) delta^2).
/// n = 0 returns 1.
double fso_moment(const FsoLinkParams& link, int n);

/// The closed-form moment expression as printed in the source material,
/// kept for comparison only: it disagrees with the product of component
/// moments (and with Monte Carlo).
double fso_moment_literal(const FsoLinkParams& link, int n);

/// Turbulence pdf (log-normal form) and pointing pdf on their supports.
double fso_turbulence_pdf(const FsoLinkParams& link, double it);
double fso_pointing_pdf(const FsoLinkParams& link, double ip);

/// Density of the composite gain I_fso. `literal_tail` keeps the trailing
/// factor of the printed expression as a bare multiplier (breaks
/// normalization); the default exponentiates it, which integrates to 1.
double fso_total_pdf(const FsoLinkParams& link, double i, bool literal_tail = false);

/// i.i.d. CN(0,1) small-scale draws: one length-N vector per (m,k) access
/// link and one scalar per fronthaul link.
struct SmallScaleDraw {
    std::vector<std::complex<double>> access;   // [m*K*N + k*N + n]
    std::vector<std::complex<double>> fronthaul; // per AP
    int num_antennas = 1;

    std::complex<double> h_access(int m, int k, int n, int num_ues) const {
        return access[(static_cast<std::size_t>(m) * num_ues + k) * num_antennas + n];
    }
};

SmallScaleDraw sample_small_scale(const Topology& topo, int num_antennas, Rng& rng);

double db_to_linear(double db);
double linear_to_db(double lin);
double dbm_to_watt(double dbm);

} // namespace cfmimo

#endif
