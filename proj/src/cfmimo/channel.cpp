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

#include "channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfmimo {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double cost231_fixed_loss_db(double freq_mhz, double h_base, double h_terminal) {
    const double lf = std::log10(freq_mhz);
    return 46.3 + 33.9 * lf - 13.82 * std::log10(h_base) -
           (1.1 * lf - 0.7) * h_terminal + (1.56 * lf - 0.8);
}

double three_slope_path_loss_db(const LargeScaleModel& model, double dist_m) {
    // COST-231 is calibrated with distances in km.
    const double d = dist_m / 1000.0;
    const double d0 = model.d0 / 1000.0;
    const double d1 = model.d1 / 1000.0;
    const double fixed = cost231_fixed_loss_db(model.freq_mhz, model.h_tx, model.h_rx);
    if (dist_m > model.d1) return -fixed - 35.0 * std::log10(d);
    if (dist_m > model.d0) return -fixed - 15.0 * std::log10(d1) - 20.0 * std::log10(d);
    return -fixed - 15.0 * std::log10(d1) - 20.0 * std::log10(d0);
}

Matrix access_large_scale(const Topology& topo, const LargeScaleModel& model, Rng& rng) {
    Matrix beta(topo.num_aps(), topo.num_ues());
    for (int m = 0; m < topo.num_aps(); ++m) {
        for (int k = 0; k < topo.num_ues(); ++k) {
            const double d = topo.ue_ap_distance(m, k);
            double db = three_slope_path_loss_db(model, d);
            if (d > model.d1) db += model.shadow_sigma_db * rng.gaussian();
            beta(m, k) = db_to_linear(db);
        }
    }
    return beta;
}

std::vector<double> fronthaul_rf_large_scale(const Topology& topo, const LargeScaleModel& model,
                                             Rng& rng) {
    std::vector<double> beta(topo.num_aps());
    for (int m = 0; m < topo.num_aps(); ++m) {
        const double d = topo.ap_an_distance(m);
        double db = three_slope_path_loss_db(model, d);
        if (d > model.d1) db += model.shadow_sigma_db * rng.gaussian();
        beta[m] = db_to_linear(db);
    }
    return beta;
}

// ---------------------------------------------------------------- FSO --

double FsoLinkParams::effective_aperture() const {
    return aperture_area > 0.0 ? aperture_area : M_PI * receiver_radius * receiver_radius;
}

double FsoLinkParams::atten_per_m() const {
    return atten_db_per_km * std::log(10.0) / 1e4;
}

double FsoLinkParams::wave_number() const { return 2.0 * M_PI / wavelength; }

double FsoLinkParams::log_amplitude_var() const {
    return 0.307 * cn2 * std::pow(wave_number(), 7.0 / 6.0) * std::pow(distance, 11.0 / 6.0);
}

double FsoLinkParams::pointing_v() const {
    return std::sqrt(0.5 * M_PI) * receiver_radius / radial_offset;
}

double FsoLinkParams::w_zeq_sq() const {
    const double v = pointing_v();
    return beam_waist * beam_waist * std::sqrt(0.25 * M_PI) * std::erf(v) * std::exp(v * v) / v;
}

double FsoLinkParams::pointing_xi() const {
    return std::sqrt(w_zeq_sq()) / (2.0 * jitter_sigma);
}

double FsoLinkParams::pointing_i0() const {
    const double e = std::erf(pointing_v());
    return e * e;
}

void FsoLinkParams::validate() const {
    if (wavelength <= 0.0 || divergence <= 0.0 || distance <= 0.0 || cn2 < 0.0 ||
        beam_waist <= 0.0 || radial_offset <= 0.0 || jitter_sigma <= 0.0 ||
        receiver_radius <= 0.0 || atten_db_per_km < 0.0)
        throw std::invalid_argument("FSO link parameters must be positive");
}

FsoPathLoss fso_path_loss(const FsoLinkParams& link) {
    if (link.distance == 0.0) throw std::invalid_argument("FSO path loss undefined at d = 0");
    const double spread = link.divergence * link.distance;
    FsoPathLoss pl;
    pl.geometric = link.effective_aperture() / (spread * spread);
    pl.with_attenuation = pl.geometric * std::exp(-link.atten_per_m() * link.distance);
    return pl;
}

double sample_fso_turbulence(const FsoLinkParams& link, Rng& rng) {
    const double dl2 = link.log_amplitude_var();
    if (dl2 == 0.0) return 1.0;
    return std::exp(-2.0 * dl2 + 2.0 * std::sqrt(dl2) * rng.gaussian());
}

double sample_fso_pointing(const FsoLinkParams& link, Rng& rng) {
    const double xi2 = link.pointing_xi() * link.pointing_xi();
    double u = rng.uniform();
    if (u <= 0.0) u = std::numeric_limits<double>::min();
    return link.pointing_i0() * std::pow(u, 1.0 / xi2);
}

double sample_fso(const FsoLinkParams& link, Rng& rng) {
    return fso_path_loss(link).with_attenuation * sample_fso_turbulence(link, rng) *
           sample_fso_pointing(link, rng);
}

double fso_moment(const FsoLinkParams& link, int n) {
    if (n < 0) throw std::invalid_argument("moment order must be nonnegative");
    if (n == 0) return 1.0;
    const double xi2 = link.pointing_xi() * link.pointing_xi();
    const double dl2 = link.log_amplitude_var();
    const double il_i0 = fso_path_loss(link).with_attenuation * link.pointing_i0();
    const double pointing_factor = std::isfinite(xi2) ? xi2 / (xi2 + n) : 1.0;
    return std::pow(il_i0, n) * pointing_factor * std::exp(2.0 * n * (n - 1) * dl2);
}

double fso_moment_literal(const FsoLinkParams& link, int n) {
    if (n < 0) throw std::invalid_argument("moment order must be nonnegative");
    if (n == 0) return 1.0;
    const double xi2 = link.pointing_xi() * link.pointing_xi();
    const double dl2 = link.log_amplitude_var();
    const double phi = 2.0 * dl2 * (1.0 + 2.0 * xi2);
    const double phi_prime = 2.0 * dl2 * xi2 * (1.0 + xi2);
    const double il_i0 = fso_path_loss(link).with_attenuation * link.pointing_i0();
    const double s = xi2 + n;
    return std::pow(il_i0, n) * (xi2 / s) * std::exp(2.0 * s * s * dl2 - s * phi) * phi_prime;
}

double fso_turbulence_pdf(const FsoLinkParams& link, double it) {
    if (it <= 0.0) return 0.0;
    const double dl2 = link.log_amplitude_var();
    const double lg = std::log(it) + 2.0 * dl2;
    return std::exp(-lg * lg / (8.0 * dl2)) / (2.0 * it * std::sqrt(2.0 * M_PI * dl2));
}

double fso_pointing_pdf(const FsoLinkParams& link, double ip) {
    const double i0 = link.pointing_i0();
    if (ip < 0.0 || ip > i0) return 0.0;
    const double xi2 = link.pointing_xi() * link.pointing_xi();
    return xi2 * std::pow(ip, xi2 - 1.0) / std::pow(i0, xi2);
}

double fso_total_pdf(const FsoLinkParams& link, double i, bool literal_tail) {
    if (i <= 0.0) return 0.0;
    const double xi2 = link.pointing_xi() * link.pointing_xi();
    const double dl2 = link.log_amplitude_var();
    const double i0il = link.pointing_i0() * fso_path_loss(link).with_attenuation;
    const double phi = 2.0 * dl2 * (1.0 + 2.0 * xi2);
    const double phi_prime = 2.0 * dl2 * xi2 * (1.0 + xi2);
    const double head = xi2 * std::pow(i / i0il, xi2 - 1.0) / (2.0 * i0il);
    const double arg = (std::log(i / i0il) + phi) / std::sqrt(8.0 * dl2);
    const double tail = literal_tail ? phi_prime : std::exp(phi_prime);
    return head * std::erfc(arg) * tail;
}

SmallScaleDraw sample_small_scale(const Topology& topo, int num_antennas, Rng& rng) {
    SmallScaleDraw draw;
    draw.num_antennas = num_antennas;
    draw.access.resize(static_cast<std::size_t>(topo.num_aps()) * topo.num_ues() * num_antennas);
    for (auto& h : draw.access) h = rng.cgaussian(1.0);
    draw.fronthaul.resize(topo.num_aps());
    for (auto& h : draw.fronthaul) h = rng.cgaussian(1.0);
    return draw;
}

} // namespace cfmimo
