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

#ifndef CFMIMO_ESTIMATION_HPP
#define CFMIMO_ESTIMATION_HPP

#include <complex>
#include <vector>

#include "matrix.hpp"

namespace cfmimo {

/// Pilot-phase parameters for one estimator family. Pilots are unit-norm
/// and mutually orthogonal, so the de-spread observation of link x is
/// y = sqrt(pilot_len * pilot_power) * x + noise.
struct PilotConfig {
    int pilot_len = 20;          // tau_p
    double pilot_power = 0.1;    // per-symbol pilot power [W]
    double noise_variance = 0.0; // de-spread additive noise variance
};

/// Scalar LMMSE estimator x_hat = zeta * y for a zero-mean link with prior
/// mean square `prior`: zeta = sqrt(tp*p) * prior / (tp*p*prior + noise),
/// mean square of the estimate gamma = sqrt(tp*p) * prior * zeta.
struct LmmseScalar {
    double zeta = 0.0;
    double gamma = 0.0;

    std::complex<double> apply(std::complex<double> despread_obs) const {
        return zeta * despread_obs;
    }
};

LmmseScalar lmmse_scalar(double prior_mean_square, const PilotConfig& pilots);

/// Per-(AP, UE) access estimators: priors are the large-scale gains
/// beta_mk, one scalar per link, identical across the N antennas.
struct AccessEstimation {
    Matrix zeta;  // M x K
    Matrix gamma; // M x K, per-antenna mean square of the estimate
};

/// Requires orthogonal pilots (pilot_len >= K). With them the de-spread
/// interference sum collapses to the own-link term.
AccessEstimation lmmse_access(const Matrix& beta_access, const PilotConfig& pilots);

/// Fronthaul estimators, one per AP (link to its serving AN).
struct FronthaulEstimation {
    std::vector<double> zeta;
    std::vector<double> gamma;
};

/// FSO fronthaul: prior mean square is the second moment Gamma^2_am of the
/// optical gain. The estimator is linear in the complex observation; it is
/// the best linear one even though the optical gain is not Gaussian.
FronthaulEstimation lmmse_fso(const std::vector<double>& fso_mean_square,
                              const PilotConfig& pilots);

/// RF fronthaul: prior mean square beta_am; noise uses the post-split
/// per-AP bandwidth, so callers refresh this after reassignment.
FronthaulEstimation lmmse_rf_fronthaul(const std::vector<double>& beta_fronthaul,
                                       const PilotConfig& pilots);

/// Pilot-SNR of an estimated link: tau_p * p * prior / noise. Used to put
/// optical-intensity and radio-power statistics on a common, unit-free
/// scale when the assignment logic compares branch qualities.
double pilot_snr(double prior_mean_square, const PilotConfig& pilots);

} // namespace cfmimo

#endif
