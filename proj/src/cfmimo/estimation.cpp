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

#include "estimation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfmimo {

LmmseScalar lmmse_scalar(double prior_mean_square, const PilotConfig& pilots) {
    if (prior_mean_square <= 0.0) throw std::invalid_argument("prior mean square must be positive");
    if (pilots.pilot_len < 1 || pilots.pilot_power <= 0.0)
        throw std::invalid_argument("pilot configuration must be positive");
    if (pilots.noise_variance < 0.0) throw std::invalid_argument("noise variance must be >= 0");
    const double amp = std::sqrt(pilots.pilot_len * pilots.pilot_power);
    LmmseScalar est;
    est.zeta = amp * prior_mean_square /
               (pilots.pilot_len * pilots.pilot_power * prior_mean_square + pilots.noise_variance);
    est.gamma = amp * prior_mean_square * est.zeta;
    return est;
}

AccessEstimation lmmse_access(const Matrix& beta_access, const PilotConfig& pilots) {
    if (pilots.pilot_len < beta_access.cols())
        throw std::invalid_argument("orthogonal pilots need pilot_len >= number of UEs");
    AccessEstimation est;
    est.zeta = Matrix(beta_access.rows(), beta_access.cols());
    est.gamma = Matrix(beta_access.rows(), beta_access.cols());
    for (int m = 0; m < beta_access.rows(); ++m) {
        for (int k = 0; k < beta_access.cols(); ++k) {
            const LmmseScalar s = lmmse_scalar(beta_access(m, k), pilots);
            est.zeta(m, k) = s.zeta;
            est.gamma(m, k) = s.gamma;
        }
    }
    return est;
}

FronthaulEstimation lmmse_fso(const std::vector<double>& fso_mean_square,
                              const PilotConfig& pilots) {
    FronthaulEstimation est;
    est.zeta.reserve(fso_mean_square.size());
    est.gamma.reserve(fso_mean_square.size());
    for (double g2 : fso_mean_square) {
        const LmmseScalar s = lmmse_scalar(g2, pilots);
        est.zeta.push_back(s.zeta);
        est.gamma.push_back(s.gamma);
    }
    return est;
}

FronthaulEstimation lmmse_rf_fronthaul(const std::vector<double>& beta_fronthaul,
                                       const PilotConfig& pilots) {
    return lmmse_fso(beta_fronthaul, pilots);
}

double pilot_snr(double prior_mean_square, const PilotConfig& pilots) {
    if (pilots.noise_variance <= 0.0) return std::numeric_limits<double>::infinity();
    return pilots.pilot_len * pilots.pilot_power * prior_mean_square / pilots.noise_variance;
}

} // namespace cfmimo
