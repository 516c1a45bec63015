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

#include "oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cfmimo {

namespace {

using cd = std::complex<double>;

/// One realization of every random quantity the combiner sees.
struct ChainDraw {
    std::vector<cd> g;        // access channels, [m][k][antenna]
    std::vector<cd> g_hat;    // access estimates
    std::vector<double> i_fso;
    std::vector<cd> i_fso_hat;
    std::vector<cd> i_rf;
    std::vector<cd> i_rf_hat;
    // Effective per-branch disturbance at the combiner input, per antenna.
    std::vector<cd> theta_fso; // [m][antenna]
    std::vector<cd> theta_rf;
    // Raw per-AP data-phase thermal noise (needed to rebuild the chain).
    std::vector<cd> omega;     // [m][antenna]
};

struct ChainWorkspace {
    AccessEstimation access_est;
    FronthaulEstimation fso_est;
    std::vector<LmmseScalar> rf_est;
    int num_aps = 0;
    int num_ues = 0;
    int n_ant = 0;
};

ChainWorkspace make_workspace(const ChainInstance& inst) {
    ChainWorkspace ws;
    ws.num_aps = inst.topo->num_aps();
    ws.num_ues = inst.topo->num_ues();
    ws.n_ant = inst.num_antennas;
    ws.access_est = lmmse_access(*inst.beta_access, inst.access_pilots);
    std::vector<double> gamma2(ws.num_aps);
    for (int m = 0; m < ws.num_aps; ++m) gamma2[m] = fso_moment((*inst.fso_links)[m], 2);
    ws.fso_est = lmmse_fso(gamma2, inst.fso_pilots);
    ws.rf_est.resize(ws.num_aps);
    for (int m = 0; m < ws.num_aps; ++m)
        ws.rf_est[m] = lmmse_scalar((*inst.beta_fronthaul)[m], (*inst.rf_pilots)[m]);
    return ws;
}

ChainDraw draw_chain(const ChainInstance& inst, const ChainWorkspace& ws, Rng& rng) {
    const int M = ws.num_aps, K = ws.num_ues, N = ws.n_ant;
    ChainDraw d;
    d.g.resize(static_cast<std::size_t>(M) * K * N);
    d.g_hat.resize(d.g.size());

    // Training phase: pilots are orthonormal, so the de-spread observation
    // of link (m,k) is sqrt(tp rho_p) g + noise with i.i.d. noise per link.
    const double amp_p = std::sqrt(inst.access_pilots.pilot_len * inst.access_pilots.pilot_power);
    for (int m = 0; m < M; ++m) {
        for (int k = 0; k < K; ++k) {
            const double beta = (*inst.beta_access)(m, k);
            const double zeta = ws.access_est.zeta(m, k);
            for (int nn = 0; nn < N; ++nn) {
                const std::size_t idx = (static_cast<std::size_t>(m) * K + k) * N + nn;
                d.g[idx] = rng.cgaussian(beta);
                const cd obs = amp_p * d.g[idx] + rng.cgaussian(inst.access_pilots.noise_variance);
                d.g_hat[idx] = zeta * obs;
            }
        }
    }

    d.i_fso.resize(M);
    d.i_fso_hat.resize(M);
    d.i_rf.resize(M);
    d.i_rf_hat.resize(M);
    const double amp_f = std::sqrt(inst.fso_pilots.pilot_len * inst.fso_pilots.pilot_power);
    for (int m = 0; m < M; ++m) {
        d.i_fso[m] = sample_fso((*inst.fso_links)[m], rng);
        if (inst.perfect_fso_csi) {
            d.i_fso_hat[m] = d.i_fso[m];
        } else {
            const cd obs = amp_f * d.i_fso[m] + rng.cgaussian(inst.fso_pilots.noise_variance);
            d.i_fso_hat[m] = ws.fso_est.zeta[m] * obs;
        }
        d.i_rf[m] = rng.cgaussian((*inst.beta_fronthaul)[m]);
        const double amp_r =
            std::sqrt((*inst.rf_pilots)[m].pilot_len * (*inst.rf_pilots)[m].pilot_power);
        const cd obs_r = amp_r * d.i_rf[m] + rng.cgaussian((*inst.rf_pilots)[m].noise_variance);
        d.i_rf_hat[m] = ws.rf_est[m].apply(obs_r);
    }

    // Data phase disturbances, accumulated per branch at the combiner input:
    // theta = mu_m mu_am I omega + mu_am I n_d,m + mu_am upsilon + n_d,am + nu.
    d.theta_fso.assign(static_cast<std::size_t>(M) * N, cd{});
    d.theta_rf.assign(static_cast<std::size_t>(M) * N, cd{});
    d.omega.resize(static_cast<std::size_t>(M) * N);
    for (int m = 0; m < M; ++m) {
        const double mu_m = inst.alloc.mu_fso[m];
        const double mup_m = inst.alloc.mu_rf[m];
        const double g_an = (*inst.an_fso_gain)[m];
        const double gp_an = (*inst.an_rf_gain)[m];
        for (int nn = 0; nn < N; ++nn) {
            const std::size_t idx = static_cast<std::size_t>(m) * N + nn;
            const cd omega = rng.cgaussian(inst.ap_thermal);
            d.omega[idx] = omega;
            const cd nd_m = rng.cgaussian((*inst.ap_fso_noise)[m]);
            const cd ups = rng.cgaussian(inst.an_fso_floor);
            const cd nd_am = rng.cgaussian((*inst.an_fso_noise)[m]);
            const cd nu_f = rng.cgaussian(inst.cpu_floor);
            d.theta_fso[idx] = g_an * d.i_fso[m] * (mu_m * omega + nd_m) + g_an * ups + nd_am + nu_f;

            const cd ndp_m = rng.cgaussian((*inst.ap_rf_noise)[m]);
            const cd upsp = rng.cgaussian((*inst.an_rf_floor)[m]);
            const cd ndp_am = rng.cgaussian((*inst.an_rf_noise)[m]);
            const cd nu_r = rng.cgaussian(inst.cpu_floor);
            d.theta_rf[idx] = gp_an * d.i_rf[m] * (mup_m * omega + ndp_m) + gp_an * upsp + ndp_am + nu_r;
        }
    }
    return d;
}

/// Combining coefficient of UE k' inside UE k's combiner output (before
/// the sqrt(eta) symbol weights).
cd combining_coefficient(const ChainInstance& inst, const ChainDraw& d, int k, int kp) {
    const Topology& topo = *inst.topo;
    const int K = topo.num_ues(), N = inst.num_antennas;
    const double sqrt_rho = std::sqrt(inst.ue_power);
    cd total{};
    for (int m = 0; m < topo.num_aps(); ++m) {
        if (!topo.serves(m, k)) continue;
        cd inner{};
        for (int nn = 0; nn < N; ++nn) {
            const std::size_t ik = (static_cast<std::size_t>(m) * K + k) * N + nn;
            const std::size_t ikp = (static_cast<std::size_t>(m) * K + kp) * N + nn;
            inner += std::conj(d.g_hat[ik]) * d.g[ikp];
        }
        const double j_fso = sqrt_rho * inst.alloc.mu_fso[m] * (*inst.an_fso_gain)[m];
        const double j_rf = sqrt_rho * inst.alloc.mu_rf[m] * (*inst.an_rf_gain)[m];
        cd link{};
        if (inst.assignment->eps[m])
            link += j_fso * std::conj(d.i_fso_hat[m]) * d.i_fso[m];
        if (inst.assignment->eps_prime[m])
            link += j_rf * std::conj(d.i_rf_hat[m]) * d.i_rf[m];
        total += link * inner;
    }
    return total;
}

cd combined_noise(const ChainInstance& inst, const ChainDraw& d, int k) {
    const Topology& topo = *inst.topo;
    const int K = topo.num_ues(), N = inst.num_antennas;
    cd total{};
    for (int m = 0; m < topo.num_aps(); ++m) {
        if (!topo.serves(m, k)) continue;
        cd dot_f{}, dot_r{};
        for (int nn = 0; nn < N; ++nn) {
            const std::size_t ik = (static_cast<std::size_t>(m) * K + k) * N + nn;
            const std::size_t in = static_cast<std::size_t>(m) * N + nn;
            dot_f += std::conj(d.g_hat[ik]) * d.theta_fso[in];
            dot_r += std::conj(d.g_hat[ik]) * d.theta_rf[in];
        }
        if (inst.assignment->eps[m]) total += std::conj(d.i_fso_hat[m]) * dot_f;
        if (inst.assignment->eps_prime[m]) total += std::conj(d.i_rf_hat[m]) * dot_r;
    }
    return total;
}

} // namespace

OracleMoments empirical_sinr_oracle(const ChainInstance& inst, int k, int trials,
                                    std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const ChainWorkspace ws = make_workspace(inst);
    const int K = ws.num_ues;

    cd sum_t{};
    double sum_t2 = 0.0;
    std::vector<double> sum_iui(K, 0.0);
    double sum_n2 = 0.0;

    Rng base(seed);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = base.stream(trial);
        const ChainDraw d = draw_chain(inst, ws, rng);
        for (int kp = 0; kp < K; ++kp) {
            const cd coef = combining_coefficient(inst, d, k, kp);
            if (kp == k) {
                sum_t += coef;
                sum_t2 += std::norm(coef);
            } else {
                sum_iui[kp] += std::norm(coef);
            }
        }
        sum_n2 += std::norm(combined_noise(inst, d, k));
    }

    OracleMoments out;
    const double inv = 1.0 / trials;
    const cd mean_t = sum_t * inv;
    const double eta_k = inst.alloc.eta[k];
    out.ds = std::sqrt(eta_k) * mean_t.real();
    out.ds_sq = eta_k * std::norm(mean_t);
    out.bu = eta_k * (sum_t2 * inv - std::norm(mean_t));
    out.iui_by_ue.assign(K, 0.0);
    for (int kp = 0; kp < K; ++kp) {
        if (kp == k) continue;
        out.iui_by_ue[kp] = inst.alloc.eta[kp] * sum_iui[kp] * inv;
        out.iui_total += out.iui_by_ue[kp];
    }
    out.noise = sum_n2 * inv;
    return out;
}

double oracle_chain_identity_error(const ChainInstance& inst, std::uint64_t seed) {
    const ChainWorkspace ws = make_workspace(inst);
    Rng rng = Rng(seed).stream(0);
    const ChainDraw d = draw_chain(inst, ws, rng);
    const Topology& topo = *inst.topo;
    const int K = ws.num_ues, N = ws.n_ant;

    // Propagate actual symbols through the reform chain...
    std::vector<cd> symbols(K);
    Rng srng = Rng(seed ^ 0x5bd1e995).stream(1);
    for (auto& s : symbols) s = srng.cgaussian(1.0);

    double max_err = 0.0;
    for (int k = 0; k < K; ++k) {
        cd physical{};
        for (int m = 0; m < topo.num_aps(); ++m) {
            if (!topo.serves(m, k)) continue;
            for (int nn = 0; nn < N; ++nn) {
                // y_u,m = sqrt(rho) sum_k' sqrt(eta) g s + omega per antenna.
                cd y{};
                for (int kp = 0; kp < K; ++kp) {
                    const std::size_t ikp = (static_cast<std::size_t>(m) * K + kp) * N + nn;
                    y += std::sqrt(inst.ue_power * inst.alloc.eta[kp]) * d.g[ikp] * symbols[kp];
                }
                y += d.omega[static_cast<std::size_t>(m) * N + nn];
                const std::size_t in = static_cast<std::size_t>(m) * N + nn;
                const std::size_t ik = (static_cast<std::size_t>(m) * K + k) * N + nn;
                // Reconstruct the combiner input from y and the stored
                // disturbances (theta already contains the omega pieces).
                if (inst.assignment->eps[m]) {
                    const cd r = (*inst.an_fso_gain)[m] * inst.alloc.mu_fso[m] * d.i_fso[m] *
                                     (y - d.omega[in]) +
                                 d.theta_fso[in];
                    physical += std::conj(d.i_fso_hat[m]) * std::conj(d.g_hat[ik]) * r;
                }
                if (inst.assignment->eps_prime[m]) {
                    const cd r = (*inst.an_rf_gain)[m] * inst.alloc.mu_rf[m] * d.i_rf[m] *
                                     (y - d.omega[in]) +
                                 d.theta_rf[in];
                    physical += std::conj(d.i_rf_hat[m]) * std::conj(d.g_hat[ik]) * r;
                }
            }
        }
        // ... and compare with the coefficient decomposition.
        cd decomposed = combined_noise(inst, d, k);
        for (int kp = 0; kp < K; ++kp)
            decomposed +=
                std::sqrt(inst.alloc.eta[kp]) * combining_coefficient(inst, d, k, kp) * symbols[kp];
        max_err = std::max(max_err, std::abs(physical - decomposed));
    }
    return max_err;
}

} // namespace cfmimo
