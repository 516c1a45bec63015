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

#include "perf.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace cfmimo {

BranchMoments fso_branch_perfect(double gamma2, double gamma4) {
    return {gamma2, gamma2, gamma4};
}

BranchMoments fso_branch_lmmse(double gamma2, double gamma4, double zeta,
                               const PilotConfig& pilots) {
    BranchMoments bm;
    const double tp_p = pilots.pilot_len * pilots.pilot_power;
    bm.cross = zeta * std::sqrt(tp_p) * gamma2;
    bm.est_sq = bm.cross; // LMMSE property: E{|est|^2} = E{est* ch}
    bm.joint4 = zeta * zeta * (tp_p * gamma4 + pilots.noise_variance * gamma2);
    return bm;
}

BranchMoments rf_branch_lmmse(double beta, double gamma) {
    BranchMoments bm;
    bm.cross = gamma;
    bm.est_sq = gamma;
    bm.joint4 = gamma * (gamma + beta);
    return bm;
}

SinrTerms sinr_terms(const SinrInputs& in, TermConvention convention) {
    assert(in.topo && in.beta_access && in.gamma_access && in.fso && in.rf && in.assignment);
    assert(in.an_fso_gain && in.an_rf_gain && in.an_fso_noise && in.an_rf_noise);
    assert(in.ap_fso_noise && in.ap_rf_noise && in.an_rf_floor);

    const Topology& topo = *in.topo;
    const int num_ues = topo.num_ues();
    const int num_aps = topo.num_aps();
    const double n = static_cast<double>(in.num_antennas);
    const double rho = in.ue_power;
    const double sqrt_rho = std::sqrt(rho);

    SinrTerms t;
    t.num_ues = num_ues;
    t.num_aps = num_aps;
    t.num_antennas = in.num_antennas;
    t.ue_power = rho;
    t.convention = convention;
    t.a_fso = t.a_rf = t.c_fso = t.c_rf = t.e_fso = t.e_rf = Matrix(num_aps, num_ues);
    t.x_cross = t.d0 = t.d1 = t.d2 = t.d3 = Matrix(num_aps, num_ues);
    t.beta = *in.beta_access;
    t.serve = Matrix(num_aps, num_ues);

    for (int m = 0; m < num_aps; ++m) {
        const double eps = in.assignment->eps[m];
        const double epsp = in.assignment->eps_prime[m];
        const double g = (*in.an_fso_gain)[m];
        const double gp = (*in.an_rf_gain)[m];
        BranchMoments f = (*in.fso)[m];
        BranchMoments r = (*in.rf)[m];

        // Quadratic joint moments; the printed convention substitutes the
        // Gaussian value for the optical branch and decorrelates the
        // noise-chain moment, dropping the hybrid coupling entirely.
        double f4_quad = f.joint4;
        double r4_quad = r.joint4;
        double f4_noise = f.joint4;
        double r4_noise = r.joint4;
        double cross_on = 1.0;
        if (convention == TermConvention::printed) {
            f4_quad = 2.0 * f.cross * f.cross;
            f4_noise = f.est_sq * f.est_sq;
            const double beta_fh = r.cross > 0.0 ? r.joint4 / r.cross - r.cross : 0.0;
            r4_noise = r.est_sq * beta_fh;
            cross_on = 0.0;
        }

        for (int k = 0; k < num_ues; ++k) {
            if (!topo.serves(m, k)) continue;
            t.serve(m, k) = 1.0;
            const double gamma = (*in.gamma_access)(m, k);
            const double ng = n * gamma;

            t.a_fso(m, k) = sqrt_rho * eps * g * f.cross * ng;
            t.a_rf(m, k) = sqrt_rho * epsp * gp * r.cross * ng;

            t.c_fso(m, k) = rho * eps * g * g * f4_quad * ng;
            t.c_rf(m, k) = rho * epsp * gp * gp * r4_quad * ng;

            t.e_fso(m, k) = rho * eps * g * g * std::max(0.0, f4_quad - f.cross * f.cross) * ng * ng;
            t.e_rf(m, k) = rho * epsp * gp * gp * std::max(0.0, r4_quad - r.cross * r.cross) * ng * ng;

            t.x_cross(m, k) = cross_on * 2.0 * rho * eps * epsp * g * gp * f.cross * r.cross * ng;

            const double fso_floor = g * g * in.an_fso_floor + (*in.an_fso_noise)[m] + in.cpu_floor;
            const double rf_floor =
                gp * gp * (*in.an_rf_floor)[m] + (*in.an_rf_noise)[m] + in.cpu_floor;
            t.d0(m, k) = ng * (eps * (g * g * (*in.ap_fso_noise)[m] * f4_noise + fso_floor * f.est_sq) +
                               epsp * (gp * gp * (*in.ap_rf_noise)[m] * r4_noise + rf_floor * r.est_sq));
            t.d1(m, k) = eps * g * g * in.ap_thermal * f4_noise * ng;
            t.d2(m, k) = epsp * gp * gp * in.ap_thermal * r4_noise * ng;
            t.d3(m, k) = cross_on * 2.0 * eps * epsp * g * gp * in.ap_thermal * f.cross * r.cross * ng;
        }
    }
    return t;
}

namespace {

// W_m = sum_k eta_k beta_mk: every transmitting UE leaks through link m.
double leakage_sum(const SinrTerms& t, int m, const std::vector<double>& eta) {
    double w = 0.0;
    for (int k = 0; k < t.num_ues; ++k) w += eta[k] * t.beta(m, k);
    return w;
}

} // namespace

SinrBreakdown sinr_breakdown(const SinrTerms& t, int k, const PowerAllocation& alloc) {
    if (k < 0 || k >= t.num_ues) throw std::out_of_range("UE index");
    SinrBreakdown out;
    double mean = 0.0;
    for (int m = 0; m < t.num_aps; ++m) {
        if (t.serve(m, k) == 0.0) continue;
        const double mu = alloc.mu_fso[m];
        const double mup = alloc.mu_rf[m];
        mean += mu * t.a_fso(m, k) + mup * t.a_rf(m, k);

        const double w = leakage_sum(t, m, alloc.eta);
        const double own = alloc.eta[k] * t.beta(m, k);
        const double quad_fso = t.c_fso(m, k);
        const double quad_rf = t.c_rf(m, k);
        const double quad_x = t.x_cross(m, k);

        out.bu += alloc.eta[k] * (mu * mu * t.e_fso(m, k) + mup * mup * t.e_rf(m, k)) +
                  mu * mu * quad_fso * own + mup * mup * quad_rf * own + mu * mup * quad_x * own;
        out.iui += mu * mu * quad_fso * (w - own) + mup * mup * quad_rf * (w - own) +
                   mu * mup * quad_x * (w - own);
        out.noise += t.d0(m, k) + mu * mu * t.d1(m, k) + mup * mup * t.d2(m, k) +
                     mu * mup * t.d3(m, k);
    }
    out.ds_sq = alloc.eta[k] * mean * mean;
    return out;
}

double sinr_closed_form(const SinrTerms& terms, int k, const PowerAllocation& alloc) {
    const SinrBreakdown b = sinr_breakdown(terms, k, alloc);
    if (b.ds_sq == 0.0) return 0.0;
    const double den = b.bu + b.iui + b.noise;
    assert(den > 0.0 && "zero denominator with nonzero desired signal");
    return b.ds_sq / den;
}

double rate_bits_per_symbol(double sinr) {
    if (sinr < 0.0) throw std::invalid_argument("SINR must be nonnegative");
    return std::log2(1.0 + sinr);
}

double net_power(const PowerAllocation& alloc, const PowerModel& model, int num_aps, int num_ans) {
    double p = model.fixed_power(num_aps, num_ans);
    for (double e : alloc.eta) p += model.ue_power * e;
    return p;
}

double energy_efficiency(const std::vector<double>& rates, double p_net, double bw_access,
                         int coherence, int pilot_len) {
    double sum = 0.0;
    for (double r : rates) sum += r;
    const double prelog = static_cast<double>(coherence - pilot_len) / coherence;
    return prelog * bw_access * sum / p_net;
}

} // namespace cfmimo
