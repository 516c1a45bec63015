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

#include "optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cfmimo {

namespace {

constexpr double kFeasTol = 1e-9;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

/// sum_k eta_k beta_mk
double leakage(const SinrTerms& t, int m, const std::vector<double>& eta) {
    double w = 0.0;
    for (int k = 0; k < t.num_ues; ++k) w += eta[k] * t.beta(m, k);
    return w;
}

/// Mean combining amplitude L_k.
double mean_amplitude(const SinrTerms& t, int k, const PowerAllocation& a) {
    double l = 0.0;
    for (int m = 0; m < t.num_aps; ++m) {
        if (t.serve(m, k) == 0.0) continue;
        l += a.mu_fso[m] * t.a_fso(m, k) + a.mu_rf[m] * t.a_rf(m, k);
    }
    return l;
}

/// Interference-plus-noise quadratic T_k (the SINR denominator).
double inq(const SinrTerms& t, int k, const PowerAllocation& a) {
    double total = 0.0;
    for (int m = 0; m < t.num_aps; ++m) {
        if (t.serve(m, k) == 0.0) continue;
        const double mu = a.mu_fso[m];
        const double mup = a.mu_rf[m];
        const double w = leakage(t, m, a.eta);
        total += mu * mu * (t.c_fso(m, k) * w + t.e_fso(m, k) * a.eta[k] + t.d1(m, k)) +
                 mup * mup * (t.c_rf(m, k) * w + t.e_rf(m, k) * a.eta[k] + t.d2(m, k)) +
                 mu * mup * (t.x_cross(m, k) * w + t.d3(m, k)) + t.d0(m, k);
    }
    return total;
}

} // namespace

double SolverContext::fso_gain_cap(int m, const std::vector<double>& eta) const {
    const double load = terms->ue_power * leakage(*terms, m, eta) + ap_thermal;
    return std::sqrt(p_fso_max / load);
}

double SolverContext::rf_gain_cap(int m, const std::vector<double>& eta) const {
    const double load = terms->ue_power * leakage(*terms, m, eta) + ap_thermal;
    return std::sqrt(p_rf_max / load);
}

double SolverContext::sum_rate(const PowerAllocation& alloc) const {
    double sum = 0.0;
    for (int k = 0; k < terms->num_ues; ++k)
        sum += rate_bits_per_symbol(sinr_closed_form(*terms, k, alloc));
    return sum;
}

double SolverContext::ee(const PowerAllocation& alloc) const {
    std::vector<double> rates(terms->num_ues);
    for (int k = 0; k < terms->num_ues; ++k)
        rates[k] = rate_bits_per_symbol(sinr_closed_form(*terms, k, alloc));
    const double p = net_power(alloc, power, terms->num_aps, num_ans);
    return energy_efficiency(rates, p, bw_access, coherence, pilot_len);
}

double SolverContext::feasibility_slack(const PowerAllocation& alloc) const {
    double worst = 0.0;
    for (double e : alloc.eta) worst = std::max({worst, e - 1.0, -e});
    for (int m = 0; m < terms->num_aps; ++m) {
        const double load = terms->ue_power * leakage(*terms, m, alloc.eta) + ap_thermal;
        worst = std::max(worst, alloc.mu_fso[m] * alloc.mu_fso[m] * load - p_fso_max);
        worst = std::max(worst, alloc.mu_rf[m] * alloc.mu_rf[m] * load - p_rf_max);
    }
    worst = std::max(worst, net_power(alloc, power, terms->num_aps, num_ans) - power.power_budget);
    return worst;
}

void write_solver_trace(std::ostream& os, const SolverReport& report) {
    os << "iteration,sum_rate,ee\n";
    for (const auto& row : report.trace) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g\n", row.iteration, row.sum_rate, row.ee);
        os << buf;
    }
}

PowerAllocation full_power(const SolverContext& ctx) {
    const SinrTerms& t = *ctx.terms;
    PowerAllocation a;
    a.eta.assign(t.num_ues, 1.0);
    a.mu_fso.resize(t.num_aps);
    a.mu_rf.resize(t.num_aps);
    for (int m = 0; m < t.num_aps; ++m) {
        a.mu_fso[m] = ctx.fso_gain_cap(m, a.eta);
        a.mu_rf[m] = ctx.rf_gain_cap(m, a.eta);
    }
    return a;
}

double mmse_receiver(const SinrTerms& terms, int k, const PowerAllocation& alloc) {
    const double l = mean_amplitude(terms, k, alloc);
    const double q = alloc.eta[k] * l * l + inq(terms, k, alloc);
    if (q <= 0.0) return 0.0;
    return std::sqrt(alloc.eta[k]) * l / q;
}

double mse_e_k(const SinrTerms& terms, int k, const PowerAllocation& alloc, double u) {
    const double l = mean_amplitude(terms, k, alloc);
    const double q = alloc.eta[k] * l * l + inq(terms, k, alloc);
    return u * u * q - 2.0 * u * std::sqrt(alloc.eta[k]) * l + 1.0;
}

// ------------------------------------------------------------- W-MMSE --

namespace {

struct WmmseState {
    std::vector<double> rho;   // sqrt(eta)
    std::vector<double> u;
    std::vector<double> theta;
    std::vector<double> l;     // cached L_k
    PowerAllocation alloc;     // eta kept in sync with rho
};

double surrogate_value(const SinrTerms& t, const WmmseState& s) {
    double f = 0.0;
    for (int k = 0; k < t.num_ues; ++k) {
        const double q = s.alloc.eta[k] * s.l[k] * s.l[k] + inq(t, k, s.alloc);
        const double e = s.u[k] * s.u[k] * q - 2.0 * s.u[k] * s.rho[k] * s.l[k] + 1.0;
        f += s.theta[k] * e - std::log(s.theta[k]);
    }
    return f;
}

void refresh_amplitudes(const SinrTerms& t, WmmseState& s) {
    for (int k = 0; k < t.num_ues; ++k) s.l[k] = mean_amplitude(t, k, s.alloc);
}

/// Upper bound on rho_k keeping every power constraint satisfied with the
/// other coordinates fixed.
double rho_upper_bound(const SolverContext& ctx, const WmmseState& s, int k) {
    const SinrTerms& t = *ctx.terms;
    const double rho_u = t.ue_power;
    double eta_ub = 1.0;
    for (int m = 0; m < t.num_aps; ++m) {
        const double others = leakage(t, m, s.alloc.eta) - s.alloc.eta[k] * t.beta(m, k);
        const double beta = t.beta(m, k);
        if (beta <= 0.0) continue;
        const double mu2 = s.alloc.mu_fso[m] * s.alloc.mu_fso[m];
        if (mu2 > 0.0) {
            const double room = ctx.p_fso_max / mu2 - ctx.ap_thermal - rho_u * others;
            eta_ub = std::min(eta_ub, room / (rho_u * beta));
        }
        const double mup2 = s.alloc.mu_rf[m] * s.alloc.mu_rf[m];
        if (mup2 > 0.0) {
            const double room = ctx.p_rf_max / mup2 - ctx.ap_thermal - rho_u * others;
            eta_ub = std::min(eta_ub, room / (rho_u * beta));
        }
    }
    double eta_others = 0.0;
    for (int kp = 0; kp < t.num_ues; ++kp)
        if (kp != k) eta_others += s.alloc.eta[kp];
    eta_ub = std::min(eta_ub, (ctx.power.power_budget - ctx.fixed_power()) / ctx.power.ue_power -
                                  eta_others);
    return std::sqrt(std::max(0.0, eta_ub));
}

void update_receivers_and_weights(const SinrTerms& t, WmmseState& s) {
    for (int k = 0; k < t.num_ues; ++k) {
        const double q = s.alloc.eta[k] * s.l[k] * s.l[k] + inq(t, k, s.alloc);
        s.u[k] = q > 0.0 ? s.rho[k] * s.l[k] / q : 0.0;
        const double e = s.u[k] * s.u[k] * q - 2.0 * s.u[k] * s.rho[k] * s.l[k] + 1.0;
        s.theta[k] = 1.0 / std::max(e, 1e-300);
    }
}

void update_amplitude_block(const SolverContext& ctx, WmmseState& s) {
    const SinrTerms& t = *ctx.terms;
    for (int k = 0; k < t.num_ues; ++k) {
        // Quadratic coefficient: own received power plus the weighted
        // leakage this UE injects into every other receiver.
        double own = 0.0;
        for (int m = 0; m < t.num_aps; ++m) {
            if (t.serve(m, k) == 0.0) continue;
            const double mu = s.alloc.mu_fso[m];
            const double mup = s.alloc.mu_rf[m];
            own += mu * mu * (t.c_fso(m, k) * t.beta(m, k) + t.e_fso(m, k)) +
                   mup * mup * (t.c_rf(m, k) * t.beta(m, k) + t.e_rf(m, k)) +
                   mu * mup * t.x_cross(m, k) * t.beta(m, k);
        }
        double a = s.theta[k] * s.u[k] * s.u[k] * (s.l[k] * s.l[k] + own);
        for (int j = 0; j < t.num_ues; ++j) {
            if (j == k) continue;
            double into_j = 0.0;
            for (int m = 0; m < t.num_aps; ++m) {
                if (t.serve(m, j) == 0.0) continue;
                const double mu = s.alloc.mu_fso[m];
                const double mup = s.alloc.mu_rf[m];
                into_j += (mu * mu * t.c_fso(m, j) + mup * mup * t.c_rf(m, j) +
                           mu * mup * t.x_cross(m, j)) *
                          t.beta(m, k);
            }
            a += s.theta[j] * s.u[j] * s.u[j] * into_j;
        }
        const double c = s.theta[k] * s.u[k] * s.l[k];
        double rho = a > 0.0 ? c / a : 0.0;
        rho = std::clamp(rho, 0.0, rho_upper_bound(ctx, s, k));
        s.rho[k] = rho;
        s.alloc.eta[k] = rho * rho;
    }
}

void update_gain_block(const SolverContext& ctx, WmmseState& s, bool fso_block) {
    const SinrTerms& t = *ctx.terms;
    for (int m = 0; m < t.num_aps; ++m) {
        const Matrix& a_own = fso_block ? t.a_fso : t.a_rf;
        const Matrix& c_own = fso_block ? t.c_fso : t.c_rf;
        const Matrix& e_own = fso_block ? t.e_fso : t.e_rf;
        const Matrix& d_own = fso_block ? t.d1 : t.d2;
        const double mu_other = fso_block ? s.alloc.mu_rf[m] : s.alloc.mu_fso[m];
        const double mu_cur = fso_block ? s.alloc.mu_fso[m] : s.alloc.mu_rf[m];
        const double w_m = leakage(t, m, s.alloc.eta);

        double quad = 0.0, lin = 0.0;
        for (int k = 0; k < t.num_ues; ++k) {
            if (t.serve(m, k) == 0.0) continue;
            const double amk = a_own(m, k);
            const double tu2 = s.theta[k] * s.u[k] * s.u[k];
            quad += tu2 * (s.alloc.eta[k] * amk * amk + c_own(m, k) * w_m +
                           e_own(m, k) * s.alloc.eta[k] + d_own(m, k));
            const double l_rest = s.l[k] - mu_cur * amk;
            lin += tu2 * (2.0 * s.alloc.eta[k] * amk * l_rest +
                          mu_other * (t.x_cross(m, k) * w_m + t.d3(m, k))) -
                   2.0 * s.theta[k] * s.u[k] * s.rho[k] * amk;
        }
        if (quad <= 0.0) continue; // branch disabled or unserved
        const double cap =
            fso_block ? ctx.fso_gain_cap(m, s.alloc.eta) : ctx.rf_gain_cap(m, s.alloc.eta);
        const double mu_new = std::clamp(-lin / (2.0 * quad), 0.0, cap);
        // Keep the cached amplitudes in sync with the fresh coordinate.
        for (int k = 0; k < t.num_ues; ++k) {
            if (t.serve(m, k) == 0.0) continue;
            s.l[k] += (mu_new - mu_cur) * a_own(m, k);
        }
        (fso_block ? s.alloc.mu_fso[m] : s.alloc.mu_rf[m]) = mu_new;
    }
}

} // namespace

std::pair<PowerAllocation, SolverReport> wmmse_solve(const PowerAllocation& initial,
                                                     const SolverContext& ctx,
                                                     const WmmseOptions& opts) {
    const SinrTerms& t = *ctx.terms;
    if (static_cast<int>(initial.eta.size()) != t.num_ues ||
        static_cast<int>(initial.mu_fso.size()) != t.num_aps ||
        static_cast<int>(initial.mu_rf.size()) != t.num_aps)
        throw std::invalid_argument("initial allocation has wrong dimensions");
    if (ctx.feasibility_slack(initial) > 1e-6)
        throw std::invalid_argument("initial allocation is infeasible");

    WmmseState s;
    s.alloc = initial;
    s.rho.resize(t.num_ues);
    for (int k = 0; k < t.num_ues; ++k) s.rho[k] = std::sqrt(clamp01(initial.eta[k]));
    s.u.assign(t.num_ues, 0.0);
    s.theta.assign(t.num_ues, 1.0);
    s.l.assign(t.num_ues, 0.0);
    refresh_amplitudes(t, s);

    SolverReport report;
    double prev_rate = ctx.sum_rate(s.alloc);
    report.trace.push_back({0, prev_rate, ctx.ee(s.alloc), 0.0});

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        update_receivers_and_weights(t, s);
        update_amplitude_block(ctx, s);
        update_gain_block(ctx, s, /*fso_block=*/true);
        update_gain_block(ctx, s, /*fso_block=*/false);

        const double rate = ctx.sum_rate(s.alloc);
        report.trace.push_back({iter, rate, ctx.ee(s.alloc), surrogate_value(t, s)});
        report.iterations = iter;
        if (std::abs(rate - prev_rate) <= opts.stop_eps) {
            report.converged = true;
            report.termination = "sum-rate increment below tolerance";
            break;
        }
        prev_rate = rate;
    }
    if (!report.converged) report.termination = "max iterations reached";
    return {s.alloc, report};
}

// ----------------------------------------------------------------- GP --

namespace {

/// One monomial c * prod exp(e_i z_i) over the log variables, up to three
/// participating variables.
struct Monomial {
    double log_c = 0.0;
    int var_a = -1;
    double exp_a = 0.0;
    int var_b = -1;
    double exp_b = 0.0;
    int var_c = -1;
    double exp_c = 0.0;

    double log_value(const std::vector<double>& z) const {
        double v = log_c;
        if (var_a >= 0) v += exp_a * z[var_a];
        if (var_b >= 0) v += exp_b * z[var_b];
        if (var_c >= 0) v += exp_c * z[var_c];
        return v;
    }
    void add_gradient(const std::vector<double>& z, double weight,
                      std::vector<double>& grad) const {
        (void)z;
        if (var_a >= 0) grad[var_a] += weight * exp_a;
        if (var_b >= 0) grad[var_b] += weight * exp_b;
        if (var_c >= 0) grad[var_c] += weight * exp_c;
    }
};

struct Posynomial {
    std::vector<Monomial> terms;

    /// log sum exp of the terms; weights w_i = term share (softmax).
    double log_value(const std::vector<double>& z, std::vector<double>* shares = nullptr) const {
        double max_l = -std::numeric_limits<double>::infinity();
        std::vector<double> logs(terms.size());
        for (std::size_t i = 0; i < terms.size(); ++i) {
            logs[i] = terms[i].log_value(z);
            max_l = std::max(max_l, logs[i]);
        }
        if (!std::isfinite(max_l)) return -std::numeric_limits<double>::infinity();
        double s = 0.0;
        for (double& l : logs) {
            l = std::exp(l - max_l);
            s += l;
        }
        if (shares) {
            shares->resize(terms.size());
            for (std::size_t i = 0; i < terms.size(); ++i) (*shares)[i] = logs[i] / s;
        }
        return max_l + std::log(s);
    }

    void add_log_gradient(const std::vector<double>& z, double weight,
                          std::vector<double>& grad) const {
        std::vector<double> shares;
        log_value(z, &shares);
        for (std::size_t i = 0; i < terms.size(); ++i)
            terms[i].add_gradient(z, weight * shares[i], grad);
    }
};

struct GpProblem {
    int dim = 0;
    std::vector<int> eta_var;    // per UE, always present
    std::vector<int> mu_var;     // per AP, -1 when branch inactive
    std::vector<int> mup_var;
    std::vector<Posynomial> numerators;   // L_k
    std::vector<Posynomial> denominators; // T_k
    std::vector<Posynomial> constraints;  // log value <= 0
};

GpProblem build_gp(const SolverContext& ctx) {
    const SinrTerms& t = *ctx.terms;
    GpProblem p;
    p.eta_var.resize(t.num_ues);
    for (int k = 0; k < t.num_ues; ++k) p.eta_var[k] = p.dim++;
    p.mu_var.assign(t.num_aps, -1);
    p.mup_var.assign(t.num_aps, -1);
    for (int m = 0; m < t.num_aps; ++m) {
        bool fso_used = false, rf_used = false;
        for (int k = 0; k < t.num_ues; ++k) {
            if (t.serve(m, k) == 0.0) continue;
            fso_used = fso_used || t.a_fso(m, k) > 0.0;
            rf_used = rf_used || t.a_rf(m, k) > 0.0;
        }
        if (fso_used) p.mu_var[m] = p.dim++;
        if (rf_used) p.mup_var[m] = p.dim++;
    }

    auto log_or_throw = [](double v) {
        if (!(v > 0.0)) throw std::invalid_argument("GP requires strictly positive coefficients");
        return std::log(v);
    };

    p.numerators.resize(t.num_ues);
    p.denominators.resize(t.num_ues);
    for (int k = 0; k < t.num_ues; ++k) {
        Posynomial& num = p.numerators[k];
        Posynomial& den = p.denominators[k];
        for (int m = 0; m < t.num_aps; ++m) {
            if (t.serve(m, k) == 0.0) continue;
            const int vm = p.mu_var[m];
            const int vmp = p.mup_var[m];
            if (vm >= 0 && t.a_fso(m, k) > 0.0)
                num.terms.push_back({log_or_throw(t.a_fso(m, k)), vm, 1.0, -1, 0.0});
            if (vmp >= 0 && t.a_rf(m, k) > 0.0)
                num.terms.push_back({log_or_throw(t.a_rf(m, k)), vmp, 1.0, -1, 0.0});

            for (int kp = 0; kp < t.num_ues; ++kp) {
                const double b = t.beta(m, kp);
                if (vm >= 0 && t.c_fso(m, k) > 0.0)
                    den.terms.push_back(
                        {log_or_throw(t.c_fso(m, k) * b), vm, 2.0, p.eta_var[kp], 1.0});
                if (vmp >= 0 && t.c_rf(m, k) > 0.0)
                    den.terms.push_back(
                        {log_or_throw(t.c_rf(m, k) * b), vmp, 2.0, p.eta_var[kp], 1.0});
            }
            if (vm >= 0 && t.e_fso(m, k) > 0.0)
                den.terms.push_back({log_or_throw(t.e_fso(m, k)), vm, 2.0, p.eta_var[k], 1.0});
            if (vmp >= 0 && t.e_rf(m, k) > 0.0)
                den.terms.push_back({log_or_throw(t.e_rf(m, k)), vmp, 2.0, p.eta_var[k], 1.0});
            if (vm >= 0 && t.d1(m, k) > 0.0)
                den.terms.push_back({log_or_throw(t.d1(m, k)), vm, 2.0, -1, 0.0});
            if (vmp >= 0 && t.d2(m, k) > 0.0)
                den.terms.push_back({log_or_throw(t.d2(m, k)), vmp, 2.0, -1, 0.0});
            if (vm >= 0 && vmp >= 0 && t.x_cross(m, k) > 0.0) {
                for (int kp = 0; kp < t.num_ues; ++kp) {
                    const double c = t.x_cross(m, k) * t.beta(m, kp);
                    if (c > 0.0)
                        den.terms.push_back(
                            {std::log(c), vm, 1.0, vmp, 1.0, p.eta_var[kp], 1.0});
                }
                if (t.d3(m, k) > 0.0)
                    den.terms.push_back({std::log(t.d3(m, k)), vm, 1.0, vmp, 1.0});
            }
            if (t.d0(m, k) > 0.0) den.terms.push_back({std::log(t.d0(m, k)), -1, 0.0, -1, 0.0});
        }
    }

    // eta_k <= 1
    for (int k = 0; k < t.num_ues; ++k) {
        Posynomial c1;
        c1.terms.push_back({0.0, p.eta_var[k], 1.0, -1, 0.0});
        p.constraints.push_back(c1);
    }
    // Per-AP forward power caps.
    for (int m = 0; m < t.num_aps; ++m) {
        for (int pass = 0; pass < 2; ++pass) {
            const int v = pass == 0 ? p.mu_var[m] : p.mup_var[m];
            if (v < 0) continue;
            const double cap = pass == 0 ? ctx.p_fso_max : ctx.p_rf_max;
            Posynomial c;
            for (int k = 0; k < t.num_ues; ++k)
                c.terms.push_back(
                    {std::log(t.ue_power * t.beta(m, k) / cap), v, 2.0, p.eta_var[k], 1.0});
            c.terms.push_back({std::log(ctx.ap_thermal / cap), v, 2.0, -1, 0.0});
            p.constraints.push_back(c);
        }
    }
    // Network power budget.
    const double fixed = ctx.fixed_power();
    if (fixed >= ctx.power.power_budget)
        throw std::invalid_argument("power budget below fixed loads: problem infeasible");
    Posynomial c4;
    for (int k = 0; k < t.num_ues; ++k)
        c4.terms.push_back(
            {std::log(ctx.power.ue_power / ctx.power.power_budget), p.eta_var[k], 1.0, -1, 0.0});
    c4.terms.push_back({std::log(fixed / ctx.power.power_budget), -1, 0.0, -1, 0.0});
    p.constraints.push_back(c4);
    return p;
}

} // namespace

std::pair<PowerAllocation, SolverReport> gp_solve(const SolverContext& ctx, const GpOptions& opts) {
    const SinrTerms& t = *ctx.terms;
    GpProblem p = build_gp(ctx);

    // Start from the scaled full-power corner (strictly interior).
    PowerAllocation start = full_power(ctx);
    const double budget_eta =
        (ctx.power.power_budget - ctx.fixed_power()) / (ctx.power.ue_power * t.num_ues);
    const double eta0 = 0.8 * std::min(1.0, budget_eta);
    std::vector<double> z(p.dim, 0.0);
    for (int k = 0; k < t.num_ues; ++k) z[p.eta_var[k]] = std::log(eta0);
    std::vector<double> eta_start(t.num_ues, eta0);
    for (int m = 0; m < t.num_aps; ++m) {
        if (p.mu_var[m] >= 0) z[p.mu_var[m]] = std::log(0.9 * ctx.fso_gain_cap(m, eta_start));
        if (p.mup_var[m] >= 0) z[p.mup_var[m]] = std::log(0.9 * ctx.rf_gain_cap(m, eta_start));
    }

    // Objective: minimize sum_k [ln T_k - ln eta_k - 2 ln L_k]; the last
    // sum is concave, so each outer round replaces ln L_k by its monomial
    // (arithmetic-geometric) minorant anchored at the round's start.
    std::vector<std::vector<double>> anchor_shares(t.num_ues);

    auto objective_true = [&](const std::vector<double>& zz, std::vector<double>* grad) {
        if (grad) std::fill(grad->begin(), grad->end(), 0.0);
        double f = 0.0;
        for (int k = 0; k < t.num_ues; ++k) {
            f += p.denominators[k].log_value(zz) - zz[p.eta_var[k]] -
                 2.0 * p.numerators[k].log_value(zz);
            if (grad) {
                p.denominators[k].add_log_gradient(zz, 1.0, *grad);
                (*grad)[p.eta_var[k]] -= 1.0;
                p.numerators[k].add_log_gradient(zz, -2.0, *grad);
            }
        }
        return f;
    };

    auto objective_condensed = [&](const std::vector<double>& zz, std::vector<double>* grad) {
        if (grad) std::fill(grad->begin(), grad->end(), 0.0);
        double f = 0.0;
        for (int k = 0; k < t.num_ues; ++k) {
            f += p.denominators[k].log_value(zz) - zz[p.eta_var[k]];
            if (grad) {
                p.denominators[k].add_log_gradient(zz, 1.0, *grad);
                (*grad)[p.eta_var[k]] -= 1.0;
            }
            const auto& shares = anchor_shares[k];
            const auto& terms = p.numerators[k].terms;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (shares[i] <= 0.0) continue;
                const double li = terms[i].log_value(zz) - std::log(shares[i]);
                f -= 2.0 * shares[i] * li;
                if (grad) terms[i].add_gradient(zz, -2.0 * shares[i], *grad);
            }
        }
        return f;
    };

    SolverReport report;
    double penalty = opts.penalty_init;
    std::vector<double> grad(p.dim), gprev(p.dim), zprev(p.dim);

    auto penalized = [&](const std::vector<double>& zz, std::vector<double>* g) {
        double f = objective_condensed(zz, g);
        for (const auto& c : p.constraints) {
            const double v = c.log_value(zz);
            if (v > 0.0) {
                f += penalty * v * v;
                if (g) c.add_log_gradient(zz, 2.0 * penalty * v, *g);
            }
        }
        return f;
    };

    int total_inner = 0;
    for (int outer = 0; outer < opts.max_outer; ++outer) {
        for (int k = 0; k < t.num_ues; ++k) p.numerators[k].log_value(z, &anchor_shares[k]);
        std::vector<double> z_before = z;

        // Barzilai-Borwein descent with Armijo backtracking.
        double f = penalized(z, &grad);
        double step = 1e-2;
        for (int it = 0; it < opts.max_inner; ++it, ++total_inner) {
            double gnorm = 0.0;
            for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
            if (gnorm < 1e-10) break;
            zprev = z;
            gprev = grad;
            double fnew = f;
            std::vector<double> ztry(p.dim);
            for (int bt = 0; bt < 40; ++bt) {
                for (int i = 0; i < p.dim; ++i) ztry[i] = z[i] - step * grad[i];
                fnew = penalized(ztry, nullptr);
                if (fnew <= f - 1e-4 * step * gnorm * gnorm) break;
                step *= 0.5;
            }
            if (fnew >= f) break;
            z = ztry;
            f = fnew;
            penalized(z, &grad);
            // BB step from the last pair.
            double sy = 0.0, ss = 0.0;
            for (int i = 0; i < p.dim; ++i) {
                const double si = z[i] - zprev[i];
                sy += si * (grad[i] - gprev[i]);
                ss += si * si;
            }
            if (sy > 1e-16) step = std::clamp(ss / sy, 1e-6, 1e2);
        }

        double move = 0.0;
        for (int i = 0; i < p.dim; ++i) move = std::max(move, std::abs(z[i] - z_before[i]));
        penalty = std::min(penalty * 10.0, opts.penalty_max);
        report.iterations = outer + 1;
        if (move < 1e-7 && penalty >= opts.penalty_max) break;
    }

    // Recover the allocation and restore feasibility: monotone constraint
    // structure lets a downward clamp pass finish the job.
    PowerAllocation alloc;
    alloc.eta.resize(t.num_ues);
    alloc.mu_fso.assign(t.num_aps, 0.0);
    alloc.mu_rf.assign(t.num_aps, 0.0);
    for (int k = 0; k < t.num_ues; ++k) alloc.eta[k] = clamp01(std::exp(z[p.eta_var[k]]));
    double eta_sum = std::accumulate(alloc.eta.begin(), alloc.eta.end(), 0.0);
    const double eta_budget = (ctx.power.power_budget - ctx.fixed_power()) / ctx.power.ue_power;
    if (eta_sum > eta_budget) {
        const double scale = eta_budget / eta_sum * (1.0 - 1e-12);
        for (double& e : alloc.eta) e *= scale;
    }
    for (int m = 0; m < t.num_aps; ++m) {
        if (p.mu_var[m] >= 0)
            alloc.mu_fso[m] = std::min(std::exp(z[p.mu_var[m]]), ctx.fso_gain_cap(m, alloc.eta));
        else
            alloc.mu_fso[m] = ctx.fso_gain_cap(m, alloc.eta);
        if (p.mup_var[m] >= 0)
            alloc.mu_rf[m] = std::min(std::exp(z[p.mup_var[m]]), ctx.rf_gain_cap(m, alloc.eta));
        else
            alloc.mu_rf[m] = ctx.rf_gain_cap(m, alloc.eta);
    }

    // Keep the better of the restored point and the full-power corner in
    // the GP's own objective (multi-start safeguard).
    auto prod_sinr_log = [&](const PowerAllocation& a) {
        double v = 0.0;
        for (int k = 0; k < t.num_ues; ++k) {
            const double sinr = sinr_closed_form(*ctx.terms, k, a);
            if (sinr <= 0.0) return -std::numeric_limits<double>::infinity();
            v += std::log(sinr);
        }
        return v;
    };
    if (ctx.feasibility_slack(start) <= kFeasTol && prod_sinr_log(start) > prod_sinr_log(alloc))
        alloc = start;

    // KKT residual of the true (uncondensed) problem at the returned point.
    {
        // Re-express the point in log coordinates (guard zero entries).
        std::vector<double> zf(p.dim, 0.0);
        for (int k = 0; k < t.num_ues; ++k)
            zf[p.eta_var[k]] = std::log(std::max(alloc.eta[k], 1e-300));
        for (int m = 0; m < t.num_aps; ++m) {
            if (p.mu_var[m] >= 0) zf[p.mu_var[m]] = std::log(std::max(alloc.mu_fso[m], 1e-300));
            if (p.mup_var[m] >= 0) zf[p.mup_var[m]] = std::log(std::max(alloc.mu_rf[m], 1e-300));
        }
        std::vector<double> gobj(p.dim);
        objective_true(zf, &gobj);
        // Active constraints and their gradients.
        std::vector<std::vector<double>> jac;
        for (const auto& c : p.constraints) {
            if (c.log_value(zf) > -1e-5) {
                std::vector<double> g(p.dim, 0.0);
                c.add_log_gradient(zf, 1.0, g);
                jac.push_back(std::move(g));
            }
        }
        // Projected-gradient NNLS for min_{lambda>=0} ||gobj + J^T lambda||.
        std::vector<double> lambda(jac.size(), 0.0);
        std::vector<double> resid = gobj;
        for (int it = 0; it < 2000 && !jac.empty(); ++it) {
            for (std::size_t i = 0; i < jac.size(); ++i) {
                double num = 0.0, den = 0.0;
                for (int d = 0; d < p.dim; ++d) {
                    num += jac[i][d] * resid[d];
                    den += jac[i][d] * jac[i][d];
                }
                if (den <= 0.0) continue;
                const double delta = std::max(-lambda[i], -num / den);
                lambda[i] += delta;
                for (int d = 0; d < p.dim; ++d) resid[d] += delta * jac[i][d];
            }
        }
        double rmax = 0.0, gmax = 1.0;
        for (double v : resid) rmax = std::max(rmax, std::abs(v));
        for (double v : gobj) gmax = std::max(gmax, std::abs(v));
        report.kkt_residual = rmax / gmax;
    }

    report.converged = report.kkt_residual <= opts.kkt_tol;
    report.termination = report.converged ? "KKT residual below tolerance"
                                          : "max rounds; returning best feasible iterate";
    report.trace.push_back({report.iterations, ctx.sum_rate(alloc), ctx.ee(alloc), 0.0});
    return {alloc, report};
}

// ----------------------------------------------------------- grid oracle --

GridResult brute_force_oracle(const SolverContext& ctx, const GridSpec& spec) {
    const SinrTerms& t = *ctx.terms;
    std::vector<int> gain_dims; // AP index, fso twice encoded: m for fso, M+m for rf
    for (int m = 0; m < t.num_aps; ++m) {
        bool fso_used = false, rf_used = false;
        for (int k = 0; k < t.num_ues; ++k) {
            if (t.serve(m, k) == 0.0) continue;
            fso_used = fso_used || t.a_fso(m, k) > 0.0;
            rf_used = rf_used || t.a_rf(m, k) > 0.0;
        }
        if (fso_used) gain_dims.push_back(m);
        if (rf_used) gain_dims.push_back(t.num_aps + m);
    }
    const int ne = t.num_ues;
    const int ng = static_cast<int>(gain_dims.size());

    double points = std::pow(spec.eta_points, ne) * std::pow(spec.gain_points, ng);
    if (points > static_cast<double>(spec.max_points))
        throw std::invalid_argument("grid too large for the brute-force oracle");

    struct Range {
        double lo, hi;
    };
    std::vector<Range> eta_range(ne, {0.0, 1.0});
    std::vector<Range> frac_range(ng, {0.0, 1.0});

    GridResult result;
    result.best_ee = -1.0;
    const double eta_budget = (ctx.power.power_budget - ctx.fixed_power()) / ctx.power.ue_power;

    for (int round = 0; round <= spec.zoom_rounds; ++round) {
        std::vector<int> idx(ne + ng, 0);
        PowerAllocation a;
        a.eta.assign(ne, 0.0);
        a.mu_fso.assign(t.num_aps, 0.0);
        a.mu_rf.assign(t.num_aps, 0.0);
        std::vector<double> best_coords(ne + ng, 0.0);
        bool done = false;
        while (!done) {
            double eta_sum = 0.0;
            for (int k = 0; k < ne; ++k) {
                const Range& r = eta_range[k];
                a.eta[k] = spec.eta_points == 1
                               ? r.lo
                               : r.lo + (r.hi - r.lo) * idx[k] / (spec.eta_points - 1);
                eta_sum += a.eta[k];
            }
            if (eta_sum <= eta_budget) {
                for (int g = 0; g < ng; ++g) {
                    const Range& r = frac_range[g];
                    const double frac =
                        spec.gain_points == 1
                            ? r.lo
                            : r.lo + (r.hi - r.lo) * idx[ne + g] / (spec.gain_points - 1);
                    const int dim = gain_dims[g];
                    if (dim < t.num_aps)
                        a.mu_fso[dim] = frac * ctx.fso_gain_cap(dim, a.eta);
                    else
                        a.mu_rf[dim - t.num_aps] = frac * ctx.rf_gain_cap(dim - t.num_aps, a.eta);
                }
                const double ee = ctx.ee(a);
                ++result.evaluated;
                if (ee > result.best_ee) {
                    result.best_ee = ee;
                    result.best = a;
                    for (int k = 0; k < ne; ++k) best_coords[k] = a.eta[k];
                    for (int g = 0; g < ng; ++g) {
                        const Range& r = frac_range[g];
                        best_coords[ne + g] =
                            spec.gain_points == 1
                                ? r.lo
                                : r.lo + (r.hi - r.lo) * idx[ne + g] / (spec.gain_points - 1);
                    }
                }
            }
            // odometer increment
            int d = 0;
            for (; d < ne + ng; ++d) {
                const int limit = d < ne ? spec.eta_points : spec.gain_points;
                if (++idx[d] < limit) break;
                idx[d] = 0;
            }
            done = d == ne + ng;
        }
        if (round < spec.zoom_rounds && result.best_ee >= 0.0) {
            for (int k = 0; k < ne; ++k) {
                const double span = (eta_range[k].hi - eta_range[k].lo) /
                                    std::max(1, spec.eta_points - 1) * 1.5;
                eta_range[k] = {std::max(0.0, best_coords[k] - span),
                                std::min(1.0, best_coords[k] + span)};
            }
            for (int g = 0; g < ng; ++g) {
                const double span = (frac_range[g].hi - frac_range[g].lo) /
                                    std::max(1, spec.gain_points - 1) * 1.5;
                frac_range[g] = {std::max(0.0, best_coords[ne + g] - span),
                                 std::min(1.0, best_coords[ne + g] + span)};
            }
        }
    }
    return result;
}

} // namespace cfmimo
