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

#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "estimation.hpp"
#include "oracle.hpp"
#include "rng.hpp"

namespace cfmimo {

const char* to_string(Policy p) {
    switch (p) {
        case Policy::fso_only: return "fso";
        case Policy::rf_only: return "rf";
        case Policy::rf_and_fso: return "both";
        case Policy::cognitive: return "cognitive";
    }
    return "?";
}

const char* to_string(Solver s) {
    switch (s) {
        case Solver::full: return "full";
        case Solver::wmmse: return "wmmse";
        case Solver::gp: return "gp";
    }
    return "?";
}

void Scenario::validate(const NetworkConfig& network) const {
    if (good_count + moderate_count + poor_count != network.num_aps)
        throw std::invalid_argument("alignment counts must sum to the number of APs");
    if (good_count < 0 || moderate_count < 0 || poor_count < 0)
        throw std::invalid_argument("alignment counts must be nonnegative");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

void apply_alignment_preset(Scenario& scenario, int num_aps) {
    double good_frac = 0.0, mod_frac = 0.0;
    if (scenario.name == "A") {
        good_frac = 0.10;
        mod_frac = 0.10;
    } else if (scenario.name == "B") {
        good_frac = 0.20;
        mod_frac = 0.20;
    } else if (scenario.name == "C") {
        good_frac = 0.30;
        mod_frac = 0.30;
    } else if (scenario.name == "D") {
        good_frac = 0.40;
        mod_frac = 0.40;
    } else {
        return; // custom: counts supplied by the caller
    }
    scenario.good_count = static_cast<int>(std::lround(good_frac * num_aps));
    scenario.moderate_count = static_cast<int>(std::lround(mod_frac * num_aps));
    scenario.poor_count = num_aps - scenario.good_count - scenario.moderate_count;
}

namespace {

FsoLinkParams make_link(const SimulationConfig& cfg, double distance, Alignment alignment,
                        Weather weather) {
    FsoLinkParams link;
    link.wavelength = cfg.fso.wavelength;
    link.cn2 = cfg.fso.cn2;
    link.jitter_sigma = cfg.fso.jitter_sigma;
    link.beam_waist = cfg.fso.beam_waist;
    link.receiver_radius = cfg.fso.receiver_radius;
    link.divergence = cfg.fso.divergence;
    link.distance = distance;
    link.atten_db_per_km = weather_attenuation_db_per_km(weather);
    link.radial_offset = alignment_offset_ratio(alignment) * cfg.fso.beam_waist;
    return link;
}

struct TrialState {
    Topology topo;
    Matrix beta_access;
    std::vector<double> beta_fronthaul;
    std::vector<Alignment> true_alignment;
    std::vector<FsoLinkParams> links;
    std::vector<double> gamma2, gamma4; // optical moments per link
    FronthaulAssignment assignment;
    BandwidthSplit split;
};

/// Cognitive per-link decision; fills `assignment`, optionally audit rows.
void run_cognitive_assignment(const SimulationConfig& cfg, TrialState& st, Rng& rng,
                              std::vector<AssignmentRow>* rows) {
    const int num_aps = st.topo.num_aps();
    const double full_bw_thermal = cfg.noise.thermal(cfg.network.rf_bandwidth);

    PilotConfig fso_pilots{cfg.network.pilot_len, cfg.transmit.ap_fso_max_w(),
                           cfg.noise.optical_floor};
    PilotConfig rf_pilots{cfg.network.pilot_len, cfg.transmit.ap_rf_max_w(), full_bw_thermal};

    for (int m = 0; m < num_aps; ++m) {
        // Beam snapshot at the detector: representative class offset along
        // a random azimuth (quadrant intensities average over jitter).
        const double azimuth = rng.uniform(0.0, 2.0 * M_PI);
        const FsoLinkParams& link = st.links[m];
        AlignmentThresholds th = cfg.alignment_thresholds;
        const double incident = 1.0;
        th.theta_zero *= incident;
        const QpdReading reading = qpd_measure(link.beam_waist, link.radial_offset,
                                               link.receiver_radius, incident, azimuth);
        const Alignment measured = classify_alignment(reading, th);

        // Refresh the pointing description from the measured class, then
        // invert the estimated optical mean-square to an attenuation guess.
        FsoLinkParams classified = link;
        classified.radial_offset = alignment_offset_ratio(measured) * link.beam_waist;
        const FronthaulEstimation fso_est = lmmse_fso({st.gamma2[m]}, fso_pilots);
        const AttenuationEstimate gamma_hat = estimate_attenuation(fso_est.gamma[0], classified);
        const Weather measured_weather = classify_weather(gamma_hat);

        // Pilot-SNR puts optical-intensity and radio-power statistics on a
        // common scale for the branch comparison.
        const double fso_quality = pilot_snr(st.gamma2[m], fso_pilots);
        const double rf_quality = pilot_snr(st.beta_fronthaul[m], rf_pilots);
        const LinkAssignment la =
            assign_fronthaul(measured, measured_weather, fso_quality, rf_quality);
        st.assignment.eps[m] = la.eps;
        st.assignment.eps_prime[m] = la.eps_prime;
        if (rows)
            rows->push_back({m, st.topo.ap_to_an[m], measured, measured_weather, la.eps,
                             la.eps_prime});
    }
}

} // namespace

TrialResult run_trial(const SimulationConfig& cfg, const Scenario& scenario, int trial_index,
                      std::vector<AssignmentRow>* link_rows, SolverReport* solver_report) {
    scenario.validate(cfg.network);
    Rng trial_rng = Rng(scenario.seed).stream(static_cast<std::uint64_t>(trial_index));

    TrialState st;
    st.topo = generate_topology(cfg.network, trial_rng.next_u64());

    LargeScaleModel access_model = cfg.large_scale;
    access_model.h_tx = cfg.network.h_ap;
    access_model.h_rx = cfg.network.h_ue;
    st.beta_access = access_large_scale(st.topo, access_model, trial_rng);

    LargeScaleModel fronthaul_model = cfg.large_scale;
    fronthaul_model.h_tx = cfg.network.h_an;
    fronthaul_model.h_rx = cfg.network.h_ap;
    st.beta_fronthaul = fronthaul_rf_large_scale(st.topo, fronthaul_model, trial_rng);

    if (scenario.mode == ServingMode::user_centric) {
        NetworkConfig net = cfg.network;
        net.mode = ServingMode::user_centric;
        build_clusters(st.topo, st.beta_access, net);
    }

    // Alignment classes: scenario counts shuffled over the APs.
    const int num_aps = st.topo.num_aps();
    st.true_alignment.assign(num_aps, Alignment::poor);
    for (int m = 0; m < scenario.good_count; ++m) st.true_alignment[m] = Alignment::good;
    for (int m = scenario.good_count; m < scenario.good_count + scenario.moderate_count; ++m)
        st.true_alignment[m] = Alignment::moderate;
    for (int m = num_aps - 1; m > 0; --m)
        std::swap(st.true_alignment[m], st.true_alignment[trial_rng.uniform_index(m + 1)]);

    st.links.reserve(num_aps);
    st.gamma2.resize(num_aps);
    st.gamma4.resize(num_aps);
    for (int m = 0; m < num_aps; ++m) {
        st.links.push_back(
            make_link(cfg, st.topo.ap_an_distance(m), st.true_alignment[m], scenario.weather));
        st.gamma2[m] = fso_moment(st.links[m], 2);
        st.gamma4[m] = fso_moment(st.links[m], 4);
    }

    // Fronthaul assignment per policy.
    st.assignment.eps.assign(num_aps, 0);
    st.assignment.eps_prime.assign(num_aps, 0);
    switch (scenario.policy) {
        case Policy::fso_only:
            st.assignment.eps.assign(num_aps, 1);
            break;
        case Policy::rf_only:
            st.assignment.eps_prime.assign(num_aps, 1);
            break;
        case Policy::rf_and_fso:
            st.assignment.eps.assign(num_aps, 1);
            st.assignment.eps_prime.assign(num_aps, 1);
            break;
        case Policy::cognitive:
            st.assignment.eps.assign(num_aps, 1);
            run_cognitive_assignment(cfg, st, trial_rng, link_rows);
            break;
    }
    if (link_rows && scenario.policy != Policy::cognitive)
        for (int m = 0; m < num_aps; ++m)
            link_rows->push_back({m, st.topo.ap_to_an[m], st.true_alignment[m], scenario.weather,
                                  st.assignment.eps[m], st.assignment.eps_prime[m]});

    st.split = split_bandwidth(st.assignment, st.topo, cfg.network.rf_bandwidth);

    // Post-split statistics: the access band shrinks to BW_0, per-AP radio
    // fronthauls see their own slice.
    const double access_thermal = cfg.noise.thermal(st.split.bw_access);
    PilotConfig access_pilots{cfg.network.pilot_len, cfg.transmit.pilot_power, access_thermal};
    const AccessEstimation access_est = lmmse_access(st.beta_access, access_pilots);

    std::vector<PilotConfig> rf_pilots(num_aps);
    std::vector<double> an_rf_floor(num_aps);
    std::vector<double> rf_gamma(num_aps);
    for (int m = 0; m < num_aps; ++m) {
        const double bw_m =
            st.assignment.eps_prime[m] ? st.split.bw_ap[m] : cfg.network.rf_bandwidth;
        const double thermal_m = cfg.noise.thermal(bw_m);
        rf_pilots[m] = {cfg.network.pilot_len, cfg.transmit.ap_rf_max_w(), thermal_m};
        an_rf_floor[m] = thermal_m;
        rf_gamma[m] = lmmse_scalar(st.beta_fronthaul[m], rf_pilots[m]).gamma;
    }

    // Hardware constants: clipping characterized on the unit-normalized
    // drive, distortion floors scaled to the nominal stage input power.
    const DistortionParams clip = clipping_distortion(
        {cfg.hardware.laser_gain, cfg.hardware.clip_level, 1.0});
    const double p_fso = cfg.transmit.ap_fso_max_w();
    const double p_rf = cfg.transmit.ap_rf_max_w();
    std::vector<double> an_fso_gain(num_aps, cfg.hardware.responsivity_fso * clip.gain);
    std::vector<double> an_rf_gain(num_aps, cfg.hardware.responsivity_fiber * clip.gain);
    std::vector<double> ap_fso_noise(num_aps, clip.noise_variance * p_fso);
    std::vector<double> ap_rf_noise(num_aps, (1.0 - cfg.hardware.rf_quality) * p_rf);
    std::vector<double> an_fso_noise(num_aps), an_rf_noise(num_aps);
    for (int m = 0; m < num_aps; ++m) {
        an_fso_noise[m] = clip.noise_variance * p_fso * st.gamma2[m];
        an_rf_noise[m] = clip.noise_variance * p_rf * st.beta_fronthaul[m];
    }

    // Branch moments; the optical gains follow the perfectly-known-at-the-
    // combiner convention the closed form is stated under.
    std::vector<BranchMoments> fso_moments(num_aps), rf_moments(num_aps);
    for (int m = 0; m < num_aps; ++m) {
        fso_moments[m] = fso_branch_perfect(st.gamma2[m], st.gamma4[m]);
        rf_moments[m] = rf_branch_lmmse(st.beta_fronthaul[m], rf_gamma[m]);
    }

    SinrInputs inputs;
    inputs.topo = &st.topo;
    inputs.num_antennas = cfg.network.num_antennas;
    inputs.ue_power = cfg.transmit.ue_power;
    inputs.beta_access = &st.beta_access;
    inputs.gamma_access = &access_est.gamma;
    inputs.fso = &fso_moments;
    inputs.rf = &rf_moments;
    inputs.assignment = &st.assignment;
    inputs.an_fso_gain = &an_fso_gain;
    inputs.an_rf_gain = &an_rf_gain;
    inputs.an_fso_noise = &an_fso_noise;
    inputs.an_rf_noise = &an_rf_noise;
    inputs.ap_fso_noise = &ap_fso_noise;
    inputs.ap_rf_noise = &ap_rf_noise;
    inputs.ap_thermal = access_thermal;
    inputs.an_fso_floor = cfg.noise.optical_floor;
    inputs.an_rf_floor = &an_rf_floor;
    inputs.cpu_floor = cfg.noise.cpu_floor;
    const SinrTerms terms = sinr_terms(inputs);

    SolverContext ctx;
    ctx.terms = &terms;
    ctx.power = cfg.power;
    ctx.power.ue_power = cfg.transmit.ue_power;
    ctx.p_fso_max = p_fso;
    ctx.p_rf_max = p_rf;
    ctx.ap_thermal = access_thermal;
    ctx.num_ans = st.topo.num_ans();
    ctx.bw_access = st.split.bw_access;
    ctx.coherence = cfg.network.coherence;
    ctx.pilot_len = cfg.network.pilot_len;

    PowerAllocation alloc = full_power(ctx);
    TrialResult result;
    switch (scenario.solver) {
        case Solver::full:
            break;
        case Solver::wmmse: {
            auto [a, report] = wmmse_solve(alloc, ctx);
            alloc = a;
            result.solver_converged = report.converged;
            result.solver_iterations = report.iterations;
            if (solver_report) *solver_report = report;
            break;
        }
        case Solver::gp: {
            auto [a, report] = gp_solve(ctx);
            alloc = a;
            result.solver_converged = report.converged;
            result.solver_iterations = report.iterations;
            if (solver_report) *solver_report = report;
            break;
        }
    }

    const int num_ues = st.topo.num_ues();
    result.sinr.resize(num_ues);
    result.rate.resize(num_ues);
    for (int k = 0; k < num_ues; ++k) {
        result.sinr[k] = sinr_closed_form(terms, k, alloc);
        result.rate[k] = rate_bits_per_symbol(result.sinr[k]);
        result.sum_rate += result.rate[k];
    }
    result.p_net = net_power(alloc, ctx.power, num_aps, st.topo.num_ans());
    result.bw_access = st.split.bw_access;
    result.ee = energy_efficiency(result.rate, result.p_net, st.split.bw_access,
                                  cfg.network.coherence, cfg.network.pilot_len);
    for (int m = 0; m < num_aps; ++m) {
        const bool f = st.assignment.eps[m], r = st.assignment.eps_prime[m];
        result.n_fso_only += f && !r;
        result.n_rf_only += !f && r;
        result.n_hybrid += f && r;
    }
    return result;
}

ExperimentAggregate run_experiment(const SimulationConfig& cfg, const Scenario& scenario,
                                   int num_threads) {
    scenario.validate(cfg.network);
    ExperimentAggregate agg;
    agg.scenario = scenario;
    agg.trials.resize(scenario.trials);

    if (num_threads <= 0)
        num_threads = static_cast<int>(std::thread::hardware_concurrency());
    num_threads = std::clamp(num_threads, 1, scenario.trials);

    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(num_threads);
    for (int w = 0; w < num_threads; ++w) {
        workers.emplace_back([&, w] {
            try {
                int t;
                while ((t = next.fetch_add(1)) < scenario.trials)
                    agg.trials[t] = run_trial(cfg, scenario, t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    // Commutative aggregation in trial order.
    std::vector<double> pooled_rates;
    for (const TrialResult& tr : agg.trials) {
        agg.ee_sorted.push_back(tr.ee);
        agg.mean_ee += tr.ee;
        agg.mean_sum_rate += tr.sum_rate;
        agg.mean_n_fso += tr.n_fso_only;
        agg.mean_n_rf += tr.n_rf_only;
        agg.mean_n_hybrid += tr.n_hybrid;
        agg.nonconverged_trials += tr.solver_converged ? 0 : 1;
        pooled_rates.insert(pooled_rates.end(), tr.rate.begin(), tr.rate.end());
    }
    const double inv = 1.0 / scenario.trials;
    agg.mean_ee *= inv;
    agg.mean_sum_rate *= inv;
    agg.mean_n_fso *= inv;
    agg.mean_n_rf *= inv;
    agg.mean_n_hybrid *= inv;
    std::sort(agg.ee_sorted.begin(), agg.ee_sorted.end());
    std::sort(pooled_rates.begin(), pooled_rates.end());
    if (!pooled_rates.empty()) {
        const std::size_t idx = static_cast<std::size_t>(0.05 * (pooled_rates.size() - 1));
        agg.rate_95_likely = pooled_rates[idx];
    }
    return agg;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void emit_outputs(const ExperimentAggregate& agg, const SimulationConfig& cfg,
                  const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const Scenario& sc = agg.scenario;
    const int num_ues = cfg.network.num_ues;

    {
        std::ofstream os(fs::path(out_dir) / "trials.csv", std::ios::binary);
        os << "trial,ee_bits_per_joule,p_net_w,bw0_hz,sum_rate_bits_s_hz,n_fso,n_rf,n_hybrid,"
              "solver_converged";
        for (int k = 0; k < num_ues; ++k) os << ",sinr_" << k;
        for (int k = 0; k < num_ues; ++k) os << ",rate_" << k;
        os << "\n";
        for (std::size_t t = 0; t < agg.trials.size(); ++t) {
            const TrialResult& tr = agg.trials[t];
            os << t << ',' << fmt(tr.ee) << ',' << fmt(tr.p_net) << ',' << fmt(tr.bw_access) << ','
               << fmt(tr.sum_rate) << ',' << tr.n_fso_only << ',' << tr.n_rf_only << ','
               << tr.n_hybrid << ',' << (tr.solver_converged ? 1 : 0);
            for (int k = 0; k < num_ues; ++k) os << ',' << fmt(tr.sinr[k]);
            for (int k = 0; k < num_ues; ++k) os << ',' << fmt(tr.rate[k]);
            os << "\n";
        }
    }
    {
        std::ofstream os(fs::path(out_dir) / "cdf.csv", std::ios::binary);
        os << "ee_bits_per_joule,cumulative_probability\n";
        const std::size_t n = agg.ee_sorted.size();
        for (std::size_t i = 0; i < n; ++i)
            os << fmt(agg.ee_sorted[i]) << ',' << fmt(static_cast<double>(i + 1) / n) << "\n";
    }
    {
        std::ofstream os(fs::path(out_dir) / "assignment.csv", std::ios::binary);
        os << "weather,scenario,n_fso,n_rf,n_hybrid\n";
        os << to_string(sc.weather) << ',' << sc.name << ',' << fmt(agg.mean_n_fso) << ','
           << fmt(agg.mean_n_rf) << ',' << fmt(agg.mean_n_hybrid) << "\n";
    }
    {
        nlohmann::json j;
        j["config"] = nlohmann::json::parse(config_to_json(cfg));
        j["scenario"] = {{"name", sc.name},
                         {"weather", to_string(sc.weather)},
                         {"policy", to_string(sc.policy)},
                         {"solver", to_string(sc.solver)},
                         {"mode", sc.mode == ServingMode::cell_free ? "cf" : "uc"},
                         {"trials", sc.trials},
                         {"seed", sc.seed},
                         {"alignment_counts",
                          {{"good", sc.good_count},
                           {"moderate", sc.moderate_count},
                           {"poor", sc.poor_count}}}};
        j["aggregates"] = {{"mean_ee_bits_per_joule", agg.mean_ee},
                           {"mean_sum_rate_bits_s_hz", agg.mean_sum_rate},
                           {"rate_95_likely_bits_s_hz", agg.rate_95_likely},
                           {"mean_n_fso", agg.mean_n_fso},
                           {"mean_n_rf", agg.mean_n_rf},
                           {"mean_n_hybrid", agg.mean_n_hybrid},
                           {"nonconverged_trials", agg.nonconverged_trials}};
        std::ofstream os(fs::path(out_dir) / "report.json", std::ios::binary);
        os << j.dump(2) << "\n";
    }
}

} // namespace cfmimo
