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

#include "topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rng.hpp"

namespace cfmimo {

void NetworkConfig::validate() const {
    if (area_side <= 0.0) throw std::invalid_argument("area_side must be positive");
    if (num_ues < 1 || num_aps < 1 || num_antennas < 1 || num_ans < 1)
        throw std::invalid_argument("all counts must be >= 1");
    if (an_ring_radius <= 0.0) throw std::invalid_argument("an_ring_radius must be positive");
    if (pilot_len < num_ues)
        throw std::invalid_argument("pilot_len must be >= num_ues for orthogonal pilots");
    if (coherence <= pilot_len)
        throw std::invalid_argument("coherence must exceed pilot_len");
    if (cluster_size < 1 || cluster_size > num_ues)
        throw std::invalid_argument("cluster_size must be in [1, num_ues]");
    if (rf_bandwidth <= 0.0) throw std::invalid_argument("rf_bandwidth must be positive");
    if (h_ue <= 0.0 || h_ap <= 0.0 || h_an <= 0.0)
        throw std::invalid_argument("antenna heights must be positive");
}

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<int> Topology::serving_aps(int k) const {
    std::vector<int> out;
    for (int m = 0; m < num_aps(); ++m)
        if (serves(m, k)) out.push_back(m);
    return out;
}

double Topology::ue_ap_distance(int m, int k) const {
    return distance(ap_positions[m], ue_positions[k]);
}

double Topology::ap_an_distance(int m) const {
    return distance(ap_positions[m], an_positions[ap_to_an[m]]);
}

void Topology::rebuild_serve_mask() {
    serve_mask_ = Matrix(num_aps(), num_ues(), 0.0);
    for (int m = 0; m < num_aps(); ++m)
        for (int k : cluster[m]) serve_mask_(m, k) = 1.0;
}

Topology generate_topology(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    Topology topo;

    const double half = config.area_side / 2.0;
    topo.ue_positions.resize(config.num_ues);
    for (auto& p : topo.ue_positions) p = {rng.uniform(-half, half), rng.uniform(-half, half)};
    topo.ap_positions.resize(config.num_aps);
    for (auto& p : topo.ap_positions) p = {rng.uniform(-half, half), rng.uniform(-half, half)};

    topo.an_positions.resize(config.num_ans);
    for (int a = 0; a < config.num_ans; ++a) {
        const double angle = 2.0 * M_PI * a / config.num_ans;
        topo.an_positions[a] = {config.an_ring_radius * std::cos(angle),
                                config.an_ring_radius * std::sin(angle)};
    }

    topo.ap_to_an.resize(config.num_aps);
    topo.an_aps.assign(config.num_ans, {});
    for (int m = 0; m < config.num_aps; ++m) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int a = 0; a < config.num_ans; ++a) {
            const double d = distance(topo.ap_positions[m], topo.an_positions[a]);
            if (d < best_d) {
                best_d = d;
                best = a;
            }
        }
        topo.ap_to_an[m] = best;
        topo.an_aps[best].push_back(m);
    }

    // Cell-free default: every AP serves every UE. User-centric callers
    // re-cluster afterwards from the large-scale gains.
    topo.cluster.assign(config.num_aps, {});
    std::vector<int> all(config.num_ues);
    std::iota(all.begin(), all.end(), 0);
    for (auto& c : topo.cluster) c = all;
    topo.rebuild_serve_mask();
    return topo;
}

void build_clusters(Topology& topo, const Matrix& beta_access, const NetworkConfig& config) {
    if (config.cluster_size > config.num_ues)
        throw std::invalid_argument("cluster_size exceeds number of UEs");
    for (int m = 0; m < topo.num_aps(); ++m)
        for (int k = 0; k < topo.num_ues(); ++k)
            if (!(beta_access(m, k) > 0.0) || !std::isfinite(beta_access(m, k)))
                throw std::invalid_argument("beta_access must be finite positive");

    for (int m = 0; m < topo.num_aps(); ++m) {
        std::vector<int> order(topo.num_ues());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return beta_access(m, a) > beta_access(m, b);
        });
        order.resize(config.cluster_size);
        std::sort(order.begin(), order.end());
        topo.cluster[m] = order;
    }
    topo.rebuild_serve_mask();
}

BandwidthSplit split_bandwidth(const FronthaulAssignment& assignment, const Topology& topo,
                               double rf_bandwidth) {
    const int num_aps = topo.num_aps();
    if (static_cast<int>(assignment.eps.size()) != num_aps ||
        static_cast<int>(assignment.eps_prime.size()) != num_aps)
        throw std::invalid_argument("assignment must cover every AP");

    BandwidthSplit split;
    split.rf_links_per_an.assign(topo.num_ans(), 0);
    for (int m = 0; m < num_aps; ++m)
        if (assignment.eps_prime[m]) ++split.rf_links_per_an[topo.ap_to_an[m]];

    split.bw_access = rf_bandwidth;
    std::vector<double> bw_per_an(topo.num_ans());
    for (int a = 0; a < topo.num_ans(); ++a) {
        bw_per_an[a] = rf_bandwidth / (split.rf_links_per_an[a] + 1);
        split.bw_access = std::min(split.bw_access, bw_per_an[a]);
    }

    split.bw_ap.assign(num_aps, 0.0);
    for (int m = 0; m < num_aps; ++m)
        if (assignment.eps_prime[m]) split.bw_ap[m] = bw_per_an[topo.ap_to_an[m]];
    return split;
}

} // namespace cfmimo
