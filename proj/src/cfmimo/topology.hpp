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

#ifndef CFMIMO_TOPOLOGY_HPP
#define CFMIMO_TOPOLOGY_HPP

#include <cstdint>
#include <vector>

#include "matrix.hpp"

namespace cfmimo {

enum class ServingMode { cell_free, user_centric };

struct NetworkConfig {
    double area_side = 1000.0;     // [m], square deployment area
    int num_ues = 8;               // K
    int num_aps = 40;              // M
    int num_antennas = 2;          // N per AP
    int num_ans = 4;               // A
    double an_ring_radius = 300.0; // [m]
    int cluster_size = 4;          // |K(m)| in user-centric mode
    ServingMode mode = ServingMode::cell_free;
    double rf_bandwidth = 40e6;    // [Hz], shared access + RF fronthaul band
    double h_ue = 1.65;            // [m]
    double h_ap = 15.0;            // [m]
    double h_an = 30.0;            // [m]
    int coherence = 100;           // tau, symbols per coherence interval
    int pilot_len = 20;            // tau_p, symbols

    // Throws std::invalid_argument on violated invariants
    // (counts >= 1, area > 0, K <= tau_p, cluster_size <= K, ...).
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Deployment geometry plus serving relations. AN service areas partition
/// the AP set; clusters hold K(m) per AP (all UEs in cell-free mode).
struct Topology {
    std::vector<Point> ue_positions;
    std::vector<Point> ap_positions;
    std::vector<Point> an_positions;
    Point cpu_position{0.0, 0.0};
    std::vector<int> ap_to_an;             // m -> a
    std::vector<std::vector<int>> an_aps;  // a -> M(a), ascending
    std::vector<std::vector<int>> cluster; // m -> K(m), ascending

    int num_ues() const { return static_cast<int>(ue_positions.size()); }
    int num_aps() const { return static_cast<int>(ap_positions.size()); }
    int num_ans() const { return static_cast<int>(an_positions.size()); }

    bool serves(int m, int k) const { return serve_mask_(m, k) != 0.0; }
    std::vector<int> serving_aps(int k) const; // M(k)

    double ue_ap_distance(int m, int k) const;
    double ap_an_distance(int m) const; // to the serving AN

    void rebuild_serve_mask();

  private:
    Matrix serve_mask_; // M x K, 0/1
};

/// UEs and APs uniform on the centered square, ANs equally spaced on the
/// ring (first at angle 0), each AP attached to its nearest AN (lowest
/// index on ties). Deterministic for a given (config, seed).
Topology generate_topology(const NetworkConfig& config, std::uint64_t seed);

/// User-centric clustering: each AP ranks large-scale access gains in
/// descending order and serves the top cluster_size UEs, ties broken by
/// lower UE index. Requires cluster_size <= K and finite positive gains.
void build_clusters(Topology& topo, const Matrix& beta_access, const NetworkConfig& config);

/// Per-link fronthaul enables. eps selects the optical branch, eps_prime
/// the radio branch; a traffic-carrying link must keep at least one.
struct FronthaulAssignment {
    std::vector<int> eps;       // per AP m
    std::vector<int> eps_prime; // per AP m
};

struct BandwidthSplit {
    double bw_access = 0.0;          // BW_0 = min_a BW/(Delta_a + 1)
    std::vector<double> bw_ap;       // BW_m for RF-fronthaul APs, 0 when unused
    std::vector<int> rf_links_per_an; // Delta_a
};

/// FDM split of the shared RF band per aggregation node: each AN divides
/// BW evenly between its access slice and its Delta_a radio fronthauls;
/// the network-wide access bandwidth is the worst AN's slice.
BandwidthSplit split_bandwidth(const FronthaulAssignment& assignment, const Topology& topo,
                               double rf_bandwidth);

} // namespace cfmimo

#endif
