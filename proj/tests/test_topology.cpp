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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cfmimo/rng.hpp"
#include "cfmimo/topology.hpp"

using namespace cfmimo;

namespace {

NetworkConfig desk_config() {
    NetworkConfig cfg;
    cfg.num_ues = 8;
    cfg.num_aps = 40;
    cfg.num_ans = 4;
    cfg.cluster_size = 4;
    return cfg;
}

} // namespace

TEST_SUITE_BEGIN("topology");

TEST_CASE("four ANs sit on the ring at right angles") {
    NetworkConfig cfg = desk_config();
    const Topology topo = generate_topology(cfg, 7);
    REQUIRE(topo.num_ans() == 4);
    const double r = cfg.an_ring_radius;
    const Point expected[4] = {{r, 0}, {0, r}, {-r, 0}, {0, -r}};
    for (int a = 0; a < 4; ++a) {
        CHECK(topo.an_positions[a].x == doctest::Approx(expected[a].x).epsilon(1e-12));
        CHECK(topo.an_positions[a].y == doctest::Approx(expected[a].y).epsilon(1e-12));
    }
    for (const auto& p : topo.ue_positions) {
        CHECK(std::abs(p.x) <= cfg.area_side / 2);
        CHECK(std::abs(p.y) <= cfg.area_side / 2);
    }
}

TEST_CASE("single AN collects every AP") {
    NetworkConfig cfg = desk_config();
    cfg.num_ans = 1;
    const Topology topo = generate_topology(cfg, 3);
    CHECK(static_cast<int>(topo.an_aps[0].size()) == cfg.num_aps);
    for (int m = 0; m < cfg.num_aps; ++m) CHECK(topo.ap_to_an[m] == 0);
}

TEST_CASE("AP-AN association matches exhaustive nearest search") {
    NetworkConfig cfg = desk_config();
    cfg.num_aps = 50;
    const Topology topo = generate_topology(cfg, 99);
    for (int m = 0; m < cfg.num_aps; ++m) {
        int best = 0;
        double best_d = distance(topo.ap_positions[m], topo.an_positions[0]);
        for (int a = 1; a < cfg.num_ans; ++a) {
            const double d = distance(topo.ap_positions[m], topo.an_positions[a]);
            if (d < best_d) {
                best_d = d;
                best = a;
            }
        }
        CHECK(topo.ap_to_an[m] == best);
    }
}

TEST_CASE("AN service sets partition the APs") {
    NetworkConfig cfg = desk_config();
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Topology topo = generate_topology(cfg, seed);
        std::set<int> seen;
        std::size_t total = 0;
        for (const auto& aps : topo.an_aps) {
            total += aps.size();
            for (int m : aps) CHECK(seen.insert(m).second);
        }
        CHECK(total == static_cast<std::size_t>(cfg.num_aps));
    }
}

TEST_CASE("topology is bit-for-bit deterministic under the seed") {
    NetworkConfig cfg = desk_config();
    const Topology a = generate_topology(cfg, 42);
    const Topology b = generate_topology(cfg, 42);
    for (int i = 0; i < cfg.num_ues; ++i) {
        CHECK(a.ue_positions[i].x == b.ue_positions[i].x);
        CHECK(a.ue_positions[i].y == b.ue_positions[i].y);
    }
    for (int m = 0; m < cfg.num_aps; ++m) {
        CHECK(a.ap_positions[m].x == b.ap_positions[m].x);
        CHECK(a.ap_to_an[m] == b.ap_to_an[m]);
    }
    const Topology c = generate_topology(cfg, 43);
    bool any_diff = false;
    for (int i = 0; i < cfg.num_ues; ++i)
        any_diff = any_diff || a.ue_positions[i].x != c.ue_positions[i].x;
    CHECK(any_diff);
}

TEST_CASE("invalid configurations are rejected") {
    NetworkConfig cfg = desk_config();
    cfg.num_ans = 0;
    CHECK_THROWS(generate_topology(cfg, 1));
    cfg = desk_config();
    cfg.area_side = 0.0;
    CHECK_THROWS(generate_topology(cfg, 1));
    cfg = desk_config();
    cfg.num_ues = 30; // exceeds pilot length
    CHECK_THROWS(generate_topology(cfg, 1));
}

TEST_CASE("degenerate cluster equals the cell-free sets") {
    NetworkConfig cfg = desk_config();
    cfg.num_ues = 5;
    cfg.cluster_size = 5;
    Topology topo = generate_topology(cfg, 11);
    Matrix beta(cfg.num_aps, cfg.num_ues, 1.0);
    Rng rng(5);
    for (int m = 0; m < cfg.num_aps; ++m)
        for (int k = 0; k < cfg.num_ues; ++k) beta(m, k) = rng.uniform(0.1, 2.0);
    build_clusters(topo, beta, cfg);
    for (int m = 0; m < cfg.num_aps; ++m)
        for (int k = 0; k < cfg.num_ues; ++k) CHECK(topo.serves(m, k));
}

TEST_CASE("clusters keep the strongest UEs, ties to the lower index") {
    NetworkConfig cfg = desk_config();
    cfg.num_aps = 1;
    cfg.num_ues = 3;
    cfg.cluster_size = 2;
    Topology topo = generate_topology(cfg, 1);
    Matrix beta(1, 3);
    beta(0, 0) = 1.0;
    beta(0, 1) = 5.0;
    beta(0, 2) = 3.0;
    build_clusters(topo, beta, cfg);
    CHECK(topo.cluster[0] == std::vector<int>{1, 2});

    beta(0, 2) = 1.0; // tie between UE 0 and UE 2
    build_clusters(topo, beta, cfg);
    CHECK(topo.cluster[0] == std::vector<int>{0, 1});
}

TEST_CASE("each AP serves exactly cluster_size UEs at the paper's ratio") {
    NetworkConfig cfg = desk_config();
    cfg.num_aps = 20;
    cfg.num_ues = 10;
    cfg.cluster_size = 10;
    Topology topo = generate_topology(cfg, 2);
    Rng rng(17);
    Matrix beta(cfg.num_aps, cfg.num_ues);
    for (int m = 0; m < cfg.num_aps; ++m)
        for (int k = 0; k < cfg.num_ues; ++k) beta(m, k) = rng.uniform(1e-12, 1e-9);
    build_clusters(topo, beta, cfg);
    for (int m = 0; m < cfg.num_aps; ++m)
        CHECK(static_cast<int>(topo.cluster[m].size()) == cfg.cluster_size);
}

TEST_CASE("raising a served UE's gain never evicts it") {
    NetworkConfig cfg = desk_config();
    cfg.num_ues = 6;
    cfg.cluster_size = 3;
    Topology topo = generate_topology(cfg, 9);
    Rng rng(33);
    Matrix beta(cfg.num_aps, cfg.num_ues);
    for (int m = 0; m < cfg.num_aps; ++m)
        for (int k = 0; k < cfg.num_ues; ++k) beta(m, k) = rng.uniform(0.5, 2.0);
    build_clusters(topo, beta, cfg);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = static_cast<int>(rng.uniform_index(cfg.num_aps));
        const auto& served = topo.cluster[m];
        const int k = served[rng.uniform_index(served.size())];
        Matrix boosted = beta;
        boosted(m, k) *= rng.uniform(1.0, 4.0);
        Topology t2 = topo;
        build_clusters(t2, boosted, cfg);
        CHECK(t2.serves(m, k));
    }
}

TEST_CASE("cluster size larger than the UE count is an error") {
    NetworkConfig cfg = desk_config();
    Topology topo = generate_topology(cfg, 1);
    cfg.cluster_size = cfg.num_ues + 1;
    Matrix beta(cfg.num_aps, cfg.num_ues, 1.0);
    CHECK_THROWS(build_clusters(topo, beta, cfg));
}

TEST_CASE("all-optical assignment keeps the whole band for access") {
    NetworkConfig cfg = desk_config();
    const Topology topo = generate_topology(cfg, 5);
    FronthaulAssignment assignment;
    assignment.eps.assign(cfg.num_aps, 1);
    assignment.eps_prime.assign(cfg.num_aps, 0);
    const BandwidthSplit split = split_bandwidth(assignment, topo, 40e6);
    CHECK(split.bw_access == doctest::Approx(40e6));
    for (double bw : split.bw_ap) CHECK(bw == 0.0);
}

TEST_CASE("a single radio link halves the worst AN's slice") {
    NetworkConfig cfg = desk_config();
    const Topology topo = generate_topology(cfg, 5);
    FronthaulAssignment assignment;
    assignment.eps.assign(cfg.num_aps, 1);
    assignment.eps_prime.assign(cfg.num_aps, 0);
    assignment.eps_prime[3] = 1;
    const BandwidthSplit split = split_bandwidth(assignment, topo, 40e6);
    CHECK(split.bw_access == doctest::Approx(20e6));
    CHECK(split.bw_ap[3] == doctest::Approx(20e6));
}

TEST_CASE("random assignment agrees with a direct recount") {
    NetworkConfig cfg = desk_config();
    const Topology topo = generate_topology(cfg, 6);
    Rng rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        FronthaulAssignment assignment;
        assignment.eps.assign(cfg.num_aps, 1);
        assignment.eps_prime.resize(cfg.num_aps);
        for (int m = 0; m < cfg.num_aps; ++m)
            assignment.eps_prime[m] = rng.uniform() < 0.5 ? 1 : 0;
        const BandwidthSplit split = split_bandwidth(assignment, topo, 40e6);

        double worst = 40e6;
        for (int a = 0; a < cfg.num_ans; ++a) {
            int delta = 0;
            for (int m = 0; m < cfg.num_aps; ++m)
                if (topo.ap_to_an[m] == a && assignment.eps_prime[m]) ++delta;
            worst = std::min(worst, 40e6 / (delta + 1));
        }
        CHECK(split.bw_access == doctest::Approx(worst));
    }
}

TEST_CASE("enabling another radio link never grows the access band") {
    NetworkConfig cfg = desk_config();
    const Topology topo = generate_topology(cfg, 8);
    Rng rng(55);
    FronthaulAssignment assignment;
    assignment.eps.assign(cfg.num_aps, 1);
    assignment.eps_prime.assign(cfg.num_aps, 0);
    double prev = split_bandwidth(assignment, topo, 40e6).bw_access;
    std::vector<int> order(cfg.num_aps);
    for (int m = 0; m < cfg.num_aps; ++m) order[m] = m;
    for (int m = cfg.num_aps - 1; m > 0; --m)
        std::swap(order[m], order[rng.uniform_index(m + 1)]);
    for (int m : order) {
        assignment.eps_prime[m] = 1;
        const double bw = split_bandwidth(assignment, topo, 40e6).bw_access;
        CHECK(bw <= prev + 1e-9);
        prev = bw;
    }
}

TEST_SUITE_END();
