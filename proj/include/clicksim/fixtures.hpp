#pragma once

#include <cstdint>

#include "clicksim/click_graph.hpp"

namespace clicksim::fixtures {

/// Small click graph with two components:
///   pc - hp.com; camera, digital camera - {hp.com, bestbuy.com};
///   tv - bestbuy.com; flower - {teleflora.com, orchids.com}.
ClickGraph sample_graph();

/// Two disjoint stars, each one ad clicked from two queries. The left ad
/// carries equal weights {0.5, 0.5}; the right ad carries {0.75, 0.005}.
/// Queries: flower_a, orchids (left); flower_b, teleflora (right).
ClickGraph spread_twins();

/// Two disjoint query pairs, each sharing one ad with equal weights, plus a
/// private ad per query (weight 0.1). The left shared ad has weight 0.4 per
/// edge, the right one 0.1, so all shared-ad spreads are 1 but the left pair
/// puts more of its normalized weight on the shared ad.
/// Queries: camera_a, camera_b (left); camera_c, camera_d (right).
ClickGraph share_twins();

/// `num_queries / 2` disjoint stars, one ad and two queries each, with
/// weights drawn uniformly from [0.01, 1). num_queries must be even and >= 4.
ClickGraph twin_stars(std::size_t num_queries, std::uint64_t seed);

}  // namespace clicksim::fixtures
