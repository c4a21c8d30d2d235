#pragma once

#include <cstddef>
#include <cstdint>

#include "clicksim/click_graph.hpp"

namespace clicksim {

struct SyntheticSpec {
    std::size_t num_queries = 1000;
    std::size_t num_ads = 800;
    std::size_t num_edges = 2500;
    double powerlaw_exponent = 2.2;
    std::uint64_t seed = 1;
    /// Degree cap on both sides; 0 means "size of the opposite side".
    std::size_t max_degree = 0;
};

/// Configuration-model click graph: ads-per-query and queries-per-ad degrees
/// are drawn from a discrete power law P(k) ~ k^-exponent, rescaled to sum to
/// num_edges, and stubs are matched with rejection of parallel edges. Every
/// edge carries impressions, clicks = 1 + Binomial(impressions - 1, p) and
/// ecr = clicks / impressions. Deterministic for a fixed spec.
///
/// When num_edges >= max(num_queries, num_ads) every node has degree >= 1.
/// num_edges == num_queries * num_ads yields the complete bipartite graph.
ClickGraph generate_synthetic(const SyntheticSpec& spec);

ClickGraph generate_synthetic(std::size_t num_queries, std::size_t num_ads,
                              std::size_t num_edges, double powerlaw_exponent,
                              std::uint64_t seed);

struct PlantedSkewSpec {
    std::size_t num_queries = 600;
    std::size_t num_ads = 400;
    std::size_t num_topics = 12;
    double powerlaw_exponent = 2.5;
    std::size_t min_degree = 2;
    std::size_t max_degree = 8;
    /// Probability that an edge lands on an ad of the query's own topic.
    double on_topic = 0.85;
    /// Fraction of each query's edges that carry a strong click rate.
    double strong_fraction = 0.5;
    std::uint64_t seed = 1;
};

/// Topic-clustered click graph whose weights carry information the structure
/// does not: each query's edges are split at random into strong
/// (ecr in [0.3, 0.6]) and weak (ecr in [0.01, 0.06]) ones.
ClickGraph generate_planted_skew(const PlantedSkewSpec& spec);

}  // namespace clicksim
