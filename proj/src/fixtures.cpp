#include "clicksim/fixtures.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "clicksim/random.hpp"

namespace clicksim::fixtures {

namespace {

EdgeStats stats_for(double ecr) {
    const std::uint64_t impressions = 1000;
    return EdgeStats{impressions, static_cast<std::uint64_t>(std::llround(ecr * 1000.0)), ecr};
}

}  // namespace

ClickGraph sample_graph() {
    std::vector<std::string> queries{"pc", "camera", "digital camera", "tv", "flower"};
    std::vector<std::string> ads{"hp.com", "bestbuy.com", "teleflora.com", "orchids.com"};
    std::vector<Edge> edges{
        {0, 0, stats_for(0.10)}, {1, 0, stats_for(0.10)}, {1, 1, stats_for(0.10)},
        {2, 0, stats_for(0.10)}, {2, 1, stats_for(0.10)}, {3, 1, stats_for(0.10)},
        {4, 2, stats_for(0.10)}, {4, 3, stats_for(0.10)},
    };
    return ClickGraph::from_edges(std::move(queries), std::move(ads), std::move(edges));
}

ClickGraph spread_twins() {
    std::vector<std::string> queries{"flower_a", "orchids", "flower_b", "teleflora"};
    std::vector<std::string> ads{"shop_a", "shop_b"};
    std::vector<Edge> edges{
        {0, 0, stats_for(0.5)}, {1, 0, stats_for(0.5)},
        {2, 1, stats_for(0.75)}, {3, 1, stats_for(0.005)},
    };
    return ClickGraph::from_edges(std::move(queries), std::move(ads), std::move(edges));
}

ClickGraph share_twins() {
    std::vector<std::string> queries{"camera_a", "camera_b", "camera_c", "camera_d"};
    std::vector<std::string> ads{"shop_left", "shop_right", "own_a", "own_b", "own_c", "own_d"};
    std::vector<Edge> edges{
        {0, 0, stats_for(0.4)}, {1, 0, stats_for(0.4)},
        {2, 1, stats_for(0.1)}, {3, 1, stats_for(0.1)},
        {0, 2, stats_for(0.1)}, {1, 3, stats_for(0.1)},
        {2, 4, stats_for(0.1)}, {3, 5, stats_for(0.1)},
    };
    return ClickGraph::from_edges(std::move(queries), std::move(ads), std::move(edges));
}

ClickGraph twin_stars(std::size_t num_queries, std::uint64_t seed) {
    if (num_queries < 4 || num_queries % 2 != 0) {
        throw std::invalid_argument("twin_stars: num_queries must be even and >= 4");
    }
    Rng rng(seed);
    std::vector<std::string> queries, ads;
    std::vector<Edge> edges;
    for (std::uint32_t s = 0; s < num_queries / 2; ++s) {
        ads.push_back("ad" + std::to_string(s));
        for (std::uint32_t k = 0; k < 2; ++k) {
            const auto q = static_cast<std::uint32_t>(queries.size());
            queries.push_back("query " + std::to_string(q));
            const double ecr = std::round(rng.uniform(0.01, 1.0) * 1e6) / 1e6;
            edges.push_back(Edge{q, s, stats_for(ecr)});
        }
    }
    return ClickGraph::from_edges(std::move(queries), std::move(ads), std::move(edges));
}

}  // namespace clicksim::fixtures
