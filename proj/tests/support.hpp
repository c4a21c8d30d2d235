#pragma once

#include <string>

#include "clicksim/click_graph.hpp"
#include "clicksim/generator.hpp"

namespace testing_support {

inline clicksim::ClickGraph small_random(std::uint64_t seed, std::size_t nq = 12, std::size_t na = 9,
                                         std::size_t ne = 30) {
    clicksim::SyntheticSpec s;
    s.num_queries = nq;
    s.num_ads = na;
    s.num_edges = ne;
    s.powerlaw_exponent = 2.2;
    s.seed = seed;
    return clicksim::generate_synthetic(s);
}

inline clicksim::NodeId q(const clicksim::ClickGraph& g, const std::string& label) { return g.query_node(label); }

}  // namespace testing_support
