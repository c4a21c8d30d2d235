#include <doctest.h>

#include <cmath>
#include <sstream>

#include "clicksim/baselines.hpp"
#include "clicksim/fixtures.hpp"
#include "support.hpp"

using namespace clicksim;

namespace {

EdgeStats w(double ecr) { return EdgeStats{1000, static_cast<std::uint64_t>(std::llround(ecr * 1000)), ecr}; }

}  // namespace

TEST_CASE("common-ad counts on the two-component fixture") {
    const auto g = fixtures::sample_graph();
    const char* names[] = {"pc", "camera", "digital camera", "tv", "flower"};
    const int table[5][5] = {
        {-1, 1, 1, 0, 0}, {1, -1, 2, 1, 0}, {1, 2, -1, 1, 0}, {0, 1, 1, -1, 0}, {0, 0, 0, 0, -1},
    };
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const auto a = g.query_node(names[i]), b = g.query_node(names[j]);
            if (i == j) CHECK(common_ad_count(g, a, b) == g.degree(a));
            else CHECK(common_ad_count(g, a, b) == static_cast<std::size_t>(table[i][j]));
        }
    CHECK_THROWS_AS(common_ad_count(g, NodeId::ad(0), g.query_node("pc")), std::invalid_argument);
    const auto all = common_ad_scores(g);
    CHECK(all.pairs.get(g.query_node("camera").index, g.query_node("digital camera").index) == 2.0);
}

TEST_CASE("pearson examples") {
    // q: {x: 0.2, y: 0.4}; q2: {x: 0.1, y: 0.3}; q3 mirrored; q4 elsewhere
    const auto g = ClickGraph::from_edges(
        {"q", "q2", "q3", "q4"}, {"x", "y", "z"},
        {{0, 0, w(0.2)}, {0, 1, w(0.4)}, {1, 0, w(0.1)}, {1, 1, w(0.3)}, {2, 0, w(0.3)}, {2, 1, w(0.1)}, {3, 2, w(0.5)}});
    CHECK(pearson(g, NodeId::query(0), NodeId::query(1)).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(g, NodeId::query(0), NodeId::query(2)).value == doctest::Approx(-1.0).epsilon(1e-12));
    const auto disjoint = pearson(g, NodeId::query(0), NodeId::query(3));
    CHECK(disjoint.value == 0.0);
    CHECK_FALSE(disjoint.degenerate);
    CHECK_THROWS_AS(pearson(g, NodeId::query(0), NodeId::ad(0)), std::invalid_argument);
}

TEST_CASE("pearson uses means over all neighbors") {
    // q: {x: 0.2, y: 0.4, z: 0.9}, mean 0.5; q2 shares x and y only
    const auto g = ClickGraph::from_edges({"q", "q2"}, {"x", "y", "z"},
                                          {{0, 0, w(0.2)}, {0, 1, w(0.4)}, {0, 2, w(0.9)}, {1, 0, w(0.1)}, {1, 1, w(0.3)}});
    const auto ctx = PearsonContext::build(g);
    CHECK(ctx.mean_weight[0] == doctest::Approx(0.5));
    // deviations (-0.3, -0.1) and (-0.1, 0.1): 0.02 / (sqrt(0.1) sqrt(0.02))
    CHECK(pearson(g, ctx, NodeId::query(0), NodeId::query(1)).value ==
          doctest::Approx(0.02 / (std::sqrt(0.1) * std::sqrt(0.02))).epsilon(1e-12));
}

TEST_CASE("pearson degenerate case") {
    const auto g = ClickGraph::from_edges({"q", "q2"}, {"x"}, {{0, 0, w(0.2)}, {1, 0, w(0.7)}});
    const auto r = pearson(g, NodeId::query(0), NodeId::query(1));
    CHECK(r.value == 0.0);
    CHECK(r.degenerate);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> degenerate;
    const auto s = pearson_scores(g, &degenerate);
    CHECK(s.pairs.pair_count() == 0);
    REQUIRE(degenerate.size() == 1);
    std::ostringstream out;
    write_pearson_dump(out, g, s, degenerate);
    CHECK(out.str() == "# method=pearson\nq\tq2\t0.000000\tdegenerate\n");
}

TEST_CASE("pearson properties on random graphs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = testing_support::small_random(seed, 60, 30, 200);
        const auto ctx = PearsonContext::build(g);
        for (std::uint32_t a = 0; a < 10; ++a)
            for (std::uint32_t b = 0; b < 10; ++b) {
                const auto x = pearson(g, ctx, NodeId::query(a), NodeId::query(b));
                const auto y = pearson(g, ctx, NodeId::query(b), NodeId::query(a));
                CHECK(x.value >= -1.0);
                CHECK(x.value <= 1.0);
                CHECK(x.value == y.value);
                if (common_ad_count(g, NodeId::query(a), NodeId::query(b)) == 0) CHECK(x.value == 0.0);
            }
    }
}

TEST_CASE("pearson scores across components are zero") {
    const auto g = fixtures::sample_graph();
    const auto s = pearson_scores(g);
    const auto flower = g.query_node("flower").index;
    for (std::uint32_t q = 0; q < g.num_queries(); ++q) {
        if (q != flower) CHECK(s.pairs.get(flower, q) == 0.0);
    }
}
