#include <doctest.h>

#include <sstream>

#include "clicksim/fixtures.hpp"
#include "clicksim/rewrite.hpp"
#include "clicksim/simrank.hpp"
#include "support.hpp"

using namespace clicksim;

TEST_CASE("query normalization") {
    CHECK(normalize_query("Digital  Cameras") == normalize_query("digital camera"));
    CHECK(normalize_query("") == "");
    CHECK(normalize_query("flowers") == "flower");
    CHECK(normalize_query("running shoes") == normalize_query("running shoe"));
    CHECK(normalize_query("batteries") == normalize_query("battery"));
    CHECK(normalize_query("glasses") == "glass");
    for (const char* s : {"Digital Cameras", "batteries", "wedding dresses", "used cars", "bus", "is", "dressed",
                          "  Flowers  Delivered ", "singing"}) {
        CHECK(normalize_query(normalize_query(s)) == normalize_query(s));
    }
}

TEST_CASE("rewrites on the two-component fixture") {
    const auto g = fixtures::sample_graph();
    SimRankParams p;
    p.max_iterations = 200;
    p.convergence_epsilon = 1e-12;
    const auto s = simrank(g, p);
    const auto list = top_rewrites(g, s, g.query_node("pc"));
    REQUIRE(list.depth() == 3);
    CHECK(list.rewrites[0].first == "camera");
    CHECK(list.rewrites[1].first == "digital camera");
    CHECK(list.rewrites[0].second == list.rewrites[1].second);
    CHECK(list.rewrites[2].first == "tv");
    CHECK(list.rewrites[2].second == doctest::Approx(0.437267).epsilon(1e-6));
    CHECK(top_rewrites(g, s, g.query_node("flower")).depth() == 0);

    const BidTermList none;
    CHECK(top_rewrites(g, s, g.query_node("pc"), {}, &none).depth() == 0);
    const auto bids = BidTermList::from_terms({"TV", "camera"});
    const auto filtered = top_rewrites(g, s, g.query_node("pc"), {}, &bids);
    REQUIRE(filtered.depth() == 2);
    CHECK(filtered.rewrites[0].first == "camera");
    CHECK(filtered.rewrites[1].first == "tv");

    RewriteOptions tight;
    tight.final_cap = 1;
    CHECK(top_rewrites(g, s, g.query_node("pc"), tight).depth() == 1);
    tight = {};
    tight.candidate_cap = 2;
    CHECK(top_rewrites(g, s, g.query_node("pc"), tight).depth() == 2);
}

TEST_CASE("stemming duplicates keep the best-scoring form") {
    // "camera" and "cameras" both click hp; "camera" is closer to "pc" via a second shared ad
    const auto e = [](double x) { return EdgeStats{1000, static_cast<std::uint64_t>(x * 1000), x}; };
    const auto g = ClickGraph::from_edges({"pc", "camera", "cameras"}, {"hp", "dell"},
                                          {{0, 0, e(0.1)}, {0, 1, e(0.1)}, {1, 0, e(0.1)}, {1, 1, e(0.1)},
                                           {2, 0, e(0.1)}});
    const auto s = simrank(g, SimRankParams{});
    const auto list = top_rewrites(g, s, g.query_node("pc"));
    REQUIRE(list.depth() == 1);
    CHECK(list.rewrites[0].first == "camera");
}

TEST_CASE("rewrite lists obey caps, order and determinism") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto g = testing_support::small_random(seed, 80, 40, 250);
        const auto s = simrank(g, SimRankParams{});
        const auto lists = rewrite_all(g, s);
        for (const auto& l : lists) {
            CHECK(l.depth() <= 5);
            for (std::size_t i = 1; i < l.depth(); ++i) {
                const auto& [a, sa] = l.rewrites[i - 1];
                const auto& [b, sb] = l.rewrites[i];
                CHECK((sa > sb || (sa == sb && a < b)));
            }
            for (const auto& [r, sc] : l.rewrites) CHECK(normalize_query(r) != normalize_query(l.query));
        }
        std::ostringstream a, b;
        write_rewrites(a, lists);
        write_rewrites(b, rewrite_all(g, s));
        CHECK(a.str() == b.str());
        std::istringstream in(a.str());
        const auto back = read_rewrites(in);
        std::ostringstream c;
        write_rewrites(c, back);
        CHECK(c.str() == a.str());
    }
}

TEST_CASE("coverage and depth histogram") {
    auto list = [](const char* q, std::size_t depth) {
        RewriteList l{q, {}};
        for (std::size_t i = 0; i < depth; ++i) l.rewrites.emplace_back("r" + std::to_string(i), 1.0);
        return l;
    };
    std::vector<RewriteList> lists{list("a", 0), list("b", 5), list("c", 5), list("d", 3)};
    CHECK(coverage(lists, {"b", "c"}) == 1.0);
    CHECK(coverage(lists, {"a"}) == 0.0);
    CHECK(coverage(lists, {"a", "b", "c", "d"}) == 0.75);
    CHECK(coverage(lists, {"a", "zzz"}) == 0.0);
    CHECK_THROWS_AS(coverage(lists, {}), std::invalid_argument);

    std::vector<RewriteList> many;
    for (int i = 0; i < 100; ++i) many.push_back(list(("q" + std::to_string(i)).c_str(), i < 98 ? 2 : 0));
    std::set<std::string> sample;
    for (const auto& l : many) sample.insert(l.query);
    CHECK(coverage(many, sample) == doctest::Approx(0.98));

    const auto h = depth_histogram(lists, 5);
    CHECK(h.size() == 3);
    CHECK(h.at(0) == 0.25);
    CHECK(h.at(3) == 0.25);
    CHECK(h.at(5) == 0.5);
    const auto uniform = depth_histogram({list("x", 5), list("y", 5)}, 5);
    CHECK(uniform.size() == 1);
    CHECK(uniform.at(5) == 1.0);
}

TEST_CASE("bid term lists are normalized on load") {
    std::istringstream in("# bids\nDigital   Camera\n\nTV\r\n");
    const auto bids = parse_bid_terms(in);
    CHECK(bids.terms.size() == 2);
    CHECK(bids.contains("digital camera"));
    CHECK(bids.contains("tv"));
    CHECK_FALSE(bids.contains("digital cameras"));
}

TEST_CASE("malformed rewrite files are rejected") {
    std::istringstream gap("pc\t2\tcamera\t0.5\n");
    CHECK_THROWS(read_rewrites(gap));
    std::istringstream fields("pc\t1\tcamera\n");
    CHECK_THROWS(read_rewrites(fields));
}
