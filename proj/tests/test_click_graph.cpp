#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "clicksim/click_graph.hpp"
#include "clicksim/fixtures.hpp"
#include "support.hpp"

using namespace clicksim;

namespace {

ClickGraph parse(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_tsv(in);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const GraphError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("load: two queries sharing one ad") {
    const auto g = parse("pc\thp\t10\t1\t0.1\ncamera\thp\t10\t1\t0.1\n");
    CHECK(g.num_queries() == 2);
    CHECK(g.num_ads() == 1);
    CHECK(g.num_edges() == 2);
    CHECK(g.degree(g.ad_node("hp")) == 2);
}

TEST_CASE("load: empty input and comments") {
    CHECK(parse("").empty());
    const auto g = parse("# header\n\npc\thp\t10\t1\t0.1\r\n");
    CHECK(g.num_edges() == 1);
}

TEST_CASE("load: errors name the line and the broken rule") {
    const auto bad = error_of("pc\thp\t10\t1\t0.1\ncamera\thp\t3\t5\t0.1\n");
    CHECK(bad.find("line 2") != std::string::npos);
    CHECK(bad.find("clicks") != std::string::npos);
    CHECK(error_of("pc\thp\t10\t1\n").find("line 1") != std::string::npos);
    CHECK(error_of("pc\thp\t-1\t0\t0.1\n").find("non-negative") != std::string::npos);
    CHECK(error_of("pc\thp\t10\t1\t-0.1\n") != "");
    CHECK(error_of("pc\thp\tten\t1\t0.1\n").find("line 1") != std::string::npos);
    const auto dup = error_of("pc\thp\t10\t1\t0.1\nPC\thp\t10\t1\t0.1\n");
    CHECK(dup.find("duplicate") != std::string::npos);
}

TEST_CASE("labels are lowercased and whitespace-collapsed") {
    CHECK(normalize_label("  Digital\t  Camera ") == "digital camera");
    const auto g = parse("Digital  Camera\thp\t10\t1\t0.1\n");
    CHECK(g.query_label(0) == "digital camera");
    CHECK(g.find_query("DIGITAL camera").has_value());
}

TEST_CASE("neighbors on the small two-component fixture") {
    const auto g = fixtures::sample_graph();
    auto labels = [&](NodeId v) {
        std::vector<std::string> out;
        for (const auto& n : g.neighbors(v)) out.push_back(g.ad_label(n.index));
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(labels(g.query_node("camera")) == std::vector<std::string>{"bestbuy.com", "hp.com"});
    CHECK(labels(g.query_node("flower")) == std::vector<std::string>{"orchids.com", "teleflora.com"});
    CHECK_THROWS_AS(g.neighbors(NodeId::query(99)), std::out_of_range);
    const auto iso = ClickGraph::from_edges({"lonely"}, {"ad"}, {});
    CHECK(iso.neighbors(NodeId::query(0)).empty());
}

TEST_CASE("neighbors are ascending and symmetric with identical stats") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto g = testing_support::small_random(seed, 30, 20, 70);
        for (std::uint32_t q = 0; q < g.num_queries(); ++q) {
            const auto adj = g.query_neighbors(q);
            CHECK(std::is_sorted(adj.begin(), adj.end(), [](auto& a, auto& b) { return a.index < b.index; }));
            for (const auto& n : adj) {
                const auto back = g.ad_neighbors(n.index);
                const auto it = std::find_if(back.begin(), back.end(), [&](auto& m) { return m.index == q; });
                REQUIRE(it != back.end());
                CHECK(it->stats == n.stats);
                CHECK(n.stats.clicks <= n.stats.impressions);
            }
        }
    }
}

TEST_CASE("complete_bipartite") {
    const auto k22 = complete_bipartite(2, 2, 1.0);
    CHECK(k22.num_edges() == 4);
    const auto k12 = complete_bipartite(1, 2, 1.0);
    CHECK(k12.num_edges() == 2);
    const auto k32 = complete_bipartite(3, 2, 0.5);
    CHECK(k32.num_edges() == 6);
    for (const auto& e : k32.edges()) CHECK(e.stats.expected_click_rate == 0.5);
    CHECK_THROWS_AS(complete_bipartite(0, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(complete_bipartite(2, 2, 0.0), std::invalid_argument);
}

TEST_CASE("remove_edges") {
    const auto k11 = complete_bipartite(1, 1, 1.0);
    const std::pair<std::uint32_t, std::uint32_t> only{0, 0};
    const auto cut = remove_edges(k11, std::span(&only, 1));
    CHECK(cut.num_edges() == 0);
    CHECK(cut.num_queries() == 1);
    CHECK(cut.num_ads() == 1);
    CHECK(k11.num_edges() == 1);

    const auto g = fixtures::sample_graph();
    const auto same = remove_edges(g, {});
    CHECK(same.edges().size() == g.edges().size());
    std::ostringstream a, b;
    write_edge_tsv(a, g);
    write_edge_tsv(b, same);
    CHECK(a.str() == b.str());

    const std::pair<std::uint32_t, std::uint32_t> missing{0, 3};
    CHECK_THROWS_AS(remove_edges(g, std::span(&missing, 1)), GraphError);
}

TEST_CASE("remove_edges never changes degrees of untouched nodes") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = testing_support::small_random(seed, 30, 20, 70);
        const auto all = g.edges();
        std::vector<std::pair<std::uint32_t, std::uint32_t>> drop;
        for (std::size_t i = 0; i < all.size(); i += 4) drop.emplace_back(all[i].query, all[i].ad);
        const auto cut = remove_edges(g, drop);
        CHECK(cut.num_edges() == g.num_edges() - drop.size());
        for (std::uint32_t q = 0; q < g.num_queries(); ++q) {
            const bool touched = std::any_of(drop.begin(), drop.end(), [&](auto& e) { return e.first == q; });
            if (!touched) CHECK(cut.degree(NodeId::query(q)) == g.degree(NodeId::query(q)));
        }
        for (std::uint32_t a = 0; a < g.num_ads(); ++a) {
            const bool touched = std::any_of(drop.begin(), drop.end(), [&](auto& e) { return e.second == a; });
            if (!touched) CHECK(cut.degree(NodeId::ad(a)) == g.degree(NodeId::ad(a)));
        }
    }
}

TEST_CASE("extract_components") {
    const auto parts = extract_components(fixtures::sample_graph());
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].num_queries() == 4);
    CHECK(parts[0].num_edges() == 6);
    CHECK(parts[1].num_queries() == 1);
    CHECK(parts[1].query_label(0) == "flower");
    CHECK(extract_components(complete_bipartite(3, 3, 1.0)).size() == 1);
    CHECK(extract_components(ClickGraph{}).empty());
}

TEST_CASE("save/load round trip reproduces the graph") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto g = testing_support::small_random(seed, 40, 30, 90);
        std::ostringstream out;
        write_edge_tsv(out, g);
        const auto back = parse(out.str());
        CHECK(back.num_queries() == g.num_queries());
        CHECK(back.num_ads() == g.num_ads());
        REQUIRE(back.num_edges() == g.num_edges());
        for (const auto& e : g.edges()) {
            const auto q2 = back.find_query(g.query_label(e.query));
            const auto a2 = back.find_ad(g.ad_label(e.ad));
            REQUIRE(q2);
            REQUIRE(a2);
            const auto st = back.edge(*q2, *a2);
            REQUIRE(st);
            CHECK(st->impressions == e.stats.impressions);
            CHECK(st->clicks == e.stats.clicks);
            CHECK(st->expected_click_rate == doctest::Approx(e.stats.expected_click_rate).epsilon(1e-6));
        }
        std::ostringstream again;
        write_edge_tsv(again, back);
        CHECK(again.str() == out.str());
    }
}
