#include <doctest.h>

#include <cmath>
#include <sstream>

#include "clicksim/eval.hpp"
#include "clicksim/fixtures.hpp"
#include "clicksim/generator.hpp"

using namespace clicksim;

namespace {

EdgeStats w(double ecr) { return EdgeStats{1000, static_cast<std::uint64_t>(std::llround(ecr * 1000)), ecr}; }

ClickGraph skewed(std::uint64_t seed) {
    PlantedSkewSpec s;
    s.seed = seed;
    return generate_planted_skew(s);
}

RewriteList list(const std::string& q, std::vector<std::string> rws) {
    RewriteList l{q, {}};
    double s = 1.0;
    for (auto& r : rws) l.rewrites.emplace_back(std::move(r), s -= 0.1);
    return l;
}

}  // namespace

TEST_CASE("desirability") {
    // q2 clicks a (0.3), b (0.3), c (0.5); q1 clicks a and c; q3 clicks b only
    const auto g = ClickGraph::from_edges({"q1", "q2", "q3"}, {"a", "b", "c", "d"},
                                          {{0, 0, w(0.2)}, {0, 2, w(0.2)}, {1, 0, w(0.3)}, {1, 1, w(0.1)},
                                           {1, 2, w(0.5)}, {2, 1, w(0.4)}, {2, 3, w(0.4)}});
    const auto q1 = NodeId::query(0), q2 = NodeId::query(1), q3 = NodeId::query(2);
    CHECK(desirability(g, q1, q2) == doctest::Approx((0.3 + 0.5) / 3.0));
    CHECK(desirability(g, q2, q1) == doctest::Approx((0.2 + 0.2) / 2.0));
    CHECK(desirability(g, q1, q3) == 0.0);
    CHECK(desirability(g, q3, q2) == doctest::Approx(0.1 / 3.0));
    CHECK_THROWS_AS(desirability(g, q1, NodeId::ad(0)), std::invalid_argument);

    const auto single = ClickGraph::from_edges({"x", "y"}, {"a", "b", "c", "d"},
                                               {{0, 0, w(0.5)}, {1, 0, w(0.3)}, {1, 1, w(0.3)}, {1, 2, w(0.6)}});
    CHECK(desirability(single, NodeId::query(0), NodeId::query(1)) == doctest::Approx(0.1));
}

TEST_CASE("triple selection") {
    const auto g = skewed(3);
    const auto a = select_triples(g, 20, 7);
    const auto b = select_triples(g, 20, 7);
    REQUIRE(a.size() == 20);
    std::set<std::uint32_t> firsts;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].q1 == b[i].q1);
        CHECK(a[i].q2 == b[i].q2);
        CHECK(a[i].q3 == b[i].q3);
        CHECK(a[i].removed_edges == b[i].removed_edges);
        const auto& t = a[i];
        firsts.insert(t.q1);
        CHECK(t.q2 != t.q3);
        CHECK(t.q1 != t.q2);
        CHECK(t.q1 != t.q3);
        CHECK(desirability(g, NodeId::query(t.q1), NodeId::query(t.q2)) > 0.0);
        CHECK(desirability(g, NodeId::query(t.q1), NodeId::query(t.q3)) > 0.0);
        const auto cut = remove_edges(g, t.removed_edges);
        CHECK(desirability(cut, NodeId::query(t.q1), NodeId::query(t.q2)) == 0.0);
        CHECK(desirability(cut, NodeId::query(t.q1), NodeId::query(t.q3)) == 0.0);
        CHECK(cut.degree(NodeId::query(t.q1)) > 0);
    }
    CHECK(firsts.size() == a.size());

    try {
        (void)select_triples(fixtures::sample_graph(), 5, 1);
        FAIL("expected InsufficientTriples");
    } catch (const InsufficientTriples& e) {
        CHECK(e.found < 5);
    }
}

TEST_CASE("desirability experiment is deterministic and counts ties as failures") {
    const auto g = skewed(5);
    const auto triples = select_triples(g, 15, 2);
    SimRankParams p;
    for (auto m : {Method::Simple, Method::Evidence, Method::Weighted, Method::Pearson, Method::CommonAds}) {
        const auto x = desirability_experiment(g, triples, m, p);
        const auto y = desirability_experiment(g, triples, m, p);
        CHECK(x.total == 15);
        CHECK(x.successes == y.successes);
        CHECK(x.method == m);
    }
    // q1 loses every shared ad, so the common-ad and pearson baselines score both sides 0
    CHECK(desirability_experiment(g, triples, Method::CommonAds, p).successes == 0);
    CHECK(desirability_experiment(g, triples, Method::Pearson, p).successes == 0);
}

TEST_CASE("judgment parsing") {
    std::istringstream ok("# graded\nPC\tcamera\t1\n\npc\ttv\t4\n");
    const auto j = parse_judgments(ok);
    CHECK(j.grades.size() == 2);
    CHECK(j.grades.at({"pc", "camera"}) == 1);
    for (const char* bad : {"pc\tcamera\n", "pc\tcamera\t5\n", "pc\tcamera\tx\n", "pc\tcamera\t1\npc\tcamera\t2\n",
                            "pc\tcamera\t0\n"}) {
        std::istringstream in(bad);
        CHECK_THROWS(parse_judgments(in));
    }
}

TEST_CASE("precision and recall") {
    JudgmentSet j;
    j.grades = {{{"a", "x"}, 1}, {{"a", "y"}, 3}, {{"a", "z"}, 2}, {{"b", "u"}, 4}, {{"b", "v"}, 1}};
    const std::set<int> pos{1, 2};

    SUBCASE("a single method has full recall") {
        const auto r = precision_recall({{"m", {list("a", {"x", "y", "z"}), list("b", {"u"}), list("c", {})}}}, j, pos);
        REQUIRE(r.size() == 1);
        CHECK(r[0].queries == 3);
        CHECK(r[0].queries_with_rewrites == 2);
        CHECK(r[0].queries_with_relevant == 1);
        CHECK(r[0].precision == doctest::Approx((2.0 / 3.0 + 0.0) / 2.0));
        CHECK(r[0].recall == 1.0);
        CHECK(r[0].precision_at[0] == doctest::Approx(0.5));
        // b has depth 1, so P@2 uses a denominator of 1 for it
        CHECK(r[0].precision_at[1] == doctest::Approx((0.5 + 0.0) / 2.0));
        CHECK(r[0].precision_at[4] == doctest::Approx((2.0 / 3.0) / 2.0));
        CHECK(r[0].interpolated[0] == 1.0);
        CHECK(r[0].interpolated[10] == doctest::Approx(2.0 / 3.0));
        for (int i = 1; i <= 10; ++i) CHECK(r[0].interpolated[i] <= r[0].interpolated[i - 1]);
    }

    SUBCASE("recall pools relevant rewrites across methods") {
        const auto r = precision_recall({{"m1", {list("a", {"x"}), list("b", {"u"})}},
                                         {"m2", {list("a", {"z"}), list("b", {"v"})}}},
                                        j, pos);
        REQUIRE(r.size() == 2);
        CHECK(r[0].queries_with_relevant == 2);
        CHECK(r[0].recall == doctest::Approx((0.5 + 0.0) / 2.0));
        CHECK(r[1].recall == doctest::Approx((0.5 + 1.0) / 2.0));
        CHECK(r[1].precision == 1.0);
    }

    SUBCASE("ungraded pairs are listed") {
        try {
            (void)precision_recall({{"m", {list("a", {"x", "w"}), list("q", {"r"})}}}, j, pos);
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            CHECK(msg.find("(a -> w)") != std::string::npos);
            CHECK(msg.find("(q -> r)") != std::string::npos);
            CHECK(msg.find("(a -> x)") == std::string::npos);
        }
    }

    SUBCASE("report format") {
        const auto r = precision_recall({{"m", {list("a", {"x"})}}}, j, pos);
        std::ostringstream out;
        write_report(out, r[0]);
        CHECK(out.str().find("precision=1.000000\n") != std::string::npos);
        CHECK(out.str().find("interpolated_precision_0.5=") != std::string::npos);
    }
}
