#include "clicksim/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "clicksim/random.hpp"

namespace clicksim {

namespace {

constexpr double kVarianceTie = 1e-12;

double incident_variance(std::span<const Neighbor> adj) {
    double mean = 0.0;
    for (const auto& n : adj) mean += n.stats.expected_click_rate;
    mean /= static_cast<double>(adj.size());
    double acc = 0.0;
    for (const auto& n : adj) {
        const double d = n.stats.expected_click_rate - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(adj.size());
}

double incident_total(std::span<const Neighbor> adj) {
    double total = 0.0;
    for (const auto& n : adj) total += n.stats.expected_click_rate;
    return total;
}

NodeId opposite(NodeKind kind, std::uint32_t index) {
    return kind == NodeKind::Query ? NodeId::ad(index) : NodeId::query(index);
}

std::string describe(const ClickGraph& g, NodeId v) {
    return std::string(v.kind == NodeKind::Query ? "query '" : "ad '") + g.label(v) + "'";
}

}  // namespace

double variance(const ClickGraph& graph, NodeId v) {
    const auto adj = graph.neighbors(v);
    if (adj.empty()) throw std::invalid_argument("variance: " + describe(graph, v) + " is isolated");
    return incident_variance(adj);
}

double spread(const ClickGraph& graph, NodeId v) { return std::exp(-variance(graph, v)); }

double normalized_weight(const ClickGraph& graph, NodeId from, NodeId to) {
    if (from.kind == to.kind) throw std::invalid_argument("normalized_weight: nodes of the same kind");
    const auto adj = graph.neighbors(from);
    const auto it = std::lower_bound(adj.begin(), adj.end(), to.index,
                                     [](const Neighbor& n, std::uint32_t x) { return n.index < x; });
    if (it == adj.end() || it->index != to.index) {
        throw std::invalid_argument("normalized_weight: no edge between " + describe(graph, from) +
                                    " and " + describe(graph, to));
    }
    const double total = incident_total(adj);
    if (!(total > 0.0)) {
        throw std::invalid_argument("normalized_weight: " + describe(graph, from) + " has zero total weight");
    }
    return it->stats.expected_click_rate / total;
}

TransitionRow transition_probabilities(const ClickGraph& graph, NodeId v) {
    const auto adj = graph.neighbors(v);
    if (adj.empty()) {
        throw std::invalid_argument("transition_probabilities: " + describe(graph, v) + " is isolated");
    }
    const double total = incident_total(adj);
    if (!(total > 0.0)) {
        throw std::invalid_argument("transition_probabilities: " + describe(graph, v) +
                                    " has zero total weight");
    }
    TransitionRow row;
    row.node = v;
    double mass = 0.0;
    for (const auto& n : adj) {
        const auto target = opposite(v.kind, n.index);
        const double p = spread(graph, target) * n.stats.expected_click_rate / total;
        row.out_probs.emplace_back(target, p);
        mass += p;
    }
    row.self_prob = std::max(0.0, 1.0 - mass);
    return row;
}

TransferWeights weighted_transfer(const ClickGraph& graph) {
    std::vector<double> query_spread(graph.num_queries(), 1.0);
    std::vector<double> ad_spread(graph.num_ads(), 1.0);
    std::string offenders;
    auto note = [&](NodeId v) {
        if (!offenders.empty()) offenders += ", ";
        offenders += describe(graph, v);
    };
    std::vector<double> query_total(graph.num_queries()), ad_total(graph.num_ads());
    for (std::uint32_t q = 0; q < graph.num_queries(); ++q) {
        const auto adj = graph.query_neighbors(q);
        if (adj.empty()) continue;
        query_spread[q] = std::exp(-incident_variance(adj));
        query_total[q] = incident_total(adj);
        if (!(query_total[q] > 0.0)) note(NodeId::query(q));
    }
    for (std::uint32_t a = 0; a < graph.num_ads(); ++a) {
        const auto adj = graph.ad_neighbors(a);
        if (adj.empty()) continue;
        ad_spread[a] = std::exp(-incident_variance(adj));
        ad_total[a] = incident_total(adj);
        if (!(ad_total[a] > 0.0)) note(NodeId::ad(a));
    }
    if (!offenders.empty()) {
        throw std::invalid_argument("weighted SimRank: zero total incident weight at " + offenders);
    }

    TransferWeights t;
    t.query_side.reserve(graph.num_edges());
    t.ad_side.reserve(graph.num_edges());
    for (std::uint32_t q = 0; q < graph.num_queries(); ++q) {
        for (const auto& n : graph.query_neighbors(q)) {
            t.query_side.push_back(ad_spread[n.index] * (n.stats.expected_click_rate / query_total[q]));
        }
    }
    for (std::uint32_t a = 0; a < graph.num_ads(); ++a) {
        for (const auto& n : graph.ad_neighbors(a)) {
            t.ad_side.push_back(query_spread[n.index] * (n.stats.expected_click_rate / ad_total[a]));
        }
    }
    return t;
}

BipartiteScores weighted_iterate(const ClickGraph& graph, const SimRankParams& params) {
    return iterate_simrank(graph, params, weighted_transfer(graph));
}

BipartiteScores weighted_simrank_bipartite(const ClickGraph& graph, const SimRankParams& params,
                                           EvidenceKind kind) {
    auto raw = weighted_iterate(graph, params);
    BipartiteScores out;
    out.queries = apply_evidence(graph, NodeKind::Query, raw.queries, kind, params.min_score_threshold);
    out.ads = apply_evidence(graph, NodeKind::Ad, raw.ads, kind, params.min_score_threshold);
    out.iterations_run = raw.iterations_run;
    out.converged = raw.converged;
    return out;
}

SimilarityScores weighted_simrank(const ClickGraph& graph, const SimRankParams& params, EvidenceKind kind) {
    auto both = weighted_simrank_bipartite(graph, params, kind);
    SimilarityScores s;
    s.pairs = std::move(both.queries);
    s.iterations_run = both.iterations_run;
    s.converged = both.converged;
    s.method = Method::Weighted;
    return s;
}

ConsistencyReport check_consistency(const ClickGraph& graph, const SimilarityScores& scores,
                                    std::size_t samples, std::uint64_t seed) {
    ConsistencyReport report;
    std::vector<std::uint32_t> ads;
    std::vector<double> ad_variance(graph.num_ads(), 0.0);
    for (std::uint32_t a = 0; a < graph.num_ads(); ++a) {
        const auto adj = graph.ad_neighbors(a);
        if (adj.size() >= 2) {
            ads.push_back(a);
            ad_variance[a] = incident_variance(adj);
        }
    }
    if (ads.size() < 2) return report;

    Rng rng(seed);
    auto pick_pair = [&](std::uint32_t ad) {
        const auto adj = graph.ad_neighbors(ad);
        const auto x = rng.below(adj.size());
        auto y = rng.below(adj.size() - 1);
        if (y >= x) ++y;
        return std::pair{adj[x], adj[y]};
    };

    const std::size_t max_draws = samples * 100 + 1000;
    for (std::size_t draw = 0; draw < max_draws && report.sampled < samples; ++draw) {
        const auto x = rng.below(ads.size());
        auto y = rng.below(ads.size() - 1);
        if (y >= x) ++y;
        const auto v1 = ads[x];
        const auto v2 = ads[y];
        const auto [i1, j1] = pick_pair(v1);
        const auto [i2, j2] = pick_pair(v2);
        const bool same_pair = (i1.index == i2.index && j1.index == j2.index) ||
                               (i1.index == j2.index && j1.index == i2.index);
        if (same_pair) continue;
        ++report.sampled;

        const double w1 = i1.stats.expected_click_rate;
        const double w2 = i2.stats.expected_click_rate;
        if (!(w1 > w2)) continue;
        const double dv = ad_variance[v1] - ad_variance[v2];
        int clause = 0;
        if (std::abs(dv) <= kVarianceTie) {
            clause = 1;
            ++report.checked_equal_variance;
        } else if (dv < 0.0) {
            clause = 2;
            ++report.checked_lower_variance;
        } else {
            continue;
        }
        ++report.checked;
        const double s1 = scores.pairs.get(i1.index, j1.index);
        const double s2 = scores.pairs.get(i2.index, j2.index);
        if (!(s1 > s2)) {
            ++report.violations;
            if (report.witnesses.size() < 8) {
                report.witnesses.push_back(
                    ConsistencyWitness{i1.index, j1.index, v1, i2.index, j2.index, v2, clause, s1, s2});
            }
        }
    }
    return report;
}

}  // namespace clicksim
