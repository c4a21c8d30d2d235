#pragma once

#include <cstdint>
#include <vector>

#include "clicksim/click_graph.hpp"
#include "clicksim/evidence.hpp"
#include "clicksim/scores.hpp"
#include "clicksim/simrank.hpp"

namespace clicksim {

/// Population variance of the expected click rates incident to v.
/// Throws std::invalid_argument for isolated nodes.
double variance(const ClickGraph& graph, NodeId v);

/// e^{-variance(v)}, in (0, 1].
double spread(const ClickGraph& graph, NodeId v);

/// w(from, to) / sum_{j in E(from)} w(from, j). Throws std::invalid_argument
/// when the edge is missing or the total weight is zero.
double normalized_weight(const ClickGraph& graph, NodeId from, NodeId to);

/// Outgoing walk probabilities of one node: p(v, i) = spread(i) * normalized_weight(v, i)
/// and the remaining mass as a self-transition.
struct TransitionRow {
    NodeId node;
    std::vector<std::pair<NodeId, double>> out_probs;  // ascending by neighbor
    double self_prob = 0.0;
};

TransitionRow transition_probabilities(const ClickGraph& graph, NodeId v);

/// W(v, i) = spread(i) * normalized_weight(v, i) for every edge in CSR order.
/// Throws std::invalid_argument listing non-isolated nodes whose incident
/// weights sum to zero.
TransferWeights weighted_transfer(const ClickGraph& graph);

/// Weighted SimRank without the evidence factor (the bare iterate).
BipartiteScores weighted_iterate(const ClickGraph& graph, const SimRankParams& params);

/// Weighted SimRank: the bare iterate times the static evidence factor on each side.
BipartiteScores weighted_simrank_bipartite(const ClickGraph& graph, const SimRankParams& params,
                                           EvidenceKind kind = EvidenceKind::Geometric);
SimilarityScores weighted_simrank(const ClickGraph& graph, const SimRankParams& params,
                                  EvidenceKind kind = EvidenceKind::Geometric);

/// One sampled instance of the consistency definition: pairs (i1, j1) around
/// ad v1 and (i2, j2) around ad v2.
struct ConsistencyWitness {
    std::uint32_t i1, j1, v1;
    std::uint32_t i2, j2, v2;
    int clause;  // 1: equal variances, 2: variance(v1) < variance(v2)
    double sim1, sim2;
};

struct ConsistencyReport {
    std::size_t sampled = 0;     // quadruples drawn
    std::size_t checked = 0;     // quadruples whose clause premise held
    std::size_t checked_equal_variance = 0;
    std::size_t checked_lower_variance = 0;
    std::size_t violations = 0;
    std::vector<ConsistencyWitness> witnesses;  // first few violations
};

/// Samples `samples` quadruples: two distinct ads v1 != v2 with >= 2 queries
/// each, a query pair i1 != j1 in E(v1), a query pair i2 != j2 in E(v2) forming
/// a different unordered pair. For each, the premise
///   w(i1, v1) > w(i2, v2) and variance(v1) <= variance(v2)
/// (equal variances: clause i, smaller: clause ii) must imply
///   sim(i1, j1) > sim(i2, j2).
/// Graphs with fewer than two eligible ads report zero samples.
ConsistencyReport check_consistency(const ClickGraph& graph, const SimilarityScores& scores,
                                    std::size_t samples, std::uint64_t seed);

}  // namespace clicksim
