#pragma once

#include <cstddef>
#include <string_view>

#include "clicksim/click_graph.hpp"
#include "clicksim/scores.hpp"
#include "clicksim/simrank.hpp"

namespace clicksim {

enum class EvidenceKind { Geometric, Exponential };

std::string_view evidence_kind_name(EvidenceKind kind);
EvidenceKind parse_evidence_kind(std::string_view name);

/// Evidence that two nodes with `common_count` shared neighbors are similar:
/// Geometric = sum_{i=1..n} 2^-i = 1 - 2^-n, Exponential = 1 - e^-n.
double evidence_score(std::size_t common_count, EvidenceKind kind);

/// |E(a) ∩ E(b)| for two nodes of the same kind.
std::size_t common_neighbors(const ClickGraph& graph, NodeId a, NodeId b);

/// Multiplies every stored pair by its evidence factor; pairs without a
/// common neighbor (and products under `threshold`) are dropped.
SymmetricScores apply_evidence(const ClickGraph& graph, NodeKind kind, const SymmetricScores& scores,
                               EvidenceKind evidence, double threshold);

/// Plain SimRank iterate after k iterations times the static evidence factor.
SimilarityScores evidence_simrank(const ClickGraph& graph, const SimRankParams& params,
                                  EvidenceKind kind = EvidenceKind::Geometric);
/// Both sides, each multiplied by its own evidence factor.
BipartiteScores evidence_simrank_bipartite(const ClickGraph& graph, const SimRankParams& params,
                                           EvidenceKind kind = EvidenceKind::Geometric);

}  // namespace clicksim
