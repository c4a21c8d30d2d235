#include "clicksim/evidence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clicksim {

std::string_view evidence_kind_name(EvidenceKind kind) {
    return kind == EvidenceKind::Geometric ? "geometric" : "exponential";
}

EvidenceKind parse_evidence_kind(std::string_view name) {
    if (name == "geometric") return EvidenceKind::Geometric;
    if (name == "exponential") return EvidenceKind::Exponential;
    throw std::invalid_argument("unknown evidence kind '" + std::string(name) +
                                "' (expected geometric|exponential)");
}

double evidence_score(std::size_t common_count, EvidenceKind kind) {
    const auto n = static_cast<double>(common_count);
    if (kind == EvidenceKind::Geometric) return 1.0 - std::exp2(-n);
    return -std::expm1(-n);
}

namespace {

std::size_t count_common(std::span<const Neighbor> a, std::span<const Neighbor> b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->index < j->index) {
            ++i;
        } else if (j->index < i->index) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

}  // namespace

std::size_t common_neighbors(const ClickGraph& graph, NodeId a, NodeId b) {
    if (a.kind != b.kind) throw std::invalid_argument("common_neighbors: nodes of different kinds");
    return count_common(graph.neighbors(a), graph.neighbors(b));
}

SymmetricScores apply_evidence(const ClickGraph& graph, NodeKind kind, const SymmetricScores& scores,
                               EvidenceKind evidence, double threshold) {
    const auto n = scores.size();
    std::vector<std::vector<ScoreEntry>> upper(n);
    for (std::uint32_t a = 0; a < n; ++a) {
        const auto ea = graph.neighbors(NodeId{kind, a});
        for (const auto& e : scores.row(a)) {
            if (e.other <= a) continue;
            const auto common = count_common(ea, graph.neighbors(NodeId{kind, e.other}));
            const double s = evidence_score(common, evidence) * e.score;
            if (s > 0.0 && s >= threshold) upper[a].push_back(ScoreEntry{e.other, s});
        }
    }
    return SymmetricScores::from_upper(std::move(upper));
}

BipartiteScores evidence_simrank_bipartite(const ClickGraph& graph, const SimRankParams& params,
                                           EvidenceKind kind) {
    auto raw = simrank_bipartite(graph, params);
    BipartiteScores out;
    out.queries = apply_evidence(graph, NodeKind::Query, raw.queries, kind, params.min_score_threshold);
    out.ads = apply_evidence(graph, NodeKind::Ad, raw.ads, kind, params.min_score_threshold);
    out.iterations_run = raw.iterations_run;
    out.converged = raw.converged;
    return out;
}

SimilarityScores evidence_simrank(const ClickGraph& graph, const SimRankParams& params, EvidenceKind kind) {
    auto raw = simrank_bipartite(graph, params);
    SimilarityScores s;
    s.pairs = apply_evidence(graph, NodeKind::Query, raw.queries, kind, params.min_score_threshold);
    s.iterations_run = raw.iterations_run;
    s.converged = raw.converged;
    s.method = Method::Evidence;
    return s;
}

}  // namespace clicksim
