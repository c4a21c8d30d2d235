#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "clicksim/click_graph.hpp"
#include "clicksim/scores.hpp"

namespace clicksim {

/// |E(q) ∩ E(q2)|. Throws std::invalid_argument for ad nodes.
std::size_t common_ad_count(const ClickGraph& graph, NodeId q, NodeId q2);

/// Mean incident weight per query, taken over all of its edges.
struct PearsonContext {
    std::vector<double> mean_weight;

    static PearsonContext build(const ClickGraph& graph);
};

struct PearsonResult {
    double value = 0.0;
    /// Set when either deviation sum over the common ads is zero; value is 0 then.
    bool degenerate = false;
};

/// Pearson correlation restricted to common ads, with means over all
/// neighbors. 0 when the queries share no ad.
PearsonResult pearson(const ClickGraph& graph, const PearsonContext& ctx, NodeId q, NodeId q2);
PearsonResult pearson(const ClickGraph& graph, NodeId q, NodeId q2);

/// All query pairs sharing at least one ad. Keeps every nonzero correlation,
/// negative ones included. `degenerate`, when given, receives the sharing
/// pairs whose correlation is undefined, as (a, b) with a < b.
SimilarityScores pearson_scores(const ClickGraph& graph,
                                std::vector<std::pair<std::uint32_t, std::uint32_t>>* degenerate = nullptr);

/// Common-ad counts for all sharing pairs, as a score matrix.
SimilarityScores common_ad_scores(const ClickGraph& graph);

/// Pearson score dump: like write_score_dump, and every degenerate sharing
/// pair is listed with score 0 and a trailing `<TAB>degenerate` column.
void write_pearson_dump(std::ostream& out, const ClickGraph& graph, const SimilarityScores& scores,
                        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& degenerate,
                        const std::vector<std::string>& header_lines = {});

}  // namespace clicksim
