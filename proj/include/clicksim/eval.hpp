#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clicksim/click_graph.hpp"
#include "clicksim/evidence.hpp"
#include "clicksim/rewrite.hpp"
#include "clicksim/scores.hpp"
#include "clicksim/simrank.hpp"

namespace clicksim {

/// des(q1, q2) = sum over common ads i of w(q2, i) / |E(q2)|. Not symmetric.
double desirability(const ClickGraph& graph, NodeId q1, NodeId q2);

struct DesirabilityTriple {
    std::uint32_t q1 = 0, q2 = 0, q3 = 0;
    /// Every (q1, a) with a in E(q2) ∪ E(q3).
    std::vector<std::pair<std::uint32_t, std::uint32_t>> removed_edges;
};

class InsufficientTriples : public std::runtime_error {
public:
    InsufficientTriples(std::size_t found, std::size_t wanted);
    std::size_t found;
};

/// Picks n distinct q1 at random; for each, two distinct queries sharing an ad
/// with q1, redrawn (up to 10000 times per q1) until both still reach q1 once
/// the shared edges are removed.
std::vector<DesirabilityTriple> select_triples(const ClickGraph& graph, std::size_t n, std::uint64_t seed);

/// Similarity scores of `method` on `graph`. Simple, evidence and weighted use
/// `params`; pearson and common ignore it.
SimilarityScores compute_scores(const ClickGraph& graph, Method method, const SimRankParams& params,
                                EvidenceKind kind = EvidenceKind::Geometric);

struct ExperimentResult {
    Method method = Method::Simple;
    std::size_t successes = 0;
    std::size_t total = 0;
    double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(total); }
};

/// For each triple, compares the strict order of des(q1,q2) vs des(q1,q3) on
/// the original graph with sim(q1,q2) vs sim(q1,q3) on the edge-removed graph.
/// Ties count as failures. After removal q1 shares no ad with q2 or q3, so the
/// evidence factor is 0 on both sides; evidence and weighted SimRank are
/// therefore compared on their iterates before the evidence multiplier.
ExperimentResult desirability_experiment(const ClickGraph& graph, const std::vector<DesirabilityTriple>& triples,
                                         Method method, const SimRankParams& params);

/// Editorial grades 1 (best) .. 4 keyed by (query, rewrite) labels.
struct JudgmentSet {
    std::map<std::pair<std::string, std::string>, int> grades;
};

/// `query <TAB> rewrite <TAB> grade` lines; labels are normalized. Errors name the line.
JudgmentSet parse_judgments(std::istream& in);
JudgmentSet load_judgments(const std::filesystem::path& path);

struct PrecisionRecall {
    std::string method;
    double precision = 0.0;       // macro average over queries with >= 1 rewrite
    double recall = 0.0;          // macro average over queries with >= 1 pooled relevant rewrite
    double precision_at[5] = {};  // P@1..P@5, over queries with >= 1 rewrite
    double interpolated[11] = {}; // precision at recall 0.0, 0.1, ..., 1.0
    std::size_t queries = 0;
    std::size_t queries_with_rewrites = 0;
    std::size_t queries_with_relevant = 0;
};

/// One report per method. Recall pools the relevant rewrites of a query over
/// every method given. Throws std::invalid_argument listing ungraded pairs.
std::vector<PrecisionRecall> precision_recall(
    const std::vector<std::pair<std::string, std::vector<RewriteList>>>& methods, const JudgmentSet& judgments,
    const std::set<int>& positive_grades);

/// `key=value` lines.
void write_report(std::ostream& out, const PrecisionRecall& r);
void write_report(std::ostream& out, const ExperimentResult& r, std::uint64_t seed);

}  // namespace clicksim
