#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clicksim/click_graph.hpp"
#include "clicksim/scores.hpp"

namespace clicksim {

/// Lowercase, collapse whitespace, then strip plural / -ing / -ed suffixes
/// from every token until nothing changes. Idempotent.
std::string normalize_query(std::string_view text);

struct RewriteList {
    std::string query;
    std::vector<std::pair<std::string, double>> rewrites;  // (label, score), best first

    std::size_t depth() const { return rewrites.size(); }
};

/// Queries that received bids, stored as normalized labels.
struct BidTermList {
    std::set<std::string> terms;

    bool contains(std::string_view label) const;
    static BidTermList from_terms(const std::vector<std::string>& raw);
};

/// One term per line; blank lines and '#' lines are skipped.
BidTermList parse_bid_terms(std::istream& in);
BidTermList load_bid_terms(const std::filesystem::path& path);

struct RewriteOptions {
    std::size_t candidate_cap = 100;
    std::size_t final_cap = 5;
};

/// Candidates are the query's partners with score > 0, ordered by (score desc,
/// label asc) and cut to candidate_cap. Rewrites that normalize to the query
/// itself or to an earlier candidate are dropped, then (when `bids` is given)
/// those not in the bid list, and the rest is cut to final_cap.
RewriteList top_rewrites(const ClickGraph& graph, const SimilarityScores& scores, NodeId query,
                         const RewriteOptions& options = {}, const BidTermList* bids = nullptr);

/// top_rewrites for every query, in label order.
std::vector<RewriteList> rewrite_all(const ClickGraph& graph, const SimilarityScores& scores,
                                     const RewriteOptions& options = {}, const BidTermList* bids = nullptr);

/// Fraction of `query_sample` with at least one rewrite; queries without a
/// list count as depth 0. Throws std::invalid_argument on an empty sample.
double coverage(const std::vector<RewriteList>& lists, const std::set<std::string>& query_sample);

/// Fraction of lists at each depth; depths above max_depth are counted at
/// max_depth. Only depths that occur are present.
std::map<std::size_t, double> depth_histogram(const std::vector<RewriteList>& lists, std::size_t max_depth);

/// `query <TAB> rank <TAB> rewrite <TAB> score`, rank from 1, score with 6 decimals.
void write_rewrites(std::ostream& out, const std::vector<RewriteList>& lists);
/// Reads the format above. Queries appear in first-seen order; ranks must run 1, 2, ...
std::vector<RewriteList> read_rewrites(std::istream& in);

}  // namespace clicksim
