#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "clicksim/click_graph.hpp"
#include "clicksim/scores.hpp"

namespace clicksim {

/// Decay factors and iteration controls shared by all SimRank variants.
///
/// In the random-surfer reading, c1 (query side) and c2 (ad side) are the
/// probabilities of leaving the current node; a surfer stays put with
/// probability 1 - c. They enter the iteration only as the leading factors
/// of the query-side and ad-side updates.
struct SimRankParams {
    double c1 = 0.8;
    double c2 = 0.8;
    int max_iterations = 10;
    /// Stop once the largest absolute change of any score drops below this.
    double convergence_epsilon = 1e-4;
    /// Scores below this are dropped after every iteration.
    double min_score_threshold = 1e-4;
    Method method = Method::Simple;
    /// Worker threads for row scoring. Results do not depend on this value.
    unsigned threads = 1;
    /// Abort with PairBudgetExceeded once one side stores more pairs than
    /// this. 0 means no limit.
    std::size_t max_pairs = 0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

class PairBudgetExceeded : public std::runtime_error {
public:
    PairBudgetExceeded(int iteration, std::size_t pairs, std::size_t budget);
    int iteration;
    std::size_t pairs;
};

/// Per-edge transfer coefficients of the iteration. query_side[e] belongs to
/// the e-th entry of the query adjacency (q -> i) and ad_side[e] to the e-th
/// entry of the ad adjacency (a -> q), both in ClickGraph CSR order.
/// Plain SimRank uses 1/N(v); weighted SimRank uses spread * normalized weight.
struct TransferWeights {
    std::vector<double> query_side;
    std::vector<double> ad_side;
};

TransferWeights uniform_transfer(const ClickGraph& graph);

/// Both score sides of one run. Ad scores are the iteration's internal state.
struct BipartiteScores {
    SymmetricScores queries;
    SymmetricScores ads;
    int iterations_run = 0;
    bool converged = false;
};

/// Called after each iteration with k >= 1 and the fresh iterates.
using IterationObserver =
    std::function<void(int k, const SymmetricScores& queries, const SymmetricScores& ads)>;

/// Jacobi iteration of
///   s(q,q') = c1 * sum_{i in E(q)} sum_{j in E(q')} T(q,i) T(q',j) s(i,j)
///   s(a,a') = c2 * sum_{i in E(a)} sum_{j in E(a')} T(a,i) T(a',j) s(i,j)
/// from s0 = identity. Only pairs reachable through a shared neighbor of a
/// stored pair (or of a node with itself) are ever scored. Each row is
/// computed by one worker in a fixed order, so the output is bit-identical
/// for any thread count.
BipartiteScores iterate_simrank(const ClickGraph& graph, const SimRankParams& params,
                                const TransferWeights& transfer,
                                const IterationObserver& observer = {});

/// Plain bipartite SimRank, query side.
SimilarityScores simrank(const ClickGraph& graph, const SimRankParams& params);
/// Plain bipartite SimRank, both sides.
BipartiteScores simrank_bipartite(const ClickGraph& graph, const SimRankParams& params,
                                  const IterationObserver& observer = {});

}  // namespace clicksim
