#include "clicksim/simrank.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace clicksim {

void SimRankParams::validate() const {
    auto bad = [](const std::string& msg) { throw std::invalid_argument("SimRankParams: " + msg); };
    if (!(c1 > 0.0 && c1 <= 1.0)) bad("c1 must be in (0,1]");
    if (!(c2 > 0.0 && c2 <= 1.0)) bad("c2 must be in (0,1]");
    if (max_iterations < 1) bad("max_iterations must be >= 1");
    if (!(convergence_epsilon >= 0.0)) bad("convergence_epsilon must be >= 0");
    if (!(min_score_threshold >= 0.0)) bad("min_score_threshold must be >= 0");
    if (method != Method::Simple && method != Method::Evidence && method != Method::Weighted) {
        bad("method must be simple, evidence or weighted");
    }
    if (threads < 1) bad("threads must be >= 1");
}

PairBudgetExceeded::PairBudgetExceeded(int iteration_, std::size_t pairs_, std::size_t budget)
    : std::runtime_error("pair budget exceeded in iteration " + std::to_string(iteration_) + ": more than " +
                         std::to_string(budget) + " pairs on one side (" + std::to_string(pairs_) +
                         " when stopped)"),
      iteration(iteration_),
      pairs(pairs_) {}

TransferWeights uniform_transfer(const ClickGraph& graph) {
    TransferWeights t;
    t.query_side.reserve(graph.num_edges());
    t.ad_side.reserve(graph.num_edges());
    for (std::uint32_t q = 0; q < graph.num_queries(); ++q) {
        const auto adj = graph.query_neighbors(q);
        t.query_side.insert(t.query_side.end(), adj.size(), 1.0 / static_cast<double>(adj.size()));
    }
    for (std::uint32_t a = 0; a < graph.num_ads(); ++a) {
        const auto adj = graph.ad_neighbors(a);
        t.ad_side.insert(t.ad_side.end(), adj.size(), 1.0 / static_cast<double>(adj.size()));
    }
    return t;
}

namespace {

/// One side of the bipartite update: rows are X nodes, the inner sum runs
/// over Y nodes whose previous scores are read.
struct SideView {
    NodeKind x_kind;
    std::size_t nx = 0;
    std::size_t ny = 0;
    const ClickGraph* graph = nullptr;
    /// T(x, y) aligned with the X-side CSR.
    const std::vector<double>* x_transfer = nullptr;
    /// T(x, y) aligned with the Y-side CSR (same values, reindexed).
    std::vector<double> x_transfer_by_y;
    double decay = 1.0;

    std::span<const Neighbor> x_adj(std::uint32_t x) const {
        return x_kind == NodeKind::Query ? graph->query_neighbors(x) : graph->ad_neighbors(x);
    }
    std::span<const Neighbor> y_adj(std::uint32_t y) const {
        return x_kind == NodeKind::Query ? graph->ad_neighbors(y) : graph->query_neighbors(y);
    }
    std::uint64_t x_offset(std::uint32_t x) const {
        return x_kind == NodeKind::Query ? graph->query_edge_offset(x) : graph->ad_edge_offset(x);
    }
    std::uint64_t y_offset(std::uint32_t y) const {
        return x_kind == NodeKind::Query ? graph->ad_edge_offset(y) : graph->query_edge_offset(y);
    }
};

SideView make_side(const ClickGraph& g, NodeKind x_kind, const std::vector<double>& x_transfer,
                   double decay) {
    SideView s;
    s.x_kind = x_kind;
    s.graph = &g;
    s.nx = g.num_nodes(x_kind);
    s.ny = g.num_nodes(x_kind == NodeKind::Query ? NodeKind::Ad : NodeKind::Query);
    s.x_transfer = &x_transfer;
    s.decay = decay;
    s.x_transfer_by_y.resize(g.num_edges());
    for (std::uint32_t y = 0; y < s.ny; ++y) {
        const auto adj = s.y_adj(y);
        const auto base = s.y_offset(y);
        for (std::size_t k = 0; k < adj.size(); ++k) {
            const auto x = adj[k].index;
            const auto xadj = s.x_adj(x);
            const auto it = std::lower_bound(xadj.begin(), xadj.end(), y,
                                             [](const Neighbor& n, std::uint32_t v) { return n.index < v; });
            s.x_transfer_by_y[base + k] =
                x_transfer[s.x_offset(x) + static_cast<std::uint64_t>(it - xadj.begin())];
        }
    }
    return s;
}

/// Dense accumulator with a touched list; reset cost is proportional to use.
struct Accumulator {
    std::vector<double> value;
    std::vector<std::uint32_t> touched;
    std::vector<char> seen;

    explicit Accumulator(std::size_t n) : value(n, 0.0), seen(n, 0) {}

    void add(std::uint32_t i, double v) {
        if (!seen[i]) {
            seen[i] = 1;
            touched.push_back(i);
        }
        value[i] += v;
    }
    void clear() {
        for (auto i : touched) {
            value[i] = 0.0;
            seen[i] = 0;
        }
        touched.clear();
    }
};

struct Workspace {
    Accumulator inner;  // over Y
    Accumulator outer;  // over X
    Workspace(std::size_t ny, std::size_t nx) : inner(ny), outer(nx) {}
};

/// Upper-triangle row x of the next iterate.
void score_row(const SideView& side, const SymmetricScores& prev_y, std::uint32_t x, double threshold,
               Workspace& ws, std::vector<ScoreEntry>& out) {
    const auto adj = side.x_adj(x);
    const auto base = side.x_offset(x);
    auto& u = ws.inner;
    auto& t = ws.outer;
    for (std::size_t k = 0; k < adj.size(); ++k) {
        const double w = (*side.x_transfer)[base + k];
        const auto i = adj[k].index;
        u.add(i, w);
        for (const auto& e : prev_y.row(i)) u.add(e.other, w * e.score);
    }
    for (const auto j : u.touched) {
        const double uj = u.value[j];
        const auto yadj = side.y_adj(j);
        const auto ybase = side.y_offset(j);
        auto it = std::upper_bound(yadj.begin(), yadj.end(), x,
                                   [](std::uint32_t v, const Neighbor& n) { return v < n.index; });
        for (; it != yadj.end(); ++it) {
            const auto k = static_cast<std::uint64_t>(it - yadj.begin());
            t.add(it->index, uj * side.x_transfer_by_y[ybase + k]);
        }
    }
    std::sort(t.touched.begin(), t.touched.end());
    out.clear();
    for (const auto x2 : t.touched) {
        const double s = side.decay * t.value[x2];
        if (s > 0.0 && s >= threshold) out.push_back(ScoreEntry{x2, std::min(s, 1.0)});
    }
    u.clear();
    t.clear();
}

/// Largest |new - old| over the union of pairs in upper row x.
double row_change(const std::vector<ScoreEntry>& fresh, std::span<const ScoreEntry> old_full,
                  std::uint32_t x) {
    auto it = std::upper_bound(old_full.begin(), old_full.end(), x,
                               [](std::uint32_t v, const ScoreEntry& e) { return v < e.other; });
    double change = 0.0;
    std::size_t i = 0;
    while (i < fresh.size() || it != old_full.end()) {
        if (it == old_full.end() || (i < fresh.size() && fresh[i].other < it->other)) {
            change = std::max(change, fresh[i].score);
            ++i;
        } else if (i == fresh.size() || it->other < fresh[i].other) {
            change = std::max(change, it->score);
            ++it;
        } else {
            change = std::max(change, std::abs(fresh[i].score - it->score));
            ++i;
            ++it;
        }
    }
    return change;
}

struct SideResult {
    SymmetricScores scores;
    double change = 0.0;
    bool over_budget = false;
    std::size_t pairs = 0;
};

SideResult advance(const SideView& side, const SymmetricScores& prev_x, const SymmetricScores& prev_y,
                   const SimRankParams& params) {
    std::vector<std::vector<ScoreEntry>> upper(side.nx);
    std::atomic<std::uint32_t> next{0};
    constexpr std::uint32_t chunk = 64;
    const auto nx = static_cast<std::uint32_t>(side.nx);
    const unsigned workers = std::max(1u, std::min<unsigned>(params.threads, (nx + chunk - 1) / chunk));
    std::vector<double> change(workers, 0.0);
    std::atomic<std::size_t> stored{0};
    std::atomic<bool> over{false};

    auto work = [&](unsigned id) {
        Workspace ws(side.ny, side.nx);
        while (!over.load(std::memory_order_relaxed)) {
            const auto begin = next.fetch_add(chunk);
            if (begin >= nx) break;
            const auto end = std::min(nx, begin + chunk);
            std::size_t added = 0;
            for (auto x = begin; x < end; ++x) {
                score_row(side, prev_y, x, params.min_score_threshold, ws, upper[x]);
                upper[x].shrink_to_fit();
                added += upper[x].size();
                change[id] = std::max(change[id], row_change(upper[x], prev_x.row(x), x));
            }
            const auto total = stored.fetch_add(added) + added;
            if (params.max_pairs != 0 && total > params.max_pairs) over = true;
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
    }
    SideResult r;
    r.pairs = stored.load();
    if (over) {
        r.over_budget = true;
        return r;
    }
    r.change = *std::max_element(change.begin(), change.end());
    r.scores = SymmetricScores::from_upper(std::move(upper));
    return r;
}

}  // namespace

BipartiteScores iterate_simrank(const ClickGraph& graph, const SimRankParams& params,
                                const TransferWeights& transfer, const IterationObserver& observer) {
    params.validate();
    if (transfer.query_side.size() != graph.num_edges() || transfer.ad_side.size() != graph.num_edges()) {
        throw std::invalid_argument("iterate_simrank: transfer weights do not match the graph");
    }
    const auto query_side = make_side(graph, NodeKind::Query, transfer.query_side, params.c1);
    const auto ad_side = make_side(graph, NodeKind::Ad, transfer.ad_side, params.c2);

    BipartiteScores state;
    state.queries = SymmetricScores(graph.num_queries());
    state.ads = SymmetricScores(graph.num_ads());
    for (int k = 1; k <= params.max_iterations; ++k) {
        auto q = advance(query_side, state.queries, state.ads, params);
        if (q.over_budget) throw PairBudgetExceeded(k, q.pairs, params.max_pairs);
        auto a = advance(ad_side, state.ads, state.queries, params);
        if (a.over_budget) throw PairBudgetExceeded(k, a.pairs, params.max_pairs);
        state.queries = std::move(q.scores);
        state.ads = std::move(a.scores);
        state.iterations_run = k;
        if (observer) observer(k, state.queries, state.ads);
        if (std::max(q.change, a.change) < params.convergence_epsilon) {
            state.converged = true;
            break;
        }
    }
    return state;
}

BipartiteScores simrank_bipartite(const ClickGraph& graph, const SimRankParams& params,
                                  const IterationObserver& observer) {
    return iterate_simrank(graph, params, uniform_transfer(graph), observer);
}

SimilarityScores simrank(const ClickGraph& graph, const SimRankParams& params) {
    auto both = simrank_bipartite(graph, params);
    SimilarityScores s;
    s.pairs = std::move(both.queries);
    s.iterations_run = both.iterations_run;
    s.converged = both.converged;
    s.method = Method::Simple;
    return s;
}

}  // namespace clicksim
