#include "clicksim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace clicksim {

namespace {

void require_queries(NodeId a, NodeId b, const char* what) {
    if (a.kind != NodeKind::Query || b.kind != NodeKind::Query) {
        throw std::invalid_argument(std::string(what) + ": both nodes must be queries");
    }
}

/// Queries q2 > q sharing at least one ad with q, ascending.
std::vector<std::uint32_t> sharing_queries(const ClickGraph& graph, std::uint32_t q,
                                           std::vector<char>& mark) {
    std::vector<std::uint32_t> out;
    for (const auto& a : graph.query_neighbors(q)) {
        for (const auto& n : graph.ad_neighbors(a.index)) {
            if (n.index > q && !mark[n.index]) {
                mark[n.index] = 1;
                out.push_back(n.index);
            }
        }
    }
    for (auto x : out) mark[x] = 0;
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::size_t common_ad_count(const ClickGraph& graph, NodeId q, NodeId q2) {
    require_queries(q, q2, "common_ad_count");
    const auto a = graph.neighbors(q);
    const auto b = graph.neighbors(q2);
    std::size_t n = 0;
    for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
        if (i->index < j->index) {
            ++i;
        } else if (j->index < i->index) {
            ++j;
        } else {
            ++n, ++i, ++j;
        }
    }
    return n;
}

PearsonContext PearsonContext::build(const ClickGraph& graph) {
    PearsonContext ctx;
    ctx.mean_weight.resize(graph.num_queries(), 0.0);
    for (std::uint32_t q = 0; q < graph.num_queries(); ++q) {
        const auto adj = graph.query_neighbors(q);
        if (adj.empty()) continue;
        double sum = 0.0;
        for (const auto& n : adj) sum += n.stats.expected_click_rate;
        ctx.mean_weight[q] = sum / static_cast<double>(adj.size());
    }
    return ctx;
}

PearsonResult pearson(const ClickGraph& graph, const PearsonContext& ctx, NodeId q, NodeId q2) {
    require_queries(q, q2, "pearson");
    const auto a = graph.neighbors(q);
    const auto b = graph.neighbors(q2);
    const double ma = ctx.mean_weight.at(q.index);
    const double mb = ctx.mean_weight.at(q2.index);
    double num = 0.0, da = 0.0, db = 0.0;
    std::size_t common = 0;
    for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
        if (i->index < j->index) {
            ++i;
        } else if (j->index < i->index) {
            ++j;
        } else {
            const double x = i->stats.expected_click_rate - ma;
            const double y = j->stats.expected_click_rate - mb;
            num += x * y;
            da += x * x;
            db += y * y;
            ++common, ++i, ++j;
        }
    }
    if (common == 0) return {};
    if (!(da > 0.0) || !(db > 0.0)) return PearsonResult{0.0, true};
    return PearsonResult{std::clamp(num / (std::sqrt(da) * std::sqrt(db)), -1.0, 1.0), false};
}

PearsonResult pearson(const ClickGraph& graph, NodeId q, NodeId q2) {
    return pearson(graph, PearsonContext::build(graph), q, q2);
}

SimilarityScores pearson_scores(const ClickGraph& graph,
                                std::vector<std::pair<std::uint32_t, std::uint32_t>>* degenerate) {
    const auto ctx = PearsonContext::build(graph);
    std::vector<std::vector<ScoreEntry>> upper(graph.num_queries());
    std::vector<char> mark(graph.num_queries(), 0);
    if (degenerate) degenerate->clear();
    for (std::uint32_t q = 0; q < graph.num_queries(); ++q) {
        for (const auto q2 : sharing_queries(graph, q, mark)) {
            const auto r = pearson(graph, ctx, NodeId::query(q), NodeId::query(q2));
            if (r.degenerate) {
                if (degenerate) degenerate->emplace_back(q, q2);
            } else if (r.value != 0.0) {
                upper[q].push_back(ScoreEntry{q2, r.value});
            }
        }
    }
    SimilarityScores s;
    s.pairs = SymmetricScores::from_upper(std::move(upper));
    s.iterations_run = 0;
    s.converged = true;
    s.method = Method::Pearson;
    return s;
}

SimilarityScores common_ad_scores(const ClickGraph& graph) {
    std::vector<std::vector<ScoreEntry>> upper(graph.num_queries());
    std::vector<char> mark(graph.num_queries(), 0);
    for (std::uint32_t q = 0; q < graph.num_queries(); ++q) {
        for (const auto q2 : sharing_queries(graph, q, mark)) {
            const auto n = common_ad_count(graph, NodeId::query(q), NodeId::query(q2));
            upper[q].push_back(ScoreEntry{q2, static_cast<double>(n)});
        }
    }
    SimilarityScores s;
    s.pairs = SymmetricScores::from_upper(std::move(upper));
    s.converged = true;
    s.method = Method::CommonAds;
    return s;
}

void write_pearson_dump(std::ostream& out, const ClickGraph& graph, const SimilarityScores& scores,
                        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& degenerate,
                        const std::vector<std::string>& header_lines) {
    struct Row {
        const std::string* a;
        const std::string* b;
        double score;
        bool degenerate;
    };
    std::vector<Row> rows;
    auto add = [&](std::uint32_t a, std::uint32_t b, double s, bool d) {
        const auto* la = &graph.query_label(a);
        const auto* lb = &graph.query_label(b);
        if (*lb < *la) std::swap(la, lb);
        rows.push_back(Row{la, lb, s, d});
    };
    scores.pairs.for_each_pair([&](std::uint32_t a, std::uint32_t b, double s) { add(a, b, s, false); });
    for (const auto& [a, b] : degenerate) add(a, b, 0.0, true);
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        return std::tie(*x.a, *x.b) < std::tie(*y.a, *y.b);
    });
    out << "# method=" << method_name(scores.method) << '\n';
    for (const auto& h : header_lines) out << "# " << h << '\n';
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6f", r.score);
        out << *r.a << '\t' << *r.b << '\t' << buf;
        if (r.degenerate) out << "\tdegenerate";
        out << '\n';
    }
}

}  // namespace clicksim
