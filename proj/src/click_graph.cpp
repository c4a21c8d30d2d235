#include "clicksim/click_graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace clicksim {

std::string normalize_label(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

namespace {

void validate_stats(const EdgeStats& s, const std::string& where) {
    if (s.clicks > s.impressions) {
        throw GraphError(where + ": clicks (" + std::to_string(s.clicks) +
                         ") exceed impressions (" + std::to_string(s.impressions) +
                         "); clicks must be <= impressions");
    }
    if (!std::isfinite(s.expected_click_rate) || s.expected_click_rate < 0.0 ||
        s.expected_click_rate > 1.0) {
        throw GraphError(where + ": expected click rate must be a finite value in [0,1]");
    }
}

std::string edge_name(const std::vector<std::string>& ql, const std::vector<std::string>& al,
                      const Edge& e) {
    return "edge (" + ql[e.query] + ", " + al[e.ad] + ")";
}

}  // namespace

ClickGraph ClickGraph::from_edges(std::vector<std::string> query_labels,
                                  std::vector<std::string> ad_labels, std::vector<Edge> edges) {
    ClickGraph g;
    const auto nq = query_labels.size();
    const auto na = ad_labels.size();
    for (const auto& e : edges) {
        if (e.query >= nq || e.ad >= na) {
            throw GraphError("edge endpoint out of range");
        }
        validate_stats(e.stats, edge_name(query_labels, ad_labels, e));
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.query, a.ad) < std::tie(b.query, b.ad);
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i].query == edges[i - 1].query && edges[i].ad == edges[i - 1].ad) {
            throw GraphError("duplicate " + edge_name(query_labels, ad_labels, edges[i]));
        }
    }

    g.query_offsets_.assign(nq + 1, 0);
    g.ad_offsets_.assign(na + 1, 0);
    for (const auto& e : edges) {
        ++g.query_offsets_[e.query + 1];
        ++g.ad_offsets_[e.ad + 1];
    }
    std::partial_sum(g.query_offsets_.begin(), g.query_offsets_.end(), g.query_offsets_.begin());
    std::partial_sum(g.ad_offsets_.begin(), g.ad_offsets_.end(), g.ad_offsets_.begin());

    g.query_adj_.resize(edges.size());
    g.ad_adj_.resize(edges.size());
    std::vector<std::uint64_t> qpos(g.query_offsets_.begin(), g.query_offsets_.end() - 1);
    std::vector<std::uint64_t> apos(g.ad_offsets_.begin(), g.ad_offsets_.end() - 1);
    // edges are sorted by (query, ad), so both sides come out ascending
    for (const auto& e : edges) {
        g.query_adj_[qpos[e.query]++] = Neighbor{e.ad, e.stats};
        g.ad_adj_[apos[e.ad]++] = Neighbor{e.query, e.stats};
    }

    g.query_lookup_.reserve(nq);
    for (std::uint32_t i = 0; i < nq; ++i) {
        if (!g.query_lookup_.emplace(query_labels[i], i).second) {
            throw GraphError("duplicate query label '" + query_labels[i] + "'");
        }
    }
    g.ad_lookup_.reserve(na);
    for (std::uint32_t i = 0; i < na; ++i) {
        if (!g.ad_lookup_.emplace(ad_labels[i], i).second) {
            throw GraphError("duplicate ad label '" + ad_labels[i] + "'");
        }
    }
    g.query_labels_ = std::move(query_labels);
    g.ad_labels_ = std::move(ad_labels);
    return g;
}

std::span<const Neighbor> ClickGraph::neighbors(NodeId v) const {
    if (!contains(v)) {
        throw std::out_of_range("unknown " +
                                std::string(v.kind == NodeKind::Query ? "query" : "ad") +
                                " node " + std::to_string(v.index));
    }
    return v.kind == NodeKind::Query ? query_neighbors(v.index) : ad_neighbors(v.index);
}

std::optional<EdgeStats> ClickGraph::edge(std::uint32_t q, std::uint32_t a) const {
    if (q >= num_queries()) return std::nullopt;
    const auto adj = query_neighbors(q);
    const auto it = std::lower_bound(adj.begin(), adj.end(), a,
                                     [](const Neighbor& n, std::uint32_t x) { return n.index < x; });
    if (it == adj.end() || it->index != a) return std::nullopt;
    return it->stats;
}

double ClickGraph::weight(std::uint32_t q, std::uint32_t a) const {
    const auto s = edge(q, a);
    return s ? s->expected_click_rate : 0.0;
}

std::optional<std::uint32_t> ClickGraph::find_query(std::string_view label) const {
    const auto it = query_lookup_.find(normalize_label(label));
    if (it == query_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> ClickGraph::find_ad(std::string_view label) const {
    const auto it = ad_lookup_.find(normalize_label(label));
    if (it == ad_lookup_.end()) return std::nullopt;
    return it->second;
}

NodeId ClickGraph::query_node(std::string_view label) const {
    if (auto q = find_query(label)) return NodeId::query(*q);
    throw std::out_of_range("unknown query '" + std::string(label) + "'");
}

NodeId ClickGraph::ad_node(std::string_view label) const {
    if (auto a = find_ad(label)) return NodeId::ad(*a);
    throw std::out_of_range("unknown ad '" + std::string(label) + "'");
}

std::vector<Edge> ClickGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (std::uint32_t q = 0; q < num_queries(); ++q) {
        for (const auto& n : query_neighbors(q)) out.push_back(Edge{q, n.index, n.stats});
    }
    return out;
}

// ---------------------------------------------------------------------------
// edge-tsv

namespace {

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* what) {
    T value{};
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    std::from_chars_result r{};
    if constexpr (std::is_floating_point_v<T>) {
        // libstdc++ 11 supports floating from_chars
        r = std::from_chars(first, last, value);
    } else {
        if (!field.empty() && field.front() == '-') {
            throw GraphError("line " + std::to_string(line) + ": " + what + " must be non-negative");
        }
        r = std::from_chars(first, last, value);
    }
    if (r.ec != std::errc{} || r.ptr != last) {
        throw GraphError("line " + std::to_string(line) + ": malformed " + what + " '" +
                         std::string(field) + "'");
    }
    return value;
}

}  // namespace

ClickGraph parse_edge_tsv(std::istream& in) {
    std::vector<std::string> queries, ads;
    std::unordered_map<std::string, std::uint32_t> qidx, aidx;
    std::vector<Edge> edges;
    std::unordered_map<std::uint64_t, std::size_t> seen;  // (q,a) -> line

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty() || raw.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::string_view rest(raw);
        while (true) {
            const auto tab = rest.find('\t');
            fields.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        const auto where = "line " + std::to_string(line_no);
        if (fields.size() != 5) {
            throw GraphError(where + ": expected 5 tab-separated fields, found " +
                             std::to_string(fields.size()));
        }
        auto qlabel = normalize_label(fields[0]);
        auto alabel = normalize_label(fields[1]);
        if (qlabel.empty() || alabel.empty()) {
            throw GraphError(where + ": empty query or ad label");
        }
        EdgeStats s;
        s.impressions = parse_number<std::uint64_t>(fields[2], line_no, "impressions");
        s.clicks = parse_number<std::uint64_t>(fields[3], line_no, "clicks");
        s.expected_click_rate = parse_number<double>(fields[4], line_no, "expected_click_rate");
        validate_stats(s, where);

        auto [qit, qnew] = qidx.try_emplace(qlabel, static_cast<std::uint32_t>(queries.size()));
        if (qnew) queries.push_back(qlabel);
        auto [ait, anew] = aidx.try_emplace(alabel, static_cast<std::uint32_t>(ads.size()));
        if (anew) ads.push_back(alabel);

        const auto key = (static_cast<std::uint64_t>(qit->second) << 32) | ait->second;
        if (auto [it, fresh] = seen.try_emplace(key, line_no); !fresh) {
            throw GraphError(where + ": duplicate edge (" + qlabel + ", " + alabel +
                             "), first seen on line " + std::to_string(it->second));
        }
        edges.push_back(Edge{qit->second, ait->second, s});
    }
    return ClickGraph::from_edges(std::move(queries), std::move(ads), std::move(edges));
}

ClickGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file '" + path.string() + "'");
    return parse_edge_tsv(in);
}

void write_edge_tsv(std::ostream& out, const ClickGraph& graph) {
    // ads sorted by label within each query, so a reloaded graph writes the same bytes
    auto edges = graph.edges();
    std::stable_sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
        if (a.query != b.query) return a.query < b.query;
        return graph.ad_label(a.ad) < graph.ad_label(b.ad);
    });
    char ecr[64];
    for (const auto& e : edges) {
        std::snprintf(ecr, sizeof ecr, "%.6f", e.stats.expected_click_rate);
        out << graph.query_label(e.query) << '\t' << graph.ad_label(e.ad) << '\t'
            << e.stats.impressions << '\t' << e.stats.clicks << '\t' << ecr << '\n';
    }
}

void save_graph(const std::filesystem::path& path, const ClickGraph& graph) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GraphError("cannot write graph file '" + path.string() + "'");
    write_edge_tsv(out, graph);
}

// ---------------------------------------------------------------------------
// constructions and surgery

ClickGraph complete_bipartite(std::size_t m, std::size_t n, double weight) {
    if (m == 0 || n == 0) throw std::invalid_argument("complete_bipartite: node counts must be >= 1");
    if (!(weight > 0.0 && weight <= 1.0)) {
        throw std::invalid_argument("complete_bipartite: weight must be in (0,1]");
    }
    std::vector<std::string> ql, al;
    for (std::size_t i = 0; i < m; ++i) ql.push_back("q" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) al.push_back("a" + std::to_string(j));
    std::vector<Edge> edges;
    edges.reserve(m * n);
    // impressions/clicks chosen so clicks/impressions approximates the weight
    const EdgeStats stats{1000, static_cast<std::uint64_t>(std::llround(weight * 1000.0)), weight};
    for (std::uint32_t i = 0; i < m; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) edges.push_back(Edge{i, j, stats});
    }
    return ClickGraph::from_edges(std::move(ql), std::move(al), std::move(edges));
}

ClickGraph remove_edges(const ClickGraph& graph,
                        std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> drop(edges.begin(), edges.end());
    std::sort(drop.begin(), drop.end());
    drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
    for (const auto& [q, a] : drop) {
        if (!graph.edge(q, a)) {
            throw GraphError("remove_edges: edge (" +
                             (q < graph.num_queries() ? graph.query_label(q) : std::to_string(q)) +
                             ", " + (a < graph.num_ads() ? graph.ad_label(a) : std::to_string(a)) +
                             ") is not present");
        }
    }
    std::vector<Edge> kept;
    kept.reserve(graph.num_edges() - drop.size());
    for (const auto& e : graph.edges()) {
        if (!std::binary_search(drop.begin(), drop.end(), std::pair{e.query, e.ad})) kept.push_back(e);
    }
    return ClickGraph::from_edges(graph.query_labels(), graph.ad_labels(), std::move(kept));
}

std::vector<ClickGraph> extract_components(const ClickGraph& graph) {
    const auto nq = graph.num_queries();
    const auto na = graph.num_ads();
    constexpr std::uint32_t unset = UINT32_MAX;
    std::vector<std::uint32_t> qcomp(nq, unset), acomp(na, unset);
    std::uint32_t ncomp = 0;
    std::vector<NodeId> stack;

    auto flood = [&](NodeId start) {
        const auto c = ncomp++;
        stack.assign(1, start);
        (start.kind == NodeKind::Query ? qcomp : acomp)[start.index] = c;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            const bool is_query = v.kind == NodeKind::Query;
            auto& other = is_query ? acomp : qcomp;
            for (const auto& nb : graph.neighbors(v)) {
                if (other[nb.index] == unset) {
                    other[nb.index] = c;
                    stack.push_back(is_query ? NodeId::ad(nb.index) : NodeId::query(nb.index));
                }
            }
        }
    };
    for (std::uint32_t q = 0; q < nq; ++q) {
        if (qcomp[q] == unset) flood(NodeId::query(q));
    }
    for (std::uint32_t a = 0; a < na; ++a) {
        if (acomp[a] == unset) flood(NodeId::ad(a));
    }

    struct Parts {
        std::vector<std::string> ql, al;
        std::vector<Edge> edges;
    };
    std::vector<Parts> parts(ncomp);
    std::vector<std::uint32_t> qlocal(nq), alocal(na);
    for (std::uint32_t q = 0; q < nq; ++q) {
        auto& p = parts[qcomp[q]];
        qlocal[q] = static_cast<std::uint32_t>(p.ql.size());
        p.ql.push_back(graph.query_label(q));
    }
    for (std::uint32_t a = 0; a < na; ++a) {
        auto& p = parts[acomp[a]];
        alocal[a] = static_cast<std::uint32_t>(p.al.size());
        p.al.push_back(graph.ad_label(a));
    }
    for (const auto& e : graph.edges()) {
        parts[qcomp[e.query]].edges.push_back(Edge{qlocal[e.query], alocal[e.ad], e.stats});
    }

    std::vector<std::uint32_t> order(ncomp);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return parts[a].edges.size() > parts[b].edges.size();
    });
    std::vector<ClickGraph> out;
    out.reserve(ncomp);
    for (auto c : order) {
        auto& p = parts[c];
        out.push_back(ClickGraph::from_edges(std::move(p.ql), std::move(p.al), std::move(p.edges)));
    }
    return out;
}

}  // namespace clicksim
