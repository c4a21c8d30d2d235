#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace clicksim {

enum class NodeKind : std::uint8_t { Query, Ad };

/// A node of the click graph, addressed by kind and a dense per-kind index.
struct NodeId {
    NodeKind kind = NodeKind::Query;
    std::uint32_t index = 0;

    static constexpr NodeId query(std::uint32_t i) { return {NodeKind::Query, i}; }
    static constexpr NodeId ad(std::uint32_t i) { return {NodeKind::Ad, i}; }

    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Per-edge statistics. Only expected_click_rate is used as the edge weight.
struct EdgeStats {
    std::uint64_t impressions = 0;
    std::uint64_t clicks = 0;
    double expected_click_rate = 0.0;

    friend bool operator==(const EdgeStats&, const EdgeStats&) = default;
};

/// Adjacency entry. The neighbor is always of the opposite kind.
struct Neighbor {
    std::uint32_t index = 0;
    EdgeStats stats;
};

struct Edge {
    std::uint32_t query = 0;
    std::uint32_t ad = 0;
    EdgeStats stats;
};

/// Raised for malformed input files and violated graph invariants.
class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lowercases and collapses runs of whitespace into single spaces; trims both ends.
std::string normalize_label(std::string_view text);

/// Immutable weighted bipartite click graph stored as two CSR adjacency structures
/// (query -> ads and ad -> queries), each list sorted by neighbor index.
class ClickGraph {
public:
    ClickGraph() = default;

    /// Builds a graph from labels and an edge list. Throws GraphError on
    /// duplicate edges, out-of-range endpoints, clicks > impressions or a
    /// non-finite / negative / >1 expected click rate.
    static ClickGraph from_edges(std::vector<std::string> query_labels,
                                 std::vector<std::string> ad_labels,
                                 std::vector<Edge> edges);

    std::size_t num_queries() const { return query_labels_.size(); }
    std::size_t num_ads() const { return ad_labels_.size(); }
    std::size_t num_edges() const { return query_adj_.size(); }
    std::size_t num_nodes(NodeKind kind) const {
        return kind == NodeKind::Query ? num_queries() : num_ads();
    }
    bool empty() const { return num_queries() == 0 && num_ads() == 0; }

    bool contains(NodeId v) const { return v.index < num_nodes(v.kind); }

    /// E(v), ascending by neighbor index. Throws std::out_of_range for unknown nodes.
    std::span<const Neighbor> neighbors(NodeId v) const;
    std::span<const Neighbor> query_neighbors(std::uint32_t q) const {
        return {query_adj_.data() + query_offsets_[q], query_adj_.data() + query_offsets_[q + 1]};
    }
    std::span<const Neighbor> ad_neighbors(std::uint32_t a) const {
        return {ad_adj_.data() + ad_offsets_[a], ad_adj_.data() + ad_offsets_[a + 1]};
    }

    /// Position of E(q) / E(a) within the CSR edge arrays; per-edge side data
    /// (e.g. transfer weights) is indexed by these positions.
    std::uint64_t query_edge_offset(std::uint32_t q) const { return query_offsets_[q]; }
    std::uint64_t ad_edge_offset(std::uint32_t a) const { return ad_offsets_[a]; }

    /// N(v)
    std::size_t degree(NodeId v) const { return neighbors(v).size(); }

    /// Edge statistics for (q, a) if the edge exists.
    std::optional<EdgeStats> edge(std::uint32_t q, std::uint32_t a) const;
    /// w(q, a): the expected click rate of the edge, 0 when absent.
    double weight(std::uint32_t q, std::uint32_t a) const;

    const std::string& query_label(std::uint32_t q) const { return query_labels_.at(q); }
    const std::string& ad_label(std::uint32_t a) const { return ad_labels_.at(a); }
    const std::string& label(NodeId v) const {
        return v.kind == NodeKind::Query ? query_label(v.index) : ad_label(v.index);
    }
    const std::vector<std::string>& query_labels() const { return query_labels_; }
    const std::vector<std::string>& ad_labels() const { return ad_labels_; }

    /// Lookup by label; the argument is normalized first.
    std::optional<std::uint32_t> find_query(std::string_view label) const;
    std::optional<std::uint32_t> find_ad(std::string_view label) const;
    /// As find_query/find_ad but throws std::out_of_range naming the label.
    NodeId query_node(std::string_view label) const;
    NodeId ad_node(std::string_view label) const;

    /// All edges ordered by (query, ad).
    std::vector<Edge> edges() const;

private:
    std::vector<std::string> query_labels_;
    std::vector<std::string> ad_labels_;
    std::vector<std::uint64_t> query_offsets_{0};
    std::vector<Neighbor> query_adj_;
    std::vector<std::uint64_t> ad_offsets_{0};
    std::vector<Neighbor> ad_adj_;
    std::unordered_map<std::string, std::uint32_t> query_lookup_;
    std::unordered_map<std::string, std::uint32_t> ad_lookup_;
};

/// Parses the edge-tsv format:
/// `query_text <TAB> ad_id <TAB> impressions <TAB> clicks <TAB> expected_click_rate`.
/// Blank lines and lines starting with '#' are skipped. Errors name the line number.
ClickGraph parse_edge_tsv(std::istream& in);
ClickGraph load_graph(const std::filesystem::path& path);

/// Writes the edge-tsv format: queries in index order, each query's ads by label,
/// ecr with 6 decimals.
void write_edge_tsv(std::ostream& out, const ClickGraph& graph);
void save_graph(const std::filesystem::path& path, const ClickGraph& graph);

/// K_{m,n}: m queries "q0".."q{m-1}" fully connected to n ads "a0".."a{n-1}".
ClickGraph complete_bipartite(std::size_t m, std::size_t n, double weight);

/// Copy of `graph` without the listed (query, ad) edges. Throws GraphError if
/// any listed edge is absent. Node sets and labels are unchanged.
ClickGraph remove_edges(const ClickGraph& graph,
                        std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

/// Connected components as independent graphs, ordered by descending edge
/// count (ties by smallest original query index, then ad index).
std::vector<ClickGraph> extract_components(const ClickGraph& graph);

}  // namespace clicksim
