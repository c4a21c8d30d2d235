#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clicksim/click_graph.hpp"

namespace clicksim {

enum class Method : std::uint8_t { Simple, Evidence, Weighted, Pearson, CommonAds };

std::string_view method_name(Method m);
/// Accepts simple|evidence|weighted|pearson|common. Throws std::invalid_argument.
Method parse_method(std::string_view name);

struct ScoreEntry {
    std::uint32_t other = 0;
    double score = 0.0;
};

/// Sparse symmetric score matrix over one node set with an implicit unit
/// diagonal. Rows are stored in both directions, sorted by column.
class SymmetricScores {
public:
    SymmetricScores() = default;
    explicit SymmetricScores(std::size_t n) : offsets_(n + 1, 0) {}

    /// Builds from upper-triangle rows: upper[a] holds entries with other > a,
    /// sorted ascending. Each value is mirrored bit-exactly into row `other`.
    static SymmetricScores from_upper(std::vector<std::vector<ScoreEntry>> upper);

    std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    /// Number of unordered pairs stored.
    std::size_t pair_count() const { return entries_.size() / 2; }

    std::span<const ScoreEntry> row(std::uint32_t a) const {
        return {entries_.data() + offsets_[a], entries_.data() + offsets_[a + 1]};
    }
    /// 1 on the diagonal, 0 for absent pairs.
    double get(std::uint32_t a, std::uint32_t b) const;

    /// Calls f(a, b, score) for every stored pair with a < b, in (a, b) order.
    template <typename F>
    void for_each_pair(F&& f) const {
        for (std::uint32_t a = 0; a < size(); ++a) {
            for (const auto& e : row(a)) {
                if (e.other > a) f(a, e.other, e.score);
            }
        }
    }

private:
    std::vector<std::uint64_t> offsets_{0};
    std::vector<ScoreEntry> entries_;
};

/// Query-query scores produced by one of the scoring methods.
struct SimilarityScores {
    SymmetricScores pairs;
    int iterations_run = 0;
    bool converged = false;
    Method method = Method::Simple;
};

/// Score of two query nodes: 1 if a == b, 0 when the pair is absent.
/// Throws std::invalid_argument if either node is an ad.
double similarity(const SimilarityScores& scores, NodeId a, NodeId b);

/// Score dump: optional `# key=value` header lines, then
/// `query_a <TAB> query_b <TAB> score` with query_a < query_b by label, rows
/// sorted lexicographically, scores with 6 decimals.
void write_score_dump(std::ostream& out, const ClickGraph& graph, const SimilarityScores& scores,
                      const std::vector<std::string>& header_lines = {});

/// Reads a dump produced by write_score_dump against the graph's query labels.
/// Unknown labels raise GraphError naming the line.
SimilarityScores read_score_dump(std::istream& in, const ClickGraph& graph, Method method);

}  // namespace clicksim
