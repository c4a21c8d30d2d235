#include "clicksim/scores.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace clicksim {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Simple: return "simple";
        case Method::Evidence: return "evidence";
        case Method::Weighted: return "weighted";
        case Method::Pearson: return "pearson";
        case Method::CommonAds: return "common";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (auto m : {Method::Simple, Method::Evidence, Method::Weighted, Method::Pearson,
                   Method::CommonAds}) {
        if (method_name(m) == name) return m;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (expected simple|evidence|weighted|pearson|common)");
}

SymmetricScores SymmetricScores::from_upper(std::vector<std::vector<ScoreEntry>> upper) {
    const auto n = upper.size();
    SymmetricScores s(n);
    std::vector<std::uint64_t> count(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        count[a] += upper[a].size();
        for (const auto& e : upper[a]) ++count[e.other];
    }
    for (std::size_t a = 0; a < n; ++a) s.offsets_[a + 1] = s.offsets_[a] + count[a];
    s.entries_.resize(s.offsets_[n]);

    // Lower part of row b comes from rows a < b, visited in increasing a, so
    // writing mirrored entries first keeps every row sorted.
    std::vector<std::uint64_t> cursor(s.offsets_.begin(), s.offsets_.end() - 1);
    for (std::uint32_t a = 0; a < n; ++a) {
        for (const auto& e : upper[a]) s.entries_[cursor[e.other]++] = ScoreEntry{a, e.score};
        // row a's own lower entries are complete once all smaller rows were scanned
        std::copy(upper[a].begin(), upper[a].end(), s.entries_.begin() + static_cast<std::ptrdiff_t>(cursor[a]));
        cursor[a] += upper[a].size();
        std::vector<ScoreEntry>().swap(upper[a]);
    }
    return s;
}

double SymmetricScores::get(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return 1.0;
    if (a >= size() || b >= size()) return 0.0;
    const auto r = row(a);
    const auto it = std::lower_bound(r.begin(), r.end(), b,
                                     [](const ScoreEntry& e, std::uint32_t x) { return e.other < x; });
    return (it != r.end() && it->other == b) ? it->score : 0.0;
}

double similarity(const SimilarityScores& scores, NodeId a, NodeId b) {
    if (a.kind != NodeKind::Query || b.kind != NodeKind::Query) {
        throw std::invalid_argument("similarity: both nodes must be queries");
    }
    return scores.pairs.get(a.index, b.index);
}

void write_score_dump(std::ostream& out, const ClickGraph& graph, const SimilarityScores& scores,
                      const std::vector<std::string>& header_lines) {
    struct Row {
        const std::string* a;
        const std::string* b;
        double score;
    };
    std::vector<Row> rows;
    rows.reserve(scores.pairs.pair_count());
    scores.pairs.for_each_pair([&](std::uint32_t a, std::uint32_t b, double s) {
        const auto* la = &graph.query_label(a);
        const auto* lb = &graph.query_label(b);
        if (*lb < *la) std::swap(la, lb);
        rows.push_back(Row{la, lb, s});
    });
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        return std::tie(*x.a, *x.b) < std::tie(*y.a, *y.b);
    });
    out << "# method=" << method_name(scores.method) << '\n';
    for (const auto& h : header_lines) out << "# " << h << '\n';
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6f", r.score);
        out << *r.a << '\t' << *r.b << '\t' << buf << '\n';
    }
}

SimilarityScores read_score_dump(std::istream& in, const ClickGraph& graph, Method method) {
    std::vector<std::vector<ScoreEntry>> upper(graph.num_queries());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto where = "score dump line " + std::to_string(line_no);
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw GraphError(where + ": expected query_a<TAB>query_b<TAB>score");
        const auto t3 = line.find('\t', t2 + 1);
        const auto qa = graph.find_query(std::string_view(line).substr(0, t1));
        const auto qb = graph.find_query(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
        if (!qa || !qb) throw GraphError(where + ": unknown query label");
        if (*qa == *qb) throw GraphError(where + ": self pair");
        const auto field = std::string_view(line).substr(t2 + 1, t3 == std::string::npos ? t3 : t3 - t2 - 1);
        double score = 0.0;
        const auto r = std::from_chars(field.data(), field.data() + field.size(), score);
        if (r.ec != std::errc{} || r.ptr != field.data() + field.size()) {
            throw GraphError(where + ": malformed score");
        }
        const auto lo = std::min(*qa, *qb);
        const auto hi = std::max(*qa, *qb);
        upper[lo].push_back(ScoreEntry{hi, score});
    }
    for (auto& row : upper) {
        std::sort(row.begin(), row.end(), [](const ScoreEntry& x, const ScoreEntry& y) { return x.other < y.other; });
        for (std::size_t i = 1; i < row.size(); ++i) {
            if (row[i].other == row[i - 1].other) throw GraphError("score dump: duplicate pair");
        }
    }
    SimilarityScores s;
    s.pairs = SymmetricScores::from_upper(std::move(upper));
    s.method = method;
    return s;
}

}  // namespace clicksim
