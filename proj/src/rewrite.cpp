#include "clicksim/rewrite.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace clicksim {

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// One stripping step; returns false when no rule applies.
bool strip_once(std::string& t) {
    constexpr std::size_t min_stem = 3;
    auto cut = [&](std::size_t n, std::string_view add = {}) {
        t.resize(t.size() - n);
        t += add;
        return true;
    };
    if (ends_with(t, "sses")) return cut(2);
    if (ends_with(t, "ies") && t.size() - 3 >= min_stem - 1) return cut(3, "y");
    if (ends_with(t, "ing") && t.size() - 3 >= min_stem) return cut(3);
    if (ends_with(t, "ed") && t.size() - 2 >= min_stem) return cut(2);
    if (ends_with(t, "s") && !ends_with(t, "ss") && !ends_with(t, "us") && !ends_with(t, "is") &&
        t.size() - 1 >= min_stem) {
        return cut(1);
    }
    return false;
}

std::string stem(std::string token) {
    while (strip_once(token)) {
    }
    return token;
}

}  // namespace

std::string normalize_query(std::string_view text) {
    const auto flat = normalize_label(text);
    std::string out;
    std::size_t pos = 0;
    while (pos < flat.size()) {
        auto end = flat.find(' ', pos);
        if (end == std::string::npos) end = flat.size();
        if (!out.empty()) out += ' ';
        out += stem(flat.substr(pos, end - pos));
        pos = end + 1;
    }
    return out;
}

bool BidTermList::contains(std::string_view label) const { return terms.count(normalize_label(label)) != 0; }

BidTermList BidTermList::from_terms(const std::vector<std::string>& raw) {
    BidTermList b;
    for (const auto& t : raw) {
        auto n = normalize_label(t);
        if (!n.empty()) b.terms.insert(std::move(n));
    }
    return b;
}

BidTermList parse_bid_terms(std::istream& in) {
    std::vector<std::string> raw;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        raw.push_back(line);
    }
    return BidTermList::from_terms(raw);
}

BidTermList load_bid_terms(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bid term list " + path.string());
    return parse_bid_terms(in);
}

RewriteList top_rewrites(const ClickGraph& graph, const SimilarityScores& scores, NodeId query,
                         const RewriteOptions& options, const BidTermList* bids) {
    if (query.kind != NodeKind::Query || !graph.contains(query)) {
        throw std::invalid_argument("top_rewrites: unknown query node");
    }
    RewriteList list;
    list.query = graph.query_label(query.index);

    std::vector<std::pair<std::uint32_t, double>> cand;
    if (query.index < scores.pairs.size()) {
        for (const auto& e : scores.pairs.row(query.index)) {
            if (e.score > 0.0) cand.emplace_back(e.other, e.score);
        }
    }
    const auto by_rank = [&](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return graph.query_label(x.first) < graph.query_label(y.first);
    };
    if (cand.size() > options.candidate_cap) {
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(options.candidate_cap),
                          cand.end(), by_rank);
        cand.resize(options.candidate_cap);
    } else {
        std::sort(cand.begin(), cand.end(), by_rank);
    }

    std::unordered_set<std::string> seen{normalize_query(list.query)};
    for (const auto& [q, s] : cand) {
        const auto& label = graph.query_label(q);
        if (!seen.insert(normalize_query(label)).second) continue;
        if (bids && !bids->contains(label)) continue;
        list.rewrites.emplace_back(label, s);
        if (list.rewrites.size() == options.final_cap) break;
    }
    return list;
}

std::vector<RewriteList> rewrite_all(const ClickGraph& graph, const SimilarityScores& scores,
                                     const RewriteOptions& options, const BidTermList* bids) {
    std::vector<std::uint32_t> order(graph.num_queries());
    for (std::uint32_t q = 0; q < order.size(); ++q) order[q] = q;
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return graph.query_label(a) < graph.query_label(b); });
    std::vector<RewriteList> out;
    out.reserve(order.size());
    for (const auto q : order) out.push_back(top_rewrites(graph, scores, NodeId::query(q), options, bids));
    return out;
}

double coverage(const std::vector<RewriteList>& lists, const std::set<std::string>& query_sample) {
    if (query_sample.empty()) throw std::invalid_argument("coverage: empty query sample");
    std::unordered_map<std::string, std::size_t> depth;
    for (const auto& l : lists) depth[l.query] = std::max(depth[l.query], l.depth());
    std::size_t covered = 0;
    for (const auto& q : query_sample) {
        const auto it = depth.find(q);
        if (it != depth.end() && it->second >= 1) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(query_sample.size());
}

std::map<std::size_t, double> depth_histogram(const std::vector<RewriteList>& lists, std::size_t max_depth) {
    std::map<std::size_t, std::size_t> count;
    for (const auto& l : lists) ++count[std::min(l.depth(), max_depth)];
    std::map<std::size_t, double> out;
    for (const auto& [d, c] : count) out[d] = static_cast<double>(c) / static_cast<double>(lists.size());
    return out;
}

void write_rewrites(std::ostream& out, const std::vector<RewriteList>& lists) {
    char buf[64];
    for (const auto& l : lists) {
        for (std::size_t r = 0; r < l.rewrites.size(); ++r) {
            std::snprintf(buf, sizeof buf, "%.6f", l.rewrites[r].second);
            out << l.query << '\t' << (r + 1) << '\t' << l.rewrites[r].first << '\t' << buf << '\n';
        }
    }
}

std::vector<RewriteList> read_rewrites(std::istream& in) {
    std::vector<RewriteList> out;
    std::unordered_map<std::string, std::size_t> where;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto err = [&](const std::string& m) {
            return std::runtime_error("rewrite file line " + std::to_string(line_no) + ": " + m);
        };
        std::vector<std::string_view> f;
        std::string_view rest(line);
        while (true) {
            const auto t = rest.find('\t');
            f.push_back(rest.substr(0, t));
            if (t == std::string_view::npos) break;
            rest.remove_prefix(t + 1);
        }
        if (f.size() != 4) throw err("expected query<TAB>rank<TAB>rewrite<TAB>score");
        std::size_t rank = 0;
        double score = 0.0;
        if (std::from_chars(f[1].data(), f[1].data() + f[1].size(), rank).ptr != f[1].data() + f[1].size()) {
            throw err("malformed rank");
        }
        if (std::from_chars(f[3].data(), f[3].data() + f[3].size(), score).ptr != f[3].data() + f[3].size()) {
            throw err("malformed score");
        }
        const auto query = normalize_label(f[0]);
        auto [it, fresh] = where.try_emplace(query, out.size());
        if (fresh) out.push_back(RewriteList{query, {}});
        auto& list = out[it->second];
        if (rank != list.rewrites.size() + 1) throw err("ranks of a query must run 1, 2, ...");
        list.rewrites.emplace_back(normalize_label(f[2]), score);
    }
    return out;
}

}  // namespace clicksim
