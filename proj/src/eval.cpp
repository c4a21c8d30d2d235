#include "clicksim/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "clicksim/baselines.hpp"
#include "clicksim/random.hpp"
#include "clicksim/weighted.hpp"

namespace clicksim {

double desirability(const ClickGraph& graph, NodeId q1, NodeId q2) {
    if (q1.kind != NodeKind::Query || q2.kind != NodeKind::Query) {
        throw std::invalid_argument("desirability: both nodes must be queries");
    }
    const auto a = graph.neighbors(q1);
    const auto b = graph.neighbors(q2);
    double sum = 0.0;
    for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
        if (i->index < j->index) {
            ++i;
        } else if (j->index < i->index) {
            ++j;
        } else {
            sum += j->stats.expected_click_rate;
            ++i, ++j;
        }
    }
    return b.empty() ? 0.0 : sum / static_cast<double>(b.size());
}

InsufficientTriples::InsufficientTriples(std::size_t found_, std::size_t wanted)
    : std::runtime_error("only " + std::to_string(found_) + " of " + std::to_string(wanted) +
                         " requested triples found: q2 and q3 must share an ad with q1 and still reach q1 "
                         "after the shared edges are removed"),
      found(found_) {}

namespace {

/// Queries other than q sharing at least one ad with q, ascending.
std::vector<std::uint32_t> sharing(const ClickGraph& graph, std::uint32_t q) {
    std::vector<std::uint32_t> out;
    for (const auto& a : graph.query_neighbors(q)) {
        for (const auto& n : graph.ad_neighbors(a.index)) {
            if (n.index != q) out.push_back(n.index);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool has_neighbor(std::span<const Neighbor> adj, std::uint32_t v) {
    const auto it = std::lower_bound(adj.begin(), adj.end(), v,
                                     [](const Neighbor& n, std::uint32_t x) { return n.index < x; });
    return it != adj.end() && it->index == v;
}

/// Whether q2 and q3 are reachable from q1 when q1 keeps only the ads in `kept`.
bool still_reachable(const ClickGraph& graph, std::uint32_t q1, const std::vector<std::uint32_t>& kept,
                     std::uint32_t q2, std::uint32_t q3) {
    std::vector<char> seen_q(graph.num_queries(), 0), seen_a(graph.num_ads(), 0);
    std::vector<std::uint32_t> queue_q, queue_a;
    seen_q[q1] = 1;
    for (auto a : kept) {
        seen_a[a] = 1;
        queue_a.push_back(a);
    }
    int found = 0;
    std::size_t hq = 0, ha = 0;
    while (ha < queue_a.size() || hq < queue_q.size()) {
        while (ha < queue_a.size()) {
            for (const auto& n : graph.ad_neighbors(queue_a[ha])) {
                if (seen_q[n.index]) continue;
                seen_q[n.index] = 1;
                if (n.index == q2 || n.index == q3) {
                    if (++found == 2) return true;
                }
                queue_q.push_back(n.index);
            }
            ++ha;
        }
        while (hq < queue_q.size()) {
            for (const auto& n : graph.query_neighbors(queue_q[hq])) {
                if (seen_a[n.index]) continue;
                seen_a[n.index] = 1;
                queue_a.push_back(n.index);
            }
            ++hq;
        }
    }
    return false;
}

}  // namespace

std::vector<DesirabilityTriple> select_triples(const ClickGraph& graph, std::size_t n, std::uint64_t seed) {
    constexpr std::size_t max_rejections = 10000;
    Rng rng(seed);
    std::vector<std::uint32_t> order(graph.num_queries());
    for (std::uint32_t q = 0; q < order.size(); ++q) order[q] = q;
    rng.shuffle(order);

    std::vector<DesirabilityTriple> out;
    for (const auto q1 : order) {
        if (out.size() == n) break;
        const auto share = sharing(graph, q1);
        if (share.size() < 2) continue;
        const std::size_t distinct_pairs = share.size() * (share.size() - 1) / 2;
        std::set<std::pair<std::uint32_t, std::uint32_t>> tried;
        for (std::size_t attempt = 0; attempt < max_rejections && tried.size() < distinct_pairs; ++attempt) {
            const auto x = rng.below(share.size());
            auto y = rng.below(share.size() - 1);
            if (y >= x) ++y;
            const auto q2 = share[x];
            const auto q3 = share[y];
            if (!tried.insert(std::minmax(q2, q3)).second) continue;

            DesirabilityTriple t{q1, q2, q3, {}};
            std::vector<std::uint32_t> kept;
            const auto e2 = graph.query_neighbors(q2);
            const auto e3 = graph.query_neighbors(q3);
            for (const auto& a : graph.query_neighbors(q1)) {
                if (has_neighbor(e2, a.index) || has_neighbor(e3, a.index)) {
                    t.removed_edges.emplace_back(q1, a.index);
                } else {
                    kept.push_back(a.index);
                }
            }
            if (kept.empty() || !still_reachable(graph, q1, kept, q2, q3)) continue;
            out.push_back(std::move(t));
            break;
        }
    }
    if (out.size() < n) throw InsufficientTriples(out.size(), n);
    return out;
}

SimilarityScores compute_scores(const ClickGraph& graph, Method method, const SimRankParams& params,
                                EvidenceKind kind) {
    switch (method) {
        case Method::Simple: return simrank(graph, params);
        case Method::Evidence: return evidence_simrank(graph, params, kind);
        case Method::Weighted: return weighted_simrank(graph, params, kind);
        case Method::Pearson: return pearson_scores(graph);
        case Method::CommonAds: return common_ad_scores(graph);
    }
    throw std::invalid_argument("compute_scores: unknown method");
}

ExperimentResult desirability_experiment(const ClickGraph& graph, const std::vector<DesirabilityTriple>& triples,
                                         Method method, const SimRankParams& params) {
    ExperimentResult r;
    r.method = method;
    for (const auto& t : triples) {
        ++r.total;
        const double d2 = desirability(graph, NodeId::query(t.q1), NodeId::query(t.q2));
        const double d3 = desirability(graph, NodeId::query(t.q1), NodeId::query(t.q3));
        if (d2 == d3) continue;
        const auto cut = remove_edges(graph, t.removed_edges);
        SymmetricScores s;
        switch (method) {
            case Method::Simple:
            case Method::Evidence: s = simrank(cut, params).pairs; break;
            case Method::Weighted: s = weighted_iterate(cut, params).queries; break;
            default: s = compute_scores(cut, method, params).pairs; break;
        }
        const double s2 = s.get(t.q1, t.q2);
        const double s3 = s.get(t.q1, t.q3);
        if (s2 == s3) continue;
        if ((d2 > d3) == (s2 > s3)) ++r.successes;
    }
    return r;
}

JudgmentSet parse_judgments(std::istream& in) {
    JudgmentSet j;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto err = [&](const std::string& m) {
            return std::runtime_error("judgment file line " + std::to_string(line_no) + ": " + m);
        };
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            throw err("expected query<TAB>rewrite<TAB>grade");
        }
        int grade = 0;
        const char* b = line.data() + t2 + 1;
        const char* e = line.data() + line.size();
        const auto res = std::from_chars(b, e, grade);
        if (res.ec != std::errc{} || res.ptr != e) throw err("malformed grade");
        if (grade < 1 || grade > 4) throw err("grade must be in 1..4");
        auto key = std::pair{normalize_label(line.substr(0, t1)), normalize_label(line.substr(t1 + 1, t2 - t1 - 1))};
        if (!j.grades.emplace(std::move(key), grade).second) throw err("duplicate judgment");
    }
    return j;
}

JudgmentSet load_judgments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open judgment file " + path.string());
    return parse_judgments(in);
}

std::vector<PrecisionRecall> precision_recall(
    const std::vector<std::pair<std::string, std::vector<RewriteList>>>& methods, const JudgmentSet& judgments,
    const std::set<int>& positive_grades) {
    std::set<std::pair<std::string, std::string>> missing;
    std::map<std::string, std::set<std::string>> pooled;
    std::set<std::string> all_queries;
    for (const auto& [name, lists] : methods) {
        for (const auto& l : lists) {
            all_queries.insert(l.query);
            for (const auto& [rw, s] : l.rewrites) {
                const auto it = judgments.grades.find({l.query, rw});
                if (it == judgments.grades.end()) {
                    missing.emplace(l.query, rw);
                } else if (positive_grades.count(it->second)) {
                    pooled[l.query].insert(rw);
                }
            }
        }
    }
    if (!missing.empty()) {
        std::string msg = std::to_string(missing.size()) + " ungraded rewrite pair(s):";
        std::size_t shown = 0;
        for (const auto& [q, rw] : missing) {
            if (++shown > 20) {
                msg += " ...";
                break;
            }
            msg += " (" + q + " -> " + rw + ")";
        }
        throw std::invalid_argument(msg);
    }

    std::vector<PrecisionRecall> out;
    for (const auto& [name, lists] : methods) {
        PrecisionRecall r;
        r.method = name;
        r.queries = lists.size();
        std::map<std::string, const RewriteList*> by_query;
        for (const auto& l : lists) by_query[l.query] = &l;

        double p_sum = 0.0, r_sum = 0.0, pat[5] = {}, interp[11] = {};
        std::size_t interp_n = 0;
        for (const auto& l : lists) {
            if (l.depth() == 0) continue;
            ++r.queries_with_rewrites;
            std::vector<char> rel;
            for (const auto& [rw, s] : l.rewrites) {
                rel.push_back(positive_grades.count(judgments.grades.at({l.query, rw})) ? 1 : 0);
            }
            const auto hits = static_cast<double>(std::count(rel.begin(), rel.end(), 1));
            p_sum += hits / static_cast<double>(l.depth());
            for (std::size_t x = 1; x <= 5; ++x) {
                const auto top = std::min(x, l.depth());
                pat[x - 1] += static_cast<double>(std::count(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(top), 1)) /
                              static_cast<double>(top);
            }
            const auto pit = pooled.find(l.query);
            if (pit == pooled.end() || pit->second.empty()) continue;
            ++interp_n;
            const auto total = static_cast<double>(pit->second.size());
            std::vector<std::pair<double, double>> curve;  // (recall, precision) per rank
            double seen = 0.0;
            for (std::size_t k = 0; k < rel.size(); ++k) {
                seen += rel[k];
                curve.emplace_back(seen / total, seen / static_cast<double>(k + 1));
            }
            for (int level = 0; level <= 10; ++level) {
                const double rl = level / 10.0;
                double best = 0.0;
                for (const auto& [rc, pr] : curve) {
                    if (rc >= rl - 1e-12) best = std::max(best, pr);
                }
                interp[level] += best;
            }
        }
        for (const auto& [q, rel_set] : pooled) {
            if (rel_set.empty()) continue;
            ++r.queries_with_relevant;
            const auto it = by_query.find(q);
            if (it == by_query.end()) continue;
            std::size_t hits = 0;
            for (const auto& [rw, s] : it->second->rewrites) hits += rel_set.count(rw);
            r_sum += static_cast<double>(hits) / static_cast<double>(rel_set.size());
        }
        if (r.queries_with_rewrites > 0) {
            const auto n = static_cast<double>(r.queries_with_rewrites);
            r.precision = p_sum / n;
            for (int x = 0; x < 5; ++x) r.precision_at[x] = pat[x] / n;
        }
        if (r.queries_with_relevant > 0) r.recall = r_sum / static_cast<double>(r.queries_with_relevant);
        if (interp_n > 0) {
            for (int level = 0; level <= 10; ++level) r.interpolated[level] = interp[level] / static_cast<double>(interp_n);
        }
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

void write_report(std::ostream& out, const PrecisionRecall& r) {
    out << "method=" << r.method << '\n'
        << "queries=" << r.queries << '\n'
        << "queries_with_rewrites=" << r.queries_with_rewrites << '\n'
        << "queries_with_relevant=" << r.queries_with_relevant << '\n'
        << "precision=" << fixed6(r.precision) << '\n'
        << "recall=" << fixed6(r.recall) << '\n';
    for (int x = 0; x < 5; ++x) out << "p_at_" << (x + 1) << '=' << fixed6(r.precision_at[x]) << '\n';
    for (int level = 0; level <= 10; ++level) {
        out << "interpolated_precision_" << fixed6(level / 10.0).substr(0, 3) << '=' << fixed6(r.interpolated[level])
            << '\n';
    }
}

void write_report(std::ostream& out, const ExperimentResult& r, std::uint64_t seed) {
    out << "method=" << method_name(r.method) << '\n'
        << "accuracy=" << fixed6(r.accuracy()) << '\n'
        << "successes=" << r.successes << '\n'
        << "n=" << r.total << '\n'
        << "seed=" << seed << '\n';
}

}  // namespace clicksim
