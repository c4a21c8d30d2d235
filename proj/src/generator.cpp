#include "clicksim/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "clicksim/random.hpp"

namespace clicksim {
namespace {

std::uint64_t edge_key(std::uint32_t q, std::uint32_t a) {
    return (static_cast<std::uint64_t>(q) << 32) | a;
}

/// Inverse-CDF sampler for P(k) ~ k^-gamma on [kmin, kmax].
class PowerLawSampler {
public:
    PowerLawSampler(double gamma, std::size_t kmin, std::size_t kmax) : kmin_(kmin) {
        cdf_.reserve(kmax - kmin + 1);
        double total = 0.0;
        for (std::size_t k = kmin; k <= kmax; ++k) {
            total += std::pow(static_cast<double>(k), -gamma);
            cdf_.push_back(total);
        }
        for (auto& c : cdf_) c /= total;
    }

    std::size_t operator()(Rng& rng) const {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto off = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
        return kmin_ + off;
    }

private:
    std::size_t kmin_;
    std::vector<double> cdf_;
};

/// Draws n degrees and rescales them to sum exactly to `total` by adding or
/// removing stubs chosen proportionally to degree, which preserves the tail slope.
/// Degrees stay >= 1 whenever total >= n.
std::vector<std::size_t> degree_sequence(std::size_t n, std::size_t total, double gamma,
                                         std::size_t kmax, Rng& rng) {
    std::vector<std::size_t> deg(n);
    if (n == 0) return deg;
    kmax = std::max<std::size_t>(kmax, 1);
    const PowerLawSampler sample(gamma, 1, kmax);
    std::size_t sum = 0;
    for (auto& d : deg) {
        d = sample(rng);
        sum += d;
    }
    const std::size_t floor_degree = total >= n ? 1 : 0;

    std::vector<std::uint32_t> owners;
    auto rebuild_owners = [&] {
        owners.clear();
        for (std::size_t i = 0; i < n; ++i) {
            owners.insert(owners.end(), deg[i], static_cast<std::uint32_t>(i));
        }
    };

    while (sum > total) {
        rebuild_owners();
        rng.shuffle(owners);
        for (auto i : owners) {
            if (sum == total) break;
            if (deg[i] <= floor_degree) continue;
            --deg[i];
            --sum;
        }
    }
    while (sum < total) {
        rebuild_owners();
        const auto need = total - sum;
        bool progressed = false;
        for (std::size_t t = 0; t < need; ++t) {
            const auto i = owners[rng.below(owners.size())];
            if (deg[i] >= kmax) continue;
            ++deg[i];
            ++sum;
            progressed = true;
        }
        if (!progressed) {
            for (std::size_t i = 0; i < n && sum < total; ++i) {
                const auto add = std::min(kmax - deg[i], total - sum);
                deg[i] += add;
                sum += add;
            }
        }
    }
    return deg;
}

EdgeStats random_stats(Rng& rng) {
    const auto impressions =
        static_cast<std::uint64_t>(std::floor(std::exp(rng.uniform(std::log(10.0), std::log(2000.0)))));
    const double p = rng.uniform(0.02, 0.32);
    const auto clicks = 1 + rng.binomial(impressions - 1, p);
    return EdgeStats{impressions, clicks,
                     static_cast<double>(clicks) / static_cast<double>(impressions)};
}

std::vector<std::string> make_labels(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

}  // namespace

ClickGraph generate_synthetic(const SyntheticSpec& spec) {
    const auto nq = spec.num_queries;
    const auto na = spec.num_ads;
    const auto ne = spec.num_edges;
    if (nq == 0 || na == 0) throw std::invalid_argument("generate_synthetic: node counts must be >= 1");
    if (nq > UINT32_MAX || na > UINT32_MAX) throw std::invalid_argument("generate_synthetic: too many nodes");
    if (ne > nq * na) {
        throw std::invalid_argument("generate_synthetic: infeasible edge count " + std::to_string(ne) +
                                    " > " + std::to_string(nq) + " * " + std::to_string(na));
    }
    if (!(spec.powerlaw_exponent > 1.0)) {
        throw std::invalid_argument("generate_synthetic: power-law exponent must be > 1");
    }

    Rng rng(spec.seed);
    auto ql = make_labels("query ", nq);
    auto al = make_labels("ad", na);
    std::vector<Edge> edges;
    edges.reserve(ne);

    if (ne == nq * na) {
        for (std::uint32_t q = 0; q < nq; ++q) {
            for (std::uint32_t a = 0; a < na; ++a) edges.push_back(Edge{q, a, random_stats(rng)});
        }
        return ClickGraph::from_edges(std::move(ql), std::move(al), std::move(edges));
    }

    const auto qcap = spec.max_degree ? std::min(spec.max_degree, na) : na;
    const auto acap = spec.max_degree ? std::min(spec.max_degree, nq) : nq;
    if (qcap * nq < ne || acap * na < ne) {
        throw std::invalid_argument("generate_synthetic: degree cap too small for edge count");
    }
    const auto qdeg = degree_sequence(nq, ne, spec.powerlaw_exponent, qcap, rng);
    const auto adeg = degree_sequence(na, ne, spec.powerlaw_exponent, acap, rng);

    std::vector<std::uint32_t> qstubs, astubs;
    qstubs.reserve(ne);
    astubs.reserve(ne);
    for (std::uint32_t q = 0; q < nq; ++q) qstubs.insert(qstubs.end(), qdeg[q], q);
    for (std::uint32_t a = 0; a < na; ++a) astubs.insert(astubs.end(), adeg[a], a);
    rng.shuffle(astubs);

    std::unordered_set<std::uint64_t> present;
    present.reserve(ne * 2);
    std::vector<std::size_t> clashes;
    for (std::size_t i = 0; i < ne; ++i) {
        if (!present.insert(edge_key(qstubs[i], astubs[i])).second) clashes.push_back(i);
    }
    // Resolve parallel edges by swapping the ad stub with a random other slot.
    std::vector<std::size_t> unresolved;
    for (auto i : clashes) {
        bool fixed = false;
        for (int attempt = 0; attempt < 64 && !fixed; ++attempt) {
            const auto j = static_cast<std::size_t>(rng.below(ne));
            if (j == i || astubs[j] == astubs[i] || qstubs[j] == qstubs[i]) continue;
            const auto kj_old = edge_key(qstubs[j], astubs[j]);
            const auto ki_new = edge_key(qstubs[i], astubs[j]);
            const auto kj_new = edge_key(qstubs[j], astubs[i]);
            if (present.count(ki_new) || present.count(kj_new)) continue;
            // slot j may itself be an unresolved clash whose key belongs to another slot
            if (std::binary_search(clashes.begin(), clashes.end(), j)) continue;
            present.erase(kj_old);
            present.insert(ki_new);
            present.insert(kj_new);
            std::swap(astubs[i], astubs[j]);
            fixed = true;
        }
        if (!fixed) unresolved.push_back(i);
    }

    std::vector<bool> drop(ne, false);
    for (auto i : unresolved) drop[i] = true;
    for (std::size_t i = 0; i < ne; ++i) {
        if (!drop[i]) edges.push_back(Edge{qstubs[i], astubs[i], EdgeStats{}});
    }
    // Top up with degree-proportional random pairs.
    std::size_t attempts = 0;
    while (edges.size() < ne && attempts < 64 * (ne - edges.size()) + 1024) {
        ++attempts;
        const auto q = qstubs[rng.below(ne)];
        const auto a = astubs[rng.below(ne)];
        if (present.insert(edge_key(q, a)).second) edges.push_back(Edge{q, a, EdgeStats{}});
    }
    if (edges.size() < ne) {
        std::vector<std::uint64_t> absent;
        for (std::uint32_t q = 0; q < nq; ++q) {
            for (std::uint32_t a = 0; a < na; ++a) {
                if (!present.count(edge_key(q, a))) absent.push_back(edge_key(q, a));
            }
        }
        rng.shuffle(absent);
        for (std::size_t i = 0; edges.size() < ne; ++i) {
            edges.push_back(Edge{static_cast<std::uint32_t>(absent[i] >> 32),
                                 static_cast<std::uint32_t>(absent[i] & 0xffffffffu), EdgeStats{}});
        }
    }

    std::sort(edges.begin(), edges.end(),
              [](const Edge& x, const Edge& y) { return edge_key(x.query, x.ad) < edge_key(y.query, y.ad); });
    for (auto& e : edges) e.stats = random_stats(rng);
    return ClickGraph::from_edges(std::move(ql), std::move(al), std::move(edges));
}

ClickGraph generate_synthetic(std::size_t num_queries, std::size_t num_ads, std::size_t num_edges,
                              double powerlaw_exponent, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.num_queries = num_queries;
    spec.num_ads = num_ads;
    spec.num_edges = num_edges;
    spec.powerlaw_exponent = powerlaw_exponent;
    spec.seed = seed;
    return generate_synthetic(spec);
}

ClickGraph generate_planted_skew(const PlantedSkewSpec& spec) {
    if (spec.num_queries == 0 || spec.num_ads == 0 || spec.num_topics == 0) {
        throw std::invalid_argument("generate_planted_skew: counts must be >= 1");
    }
    if (spec.num_topics > spec.num_ads) {
        throw std::invalid_argument("generate_planted_skew: more topics than ads");
    }
    if (spec.min_degree == 0 || spec.min_degree > spec.max_degree || spec.max_degree > spec.num_ads) {
        throw std::invalid_argument("generate_planted_skew: invalid degree range");
    }
    Rng rng(spec.seed);
    const auto nq = spec.num_queries;
    const auto na = spec.num_ads;
    const auto nt = spec.num_topics;

    std::vector<std::vector<std::uint32_t>> topic_ads(nt);
    for (std::uint32_t a = 0; a < na; ++a) topic_ads[a % nt].push_back(a);
    const PowerLawSampler sample(spec.powerlaw_exponent, spec.min_degree, spec.max_degree);

    std::vector<Edge> edges;
    std::vector<std::uint32_t> chosen;
    for (std::uint32_t q = 0; q < nq; ++q) {
        const auto topic = q % nt;
        const auto d = sample(rng);
        chosen.clear();
        while (chosen.size() < d) {
            std::uint32_t a;
            if (rng.uniform() < spec.on_topic) {
                const auto& pool = topic_ads[topic];
                a = pool[rng.below(pool.size())];
            } else {
                a = static_cast<std::uint32_t>(rng.below(na));
            }
            if (std::find(chosen.begin(), chosen.end(), a) == chosen.end()) chosen.push_back(a);
        }
        const auto strong =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.strong_fraction * d)));
        rng.shuffle(chosen);
        for (std::size_t k = 0; k < chosen.size(); ++k) {
            const double ecr = k < strong ? rng.uniform(0.3, 0.6) : rng.uniform(0.01, 0.06);
            const std::uint64_t impressions = 1000;
            const auto clicks = static_cast<std::uint64_t>(std::llround(ecr * impressions));
            edges.push_back(Edge{q, chosen[k], EdgeStats{impressions, clicks, ecr}});
        }
    }
    return ClickGraph::from_edges(make_labels("query ", nq), make_labels("ad", na), std::move(edges));
}

}  // namespace clicksim
