#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "clicksim/baselines.hpp"
#include "clicksim/click_graph.hpp"
#include "clicksim/eval.hpp"
#include "clicksim/evidence.hpp"
#include "clicksim/generator.hpp"
#include "clicksim/oracles.hpp"
#include "clicksim/rewrite.hpp"
#include "clicksim/simrank.hpp"
#include "clicksim/weighted.hpp"

namespace clicksim::cli {

namespace {

struct ScoringFlags {
    std::string method = "simple";
    std::string evidence = "geometric";
    SimRankParams params;
};

void add_scoring_flags(CLI::App* cmd, ScoringFlags& f) {
    cmd->add_option("--method", f.method, "simple|evidence|weighted|pearson|common")->capture_default_str();
    cmd->add_option("--c1", f.params.c1, "query-side decay in (0,1]")->capture_default_str();
    cmd->add_option("--c2", f.params.c2, "ad-side decay in (0,1]")->capture_default_str();
    cmd->add_option("--iterations", f.params.max_iterations, "maximum iterations")->capture_default_str();
    cmd->add_option("--epsilon", f.params.convergence_epsilon, "convergence threshold on the max score change")
        ->capture_default_str();
    cmd->add_option("--threshold", f.params.min_score_threshold, "drop scores below this")->capture_default_str();
    cmd->add_option("--max-pairs", f.params.max_pairs, "abort when one side stores more pairs (0: no limit)")
        ->capture_default_str();
    cmd->add_option("--evidence", f.evidence, "geometric|exponential")->capture_default_str();
}

/// Validates flags into a method and parameters before any work starts.
std::pair<Method, EvidenceKind> resolve(ScoringFlags& f, unsigned threads) {
    const auto method = parse_method(f.method);
    const auto kind = parse_evidence_kind(f.evidence);
    f.params.threads = threads;
    f.params.method = (method == Method::Pearson || method == Method::CommonAds) ? Method::Simple : method;
    f.params.validate();
    return {method, kind};
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open output file " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }
    bool is_file() const { return file_ != nullptr; }
    void close() {
        if (file_) {
            file_->close();
            if (!*file_) throw std::runtime_error("failed writing output file");
        }
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

using Clock = std::chrono::steady_clock;

void report_time(std::ostream& err, Clock::time_point start) {
    const std::chrono::duration<double> dt = Clock::now() - start;
    err << "wall_time_s=" << fixed(dt.count(), 3) << '\n';
}

std::set<int> parse_grades(const std::string& text) {
    std::set<int> g;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok != "1" && tok != "2" && tok != "3" && tok != "4") {
            throw CLI::ValidationError("--positives", "grades must be a comma list from 1..4");
        }
        g.insert(tok[0] - '0');
    }
    if (g.empty()) throw CLI::ValidationError("--positives", "at least one grade required");
    return g;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Query similarity over bipartite click graphs", "clicksim"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();

    // ingest-check
    auto* ingest = app.add_subcommand("ingest-check", "load an edge-tsv file and print its shape");
    std::string ingest_graph;
    ingest->add_option("--graph", ingest_graph, "edge-tsv file")->required();

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic click graph");
    SyntheticSpec syn;
    PlantedSkewSpec skew;
    bool planted = false;
    std::string gen_out;
    gen->add_option("--queries", syn.num_queries)->capture_default_str();
    gen->add_option("--ads", syn.num_ads)->capture_default_str();
    gen->add_option("--edges", syn.num_edges)->capture_default_str();
    gen->add_option("--exponent", syn.powerlaw_exponent)->capture_default_str();
    gen->add_option("--seed", syn.seed)->capture_default_str();
    gen->add_option("--max-degree", syn.max_degree, "cap on any node degree (0: none)")->capture_default_str();
    gen->add_flag("--planted-skew", planted, "topic graph with strong and weak edges instead");
    gen->add_option("--topics", skew.num_topics, "topics for --planted-skew")->capture_default_str();
    gen->add_option("--out", gen_out, "output file (default: stdout)");

    // compute
    auto* compute = app.add_subcommand("compute", "compute a query-query score dump");
    ScoringFlags compute_flags;
    std::string compute_graph, compute_out;
    compute->add_option("--graph", compute_graph, "edge-tsv file")->required();
    compute->add_option("--out", compute_out, "score dump (default: stdout)");
    add_scoring_flags(compute, compute_flags);

    // rewrite
    auto* rw = app.add_subcommand("rewrite", "produce ranked query rewrites");
    ScoringFlags rw_flags;
    std::string rw_graph, rw_scores, rw_bids, rw_out;
    RewriteOptions rw_opts;
    rw->add_option("--graph", rw_graph, "edge-tsv file")->required();
    rw->add_option("--scores", rw_scores, "score dump to use instead of computing scores");
    rw->add_option("--bids", rw_bids, "bid term list; rewrites not on it are dropped");
    rw->add_option("--candidates", rw_opts.candidate_cap)->capture_default_str();
    rw->add_option("--max-rewrites", rw_opts.final_cap)->capture_default_str();
    rw->add_option("--out", rw_out, "rewrite file (default: stdout)");
    add_scoring_flags(rw, rw_flags);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "evaluation harnesses");
    ev->require_subcommand(1);
    auto* des = ev->add_subcommand("desirability", "edge-removal prediction experiment");
    ScoringFlags des_flags;
    std::string des_graph;
    std::size_t des_n = 50;
    std::uint64_t des_seed = 1;
    des->add_option("--graph", des_graph, "edge-tsv file")->required();
    des->add_option("--n", des_n, "number of triples")->capture_default_str();
    des->add_option("--seed", des_seed)->capture_default_str();
    add_scoring_flags(des, des_flags);

    auto* judge = ev->add_subcommand("judgments", "precision / recall against graded rewrites");
    std::vector<std::string> judge_rewrites;
    std::string judge_file, judge_positives = "1,2";
    judge->add_option("--rewrites", judge_rewrites, "rewrite file, optionally name=path; repeatable")->required();
    judge->add_option("--judgments", judge_file, "query<TAB>rewrite<TAB>grade file")->required();
    judge->add_option("--positives", judge_positives, "grades counted as relevant")->capture_default_str();

    // oracle
    auto* orc = app.add_subcommand("oracle", "evaluate a closed-form complete-bipartite score");
    ClosedFormInput cf;
    std::string form = "k22";
    orc->add_option("--form", form, "k22|k12|evidence-k22")->capture_default_str();
    orc->add_option("--c1", cf.c1)->capture_default_str();
    orc->add_option("--c2", cf.c2)->capture_default_str();
    orc->add_option("--k", cf.k)->capture_default_str();

    try {
        std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
        std::reverse(rev.begin(), rev.end());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        const auto start = Clock::now();
        if (*ingest) {
            const auto g = load_graph(ingest_graph);
            const auto comps = extract_components(g);
            out << "queries=" << g.num_queries() << '\n'
                << "ads=" << g.num_ads() << '\n'
                << "edges=" << g.num_edges() << '\n'
                << "components=" << comps.size() << '\n';
            if (!comps.empty()) out << "largest_component_edges=" << comps.front().num_edges() << '\n';
        } else if (*gen) {
            ClickGraph g;
            if (planted) {
                skew.num_queries = syn.num_queries;
                skew.num_ads = syn.num_ads;
                skew.powerlaw_exponent = syn.powerlaw_exponent;
                skew.seed = syn.seed;
                g = generate_planted_skew(skew);
            } else {
                g = generate_synthetic(syn);
            }
            Output o(gen_out, out);
            write_edge_tsv(*o, g);
            o.close();
            err << "queries=" << g.num_queries() << " ads=" << g.num_ads() << " edges=" << g.num_edges() << '\n';
        } else if (*compute) {
            const auto [method, kind] = resolve(compute_flags, threads);
            const auto g = load_graph(compute_graph);
            Output o(compute_out, out);
            std::vector<std::string> header;
            SimilarityScores s;
            if (method == Method::Pearson) {
                std::vector<std::pair<std::uint32_t, std::uint32_t>> degenerate;
                s = pearson_scores(g, &degenerate);
                header.push_back("degenerate_pairs=" + std::to_string(degenerate.size()));
                write_pearson_dump(*o, g, s, degenerate, header);
            } else {
                s = compute_scores(g, method, compute_flags.params, kind);
                header.push_back("iterations_run=" + std::to_string(s.iterations_run));
                header.push_back(std::string("converged=") + (s.converged ? "true" : "false"));
                write_score_dump(*o, g, s, header);
            }
            o.close();
            auto& summary = o.is_file() ? out : err;
            summary << "method=" << method_name(method) << '\n'
                    << "iterations_run=" << s.iterations_run << '\n'
                    << "converged=" << (s.converged ? "true" : "false") << '\n'
                    << "pairs=" << s.pairs.pair_count() << '\n';
        } else if (*rw) {
            const auto [method, kind] = resolve(rw_flags, threads);
            const auto g = load_graph(rw_graph);
            SimilarityScores s;
            if (!rw_scores.empty()) {
                std::ifstream in(rw_scores);
                if (!in) throw std::runtime_error("cannot open score dump " + rw_scores);
                s = read_score_dump(in, g, method);
            } else {
                s = compute_scores(g, method, rw_flags.params, kind);
            }
            std::optional<BidTermList> bids;
            if (!rw_bids.empty()) bids = load_bid_terms(rw_bids);
            const auto lists = rewrite_all(g, s, rw_opts, bids ? &*bids : nullptr);
            Output o(rw_out, out);
            write_rewrites(*o, lists);
            o.close();
            auto& summary = o.is_file() ? out : err;
            std::set<std::string> sample(g.query_labels().begin(), g.query_labels().end());
            summary << "queries=" << lists.size() << '\n';
            if (!sample.empty()) summary << "coverage=" << fixed(coverage(lists, sample)) << '\n';
            for (const auto& [d, f] : depth_histogram(lists, rw_opts.final_cap)) {
                summary << "depth_" << d << '=' << fixed(f) << '\n';
            }
        } else if (*des) {
            const auto [method, kind] = resolve(des_flags, threads);
            (void)kind;
            const auto g = load_graph(des_graph);
            const auto triples = select_triples(g, des_n, des_seed);
            const auto r = desirability_experiment(g, triples, method, des_flags.params);
            out << "method      accuracy  correct/n\n";
            char line[128];
            std::snprintf(line, sizeof line, "%-11s %8.4f  %zu/%zu\n", std::string(method_name(method)).c_str(),
                          r.accuracy(), r.successes, r.total);
            out << line;
            write_report(out, r, des_seed);
        } else if (*judge) {
            const auto positives = parse_grades(judge_positives);
            const auto judgments = load_judgments(judge_file);
            std::vector<std::pair<std::string, std::vector<RewriteList>>> methods;
            for (const auto& spec : judge_rewrites) {
                const auto eq = spec.find('=');
                const auto name = eq == std::string::npos ? spec : spec.substr(0, eq);
                const auto path = eq == std::string::npos ? spec : spec.substr(eq + 1);
                std::ifstream in(path);
                if (!in) throw std::runtime_error("cannot open rewrite file " + path);
                methods.emplace_back(name, read_rewrites(in));
            }
            const auto reports = precision_recall(methods, judgments, positives);
            out << "method                 P@1    P@2    P@3    P@4    P@5   prec  recall\n";
            for (const auto& r : reports) {
                char line[256];
                std::snprintf(line, sizeof line, "%-20s %6.3f %6.3f %6.3f %6.3f %6.3f %6.3f %6.3f\n",
                              r.method.c_str(), r.precision_at[0], r.precision_at[1], r.precision_at[2],
                              r.precision_at[3], r.precision_at[4], r.precision, r.recall);
                out << line;
            }
            for (const auto& r : reports) write_report(out, r);
        } else if (*orc) {
            double v = 0.0;
            if (form == "k22") {
                v = closed_form_k22(cf);
            } else if (form == "k12") {
                v = closed_form_k12(cf);
            } else if (form == "evidence-k22") {
                v = closed_form_evidence_k22(cf);
            } else {
                throw std::invalid_argument("unknown --form '" + form + "' (expected k22|k12|evidence-k22)");
            }
            out << fixed(v, 12) << '\n';
        }
        report_time(err, start);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace clicksim::cli
