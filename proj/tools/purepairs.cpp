#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "purepairs/campaign.hpp"
#include "purepairs/io.hpp"
#include "purepairs/structures.hpp"

using namespace purepairs;
using nlohmann::json;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string format = "json";
    std::uint64_t budget = std::uint64_t{1} << 24;
    std::string out;
};

json read_json(const std::string & path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error & e) {
        throw PreconditionError(path + ": " + e.what());
    }
}

bool looks_like_json(const std::string & path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open " + path);
    char ch = 0;
    in >> std::ws >> ch;
    return ch == '{';
}

/// A blockade file is {"host": {"n", "edges"}, "blocks": [{"index", "vertices"}]};
/// a plain graph file is split into `blocks` equal parts.
Blockade load_blockade(const std::string & path, int blocks)
{
    if (looks_like_json(path)) {
        json j = read_json(path);
        auto host = std::make_shared<const Graph>(graph_from_json(j.at("host")));
        return blockade_from_json(host, j);
    }
    auto host = std::make_shared<const Graph>(load_graph(path));
    return equipartition(host, blocks > 0 ? blocks : host->n());
}

/// "k=10,size=40,p=0.07" into a map; later keys override earlier ones.
std::map<std::string, std::string> parse_params(const std::string & text)
{
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("parameter '" + item + "' is not key=value");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

template <class T>
T param(const std::map<std::string, std::string> & m, const std::string & key, T fallback)
{
    auto it = m.find(key);
    if (it == m.end())
        return fallback;
    try {
        if constexpr (std::is_same_v<T, int>)
            return std::stoi(it->second);
        else if constexpr (std::is_same_v<T, double>)
            return std::stod(it->second);
        else
            return parse_rational(it->second);
    } catch (const std::logic_error &) {
        throw PreconditionError("bad value for " + key + ": " + it->second);
    }
}

Report base_report(const std::string & kind, const Globals & g)
{
    Report r;
    r.kind = kind;
    r.seed = g.seed;
    return r;
}

}  // namespace

namespace {

Report run_congestion(const Globals & gl, const std::string & file, const std::string & method)
{
    Graph g = load_graph(file);
    Report r = base_report("congestion", gl);
    r.params = {{"file", file}, {"method", method}, {"n", g.n()}, {"m", g.edge_count()}};
    std::vector<std::pair<std::string, CongestionMethod>> methods;
    if (method == "exhaustive" || method == "both")
        methods.emplace_back("exhaustive", CongestionMethod::exhaustive);
    if (method == "parametric" || method == "both")
        methods.emplace_back("parametric", CongestionMethod::parametric_cut);
    std::vector<Rational> values;
    bool witnesses = true;
    for (const auto & [name, m] : methods) {
        auto c = congestion(g, m);
        values.push_back(c.value);
        json rec = {{"method", name}, {"value", to_string(c.value)}, {"gamma", to_string(c.gamma)}};
        if (c.witness) {
            rec["witness"] = *c.witness;
            witnesses = witnesses && congestion_of_witness(c) == c.value;
        } else {
            rec["witness"] = nullptr;
        }
        r.trials.push_back(rec);
    }
    r.add("witness attains the reported value", witnesses, "exact");
    if (values.size() == 2)
        r.add("methods agree", values[0] == values[1], "exact equality");
    return r;
}

Report run_buildable(const Globals & gl, const std::string & file, int beta, bool embed)
{
    Graph h = load_graph(file);
    Report r = base_report("buildable", gl);
    r.params = {{"file", file}, {"beta", beta}, {"embed", embed}, {"n", h.n()}, {"m", h.edge_count()}};
    auto w = weak_certificate(h, beta, default_peel_limit, gl.budget);
    json rec = {{"verdict", to_string(w.verdict)}};
    if (w.certificate) {
        rec["certificate"] = certificate_to_json(*w.certificate);
        r.add("certificate replays to the input", replay(*w.certificate) == h, "exact");
    }
    if (embed && w.certificate) {
        auto e = embed_from_certificate(*w.certificate);
        rec["host"] = graph_to_json(e.host);
        rec["host_certificate"] = certificate_to_json(e.cert);
        rec["embedding"] = e.emb.map;
        r.add("strong certificate rebuilds the host", e.cert.mode == BuildMode::strong && replay(e.cert) == e.host,
              "exact");
        r.add("embedding is induced", is_induced_embedding(e.host, h, e.emb.map), "exact");
    }
    r.trials.push_back(rec);
    return r;
}

Report run_blockade_stats(const Globals & gl, const std::string & file, int blocks)
{
    Blockade b = load_blockade(file, blocks);
    Report r = base_report("blockade-stats", gl);
    r.params = {{"file", file}};
    auto m = metrics(b);
    json sizes = json::array();
    for (int p = 0; p < b.length(); ++p)
        sizes.push_back({{"index", b.index_at(p)}, {"size", b.at(p).size()}});
    r.trials.push_back({{"length", m.length},
                        {"width", m.width},
                        {"host_size", m.host_size},
                        {"shrinkage", m.shrinkage},
                        {"linkage", to_string(m.linkage)},
                        {"host_hash", graph_hash(b.host())},
                        {"blocks", sizes}});
    bool disjoint_blocks = true;
    for (int p = 0; p < b.length(); ++p)
        for (int q = p + 1; q < b.length(); ++q)
            disjoint_blocks = disjoint_blocks && disjoint(b.at(p), b.at(q));
    r.add("blocks are disjoint and nonempty", disjoint_blocks, "exact");
    return r;
}

}  // namespace

namespace {

/// Records a built bi-levelling together with its checker verdict and the
/// lengths of every connecting path.
void record_bilevelling(Report & r, const Blockade & a, const BiLevelling & bl)
{
    const Graph & g = a.host();
    auto problem = check::bilevelling(g, bl, &a);
    json paths = json::array();
    bool heights = true;
    if (!problem)
        for (int x : bl.m.base())
            for (int y : bl.l.base()) {
                auto p = connecting_path(g, bl, x, y);
                heights = heights && static_cast<int>(p.size()) - 1 == bl.height() && !check::induced_path(g, p);
                paths.push_back(p);
            }
    r.trials.push_back({{"structure", bilevelling_to_json(bl)},
                        {"height", bl.height()},
                        {"length", bl.length()},
                        {"paths", paths}});
    r.add("bi-levelling passes the checker", !problem, "exact", {{"problem", problem.value_or("")}});
    r.add("connecting paths are induced with height edges", heights, "exact");
}

Report run_machinery(const Globals & gl, const std::string & op, const std::string & params_text, Mode mode)
{
    const auto prm = parse_params(params_text);
    Report r = base_report("machinery", gl);
    r.params = {{"op", op}, {"params", prm}, {"mode", mode == Mode::strict ? "strict" : "relaxed"}};
    const std::uint64_t s = gl.seed;
    const Rational c = param<Rational>(prm, "c", Rational(1, 2));
    try {
        if (op == "levelling" || op == "grading") {
            const bool lev = op == "levelling";
            Blockade b = lev ? random_blockade(param(prm, "k", 6), param(prm, "size", 8), param(prm, "p", 0.12), s)
                             : matching_blockade(param(prm, "k", 5), param(prm, "size", 40), param(prm, "degree", 3), s);
            std::vector<int> h(static_cast<std::size_t>(param(prm, "h", lev ? 4 : 2)));
            std::iota(h.begin(), h.end(), 0);
            const int v = b.block(0).at(static_cast<std::size_t>(param(prm, "v", 0)));
            const int rho = param(prm, "rho", lev ? 4 : 2);
            const Rational tau = param<Rational>(prm, "tau", lev ? 12 : 1000);
            if (lev) {
                auto res = build_levelling(b, h, 0, v, rho, tau, mode);
                auto problem = check::levelling(b.host(), res.lev);
                r.trials.push_back({{"structure", levelling_to_json(res.lev)}, {"j_set", res.j_set}});
                r.add("levelling passes the checker", !problem, "exact", {{"problem", problem.value_or("")}});
            } else {
                auto res = build_grading(b, h, 0, v, rho, tau, mode);
                auto problem = check::grading(b.host(), res.grading);
                r.trials.push_back({{"structure", grading_to_json(res.grading)}, {"truncated", res.truncated}});
                r.add("grading passes the checker", !problem, "exact", {{"problem", problem.value_or("")}});
            }
        } else if (op == "bilevelling" || op == "exact") {
            Blockade a = random_blockade(param(prm, "k", 10), param(prm, "size", 40), param(prm, "p", 0.07), s);
            if (op == "bilevelling") {
                const BilevelParams bp{param<Rational>(prm, "gamma", Rational(1, 64)),
                                       param<Rational>(prm, "delta", Rational(1, 16)), {}};
                record_bilevelling(r, a, build_bilevelling(a, param(prm, "count", 1), c, bp, mode).result);
            } else {
                auto run = exact_bilevelling(a, param(prm, "count", 1), c, param(prm, "ell", 7), {}, mode);
                record_bilevelling(r, a, run.result);
            }
        } else if (op == "bigrading") {
            Blockade a = random_blockade(param(prm, "k", 20), param(prm, "size", 150), param(prm, "p", 0.05), s);
            auto run = build_bigrading(a, param(prm, "count", 1), param(prm, "ell", 7), c,
                                       param<Rational>(prm, "d", Rational(1, 2)),
                                       param<Rational>(prm, "lambda", Rational(1, 2)), mode);
            record_bilevelling(r, a, run.result);
            r.add("backward grading present", run.result.bigrading, "exact");
        } else if (op == "expansion") {
            const Rational delta = param<Rational>(prm, "delta", Rational(1, 8));
            Blockade a = nondivergent_blockade(param(prm, "k", 2), param(prm, "size", 10), s, delta, delta);
            auto res = expanding_contraction(a, delta, mode, gl.budget);
            auto problem = check::expanding(res.contraction, res.tau);
            r.trials.push_back({{"contraction", blockade_to_json(res.contraction)},
                                {"tau", to_string(res.tau)},
                                {"rounds", res.rounds},
                                {"a_size", to_string(relative_size(a, res.contraction))}});
            r.add("contraction is expanding", !problem, "exact", {{"problem", problem.value_or("")}});
            r.add("A-size at least 1 - delta K", relative_size(a, res.contraction) >= 1 - delta * a.length(), "exact");
        } else if (op == "cycle") {
            Graph g = gnp(param(prm, "n", 13), param(prm, "p", 0.22), s);
            const int ell = param(prm, "ell", 6);
            auto res = find_induced_cycle(g, ell, param<Rational>(prm, "c", 1), param<Rational>(prm, "eps", Rational(1, 10)));
            r.trials.push_back({{"graph", graph_to_json(g)},
                                {"cycle", res.cycle ? json(*res.cycle) : json(nullptr)},
                                {"stage", res.stage},
                                {"via_pipeline", res.via_pipeline},
                                {"exhaustive_complete", res.exhaustive_complete}});
            r.add("returned cycle is induced of length ell",
                  !res.cycle || (static_cast<int>(res.cycle->size()) == ell && !check::induced_cycle(g, *res.cycle)),
                  "exact");
        } else {
            throw PreconditionError("unknown machinery op: " + op);
        }
    } catch (const HypothesisViolation & e) {
        r.trials.push_back({{"outcome", "hypothesis"}, {"condition", e.condition()}, {"message", e.what()}});
    } catch (const StageFailure & e) {
        r.trials.push_back({{"outcome", "stage"}, {"stage", e.stage()}, {"message", e.what()}});
    }
    return r;
}

}  // namespace

namespace {

Report run_ledger(const Globals & gl, const std::string & file, const std::string & c_text, const std::string & sigma_text,
                  bool epsilon)
{
    const BuildCertificate cert = certificate_from_json(read_json(file));
    const Rational c = parse_rational(c_text);
    Report r = base_report("ledger", gl);
    Rational sigma;
    if (sigma_text.empty()) {
        const int f = (cert.beta - 3) / 3;
        if (f < 1)
            throw PreconditionError("beta must be at least 6");
        sigma = (c - Rational(1, f)) / 2;
    } else {
        sigma = parse_rational(sigma_text);
    }
    r.params = {{"file", file}, {"c", to_string(c)}, {"sigma", to_string(sigma)}, {"epsilon", epsilon}};
    auto l = ledger_chain(cert, c, sigma);
    r.trials.push_back(ledger_to_json(l));
    const auto bad = l.violated();
    r.add("every recorded inequality holds", !bad, "exact rational",
          {{"inequalities", l.inequality_count()}, {"first_violation", bad.value_or("")}});
    if (epsilon) {
        auto e = epsilon_for_sparse(cert, c);
        bool ok = true;
        json checks = json::array();
        for (const auto & q : e.checks) {
            ok = ok && q.holds();
            checks.push_back({{"label", q.label}, {"holds", q.holds()}});
        }
        r.trials.push_back({{"epsilon", "2^-" + e.t.str()}, {"reaches_N", e.reaches_n}, {"checks", checks}});
        r.add("epsilon inequalities hold", ok, "exact rational");
    }
    return r;
}

Report run_force(const Globals & gl, const std::string & host_file, const std::string & pattern_file,
                 const std::string & cert_file, int blocks, Mode mode, const std::string & c_text)
{
    Blockade a = load_blockade(host_file, blocks);
    Graph h = load_graph(pattern_file);
    BuildCertificate cert;
    if (!cert_file.empty()) {
        cert = certificate_from_json(read_json(cert_file));
    } else {
        auto w = weak_certificate(h, 2, default_peel_limit, gl.budget);
        if (!w.certificate)
            throw PreconditionError("pattern has no certificate; pass one with --cert");
        cert = *w.certificate;
    }
    ForcingParams fp;
    fp.c = parse_rational(c_text);
    Report r = base_report("force", gl);
    r.params = {{"host", host_file},
                {"pattern", pattern_file},
                {"mode", mode == Mode::strict ? "strict" : "relaxed"},
                {"c", to_string(fp.c)},
                {"certificate", certificate_to_json(cert)}};
    auto out = force_rainbow_copy(a, h, cert, fp, mode);
    json rec = {{"found", out.copy.has_value()}, {"stage", out.stage}, {"via_pipeline", out.via_pipeline}};
    if (out.copy) {
        rec["map"] = out.copy->emb.map;
        rec["block_of"] = out.copy->block_of;
    }
    r.trials.push_back(rec);
    r.add("returned copy is induced and rainbow", !out.copy || is_rainbow_copy(a, h, *out.copy), "exact");
    if (mode == Mode::relaxed)
        r.add("verdict equals exhaustive rainbow search", out.copy.has_value() == find_rainbow_copy(a, h).has_value(),
              "exact");
    return r;
}

std::vector<int> parse_list(const std::string & text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) {
            try {
                out.push_back(std::stoi(item));
            } catch (const std::logic_error &) {
                throw PreconditionError("bad integer: " + item);
            }
        }
    return out;
}

struct CounterexampleArgs {
    std::string h_file;
    std::string j;
    std::string j_prime;
    std::string c = "1/10";
    std::string d;
    std::string n = "20,30,40";
    int trials = 50;
    int pair_size = 6;
};

Report run_counterexample(const Globals & gl, const CounterexampleArgs & args)
{
    CounterexampleConfig cfg = pentagon_config(parse_list(args.n), args.trials, gl.seed);
    if (!args.h_file.empty()) {
        cfg.h = load_graph(args.h_file);
        cfg.j = cfg.j_prime = all_vertices(cfg.h);
    }
    if (!args.j.empty()) {
        cfg.j = parse_list(args.j);
        canonicalize(cfg.j);
    }
    if (!args.j_prime.empty()) {
        cfg.j_prime = parse_list(args.j_prime);
        canonicalize(cfg.j_prime);
    }
    cfg.c = parse_rational(args.c);
    cfg.pair_size = static_cast<std::size_t>(args.pair_size);
    cfg.budget = gl.budget;
    cfg.d = args.d.empty() ? (cfg.c + counterexample_slack(cfg).c_prime) / 2 : parse_rational(args.d);
    return counterexample_experiment(cfg);
}

}  // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Pure-pair and congestion toolkit: exact congestion, buildability certificates, blockade machinery, "
                 "forcing constants and experiments."};
    app.require_subcommand(1);
    app.fallthrough();
    Globals gl;
    app.add_option("--seed", gl.seed, "master seed")->capture_default_str();
    app.add_option("--format", gl.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--budget", gl.budget, "search node budget")->capture_default_str();
    app.add_option("--out", gl.out, "write the report here instead of stdout");

    std::function<Report()> action;

    std::string file, method = "parametric";
    auto * cong = app.add_subcommand("congestion", "exact congestion with a witness subgraph");
    cong->add_option("graphfile", file, "edge list or graph6")->required();
    cong->add_option("--method", method)->check(CLI::IsMember({"parametric", "exhaustive", "both"}))->capture_default_str();
    cong->callback([&] { action = [&] { return run_congestion(gl, file, method); }; });

    int beta = 2;
    bool embed = false;
    auto * build = app.add_subcommand("buildable", "weak buildability certificate");
    build->add_option("graphfile", file)->required();
    build->add_option("--beta", beta)->required();
    build->add_flag("--embed", embed, "also embed into a strongly buildable host");
    build->callback([&] { action = [&] { return run_buildable(gl, file, beta, embed); }; });

    int blocks = 0;
    auto * blk = app.add_subcommand("blockade", "blockade utilities");
    auto * stats = blk->add_subcommand("stats", "length, width, shrinkage and linkage");
    blk->require_subcommand(1);
    stats->add_option("file", file, "blockade JSON or a graph file")->required();
    stats->add_option("--blocks", blocks, "equal parts for a plain graph file (default: singletons)");
    stats->callback([&] { action = [&] { return run_blockade_stats(gl, file, blocks); }; });

    std::string op, params_text, mode_text = "relaxed";
    auto * mach = app.add_subcommand("machinery", "run one construction on a seeded synthetic instance");
    mach->add_option("op", op)
        ->required()
        ->check(CLI::IsMember({"levelling", "grading", "bilevelling", "exact", "bigrading", "expansion", "cycle"}));
    mach->add_option("--params", params_text, "key=value list, e.g. k=10,size=40,p=0.07");
    mach->add_option("--mode", mode_text)->check(CLI::IsMember({"strict", "relaxed"}))->capture_default_str();
    auto mode_of = [&] { return mode_text == "strict" ? Mode::strict : Mode::relaxed; };
    mach->callback([&] { action = [&] { return run_machinery(gl, op, params_text, mode_of()); }; });

    std::string c_text = "1/2", sigma_text;
    bool epsilon = false;
    auto * led = app.add_subcommand("ledger", "forcing constants for a strong certificate");
    led->add_option("certfile", file)->required();
    led->add_option("--c", c_text)->capture_default_str();
    led->add_option("--sigma", sigma_text, "default: midpoint of the admissible interval");
    led->add_flag("--epsilon", epsilon, "also derive the sparse-reduction epsilon");
    led->callback([&] { action = [&] { return run_ledger(gl, file, c_text, sigma_text, epsilon); }; });

    std::string pattern, cert_file;
    auto * force = app.add_subcommand("force", "rainbow copy of a buildable pattern in a blockade");
    force->add_option("graphfile", file, "blockade JSON or a graph file")->required();
    force->add_option("patternfile", pattern)->required();
    force->add_option("--cert", cert_file, "certificate JSON for the pattern");
    force->add_option("--blocks", blocks);
    force->add_option("--mode", mode_text)->check(CLI::IsMember({"strict", "relaxed"}))->capture_default_str();
    force->add_option("--c", c_text)->capture_default_str();
    force->callback([&] { action = [&] { return run_force(gl, file, pattern, cert_file, blocks, mode_of(), c_text); }; });

    CounterexampleArgs cx;
    auto * counter = app.add_subcommand("counterexample", "random construction with J- and J'-copies deleted");
    counter->add_option("--pattern", cx.h_file, "graph H (default C_5)");
    counter->add_option("--j", cx.j, "vertices of J in h (default all)");
    counter->add_option("--j-prime", cx.j_prime, "vertices of J' in the complement of h (default all)");
    counter->add_option("--c", cx.c)->capture_default_str();
    counter->add_option("--d", cx.d, "default: midpoint of (c, c')");
    counter->add_option("--n", cx.n)->capture_default_str();
    counter->add_option("--trials", cx.trials)->capture_default_str();
    counter->add_option("--pair-size", cx.pair_size)->capture_default_str();
    counter->callback([&] { action = [&] { return run_counterexample(gl, cx); }; });

    std::string suite;
    int count = 0;
    std::vector<std::string> suite_names;
    for (const auto & s : campaign_suites())
        suite_names.push_back(s.first);
    auto * camp = app.add_subcommand("campaign", "property suite");
    camp->add_option("suite", suite)->required()->check(CLI::IsMember(suite_names));
    camp->add_option("--count", count, "instances (default per suite)");
    camp->callback([&] {
        action = [&] { return campaign(suite, CampaignParams{gl.seed, count, gl.budget}); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        Report rep = action();
        const std::string text = gl.format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n";
        if (gl.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(gl.out);
            if (!out) {
                std::cerr << "cannot write " << gl.out << "\n";
                return 2;
            }
            out << text;
        }
        return rep.pass() ? 0 : 1;
    } catch (const PreconditionError & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception & e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
