#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

#include "congestion.hpp"
#include "embedding.hpp"
#include "io.hpp"

namespace purepairs {

struct Branch {
    bool cycle = false;
    /// Path: p1, internals..., p2. Cycle: the walk without repeating its start.
    std::vector<int> vertices;

    int length() const { return cycle ? static_cast<int>(vertices.size()) : static_cast<int>(vertices.size()) - 1; }
};

struct BranchDecomposition {
    std::vector<Branch> branches;
};

/// Splits the edge set into branches: maximal paths through degree-2 vertices
/// between vertices of other degrees, and cycles with at most one vertex of
/// degree other than two.
inline BranchDecomposition branches(const Graph & g)
{
    int n = g.n();
    BranchDecomposition out;
    std::set<std::pair<int, int>> used;
    auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    auto other = [&](int cur, int prev) {
        for (int w : g.neighbours(cur))
            if (w != prev)
                return w;
        return -1;
    };
    auto walk = [&](int start, int first) {
        Branch b;
        b.vertices = {start};
        int prev = start, cur = first;
        used.insert(key(start, first));
        while (cur != start && g.degree(cur) == 2) {
            b.vertices.push_back(cur);
            int next = other(cur, prev);
            used.insert(key(cur, next));
            prev = cur;
            cur = next;
        }
        if (cur == start)
            b.cycle = true;
        else
            b.vertices.push_back(cur);
        return b;
    };
    for (int u = 0; u < n; ++u) {
        if (g.degree(u) == 2)
            continue;
        for (int v : g.neighbours(u))
            if (!used.count(key(u, v)))
                out.branches.push_back(walk(u, v));
    }
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbours(u))
            if (!used.count(key(u, v)))
                out.branches.push_back(walk(u, v));
    return out;
}

enum class BuildMode { weak, strong };

struct BuildStep {
    enum class Kind { subleaf, handle };
    Kind kind = Kind::subleaf;
    int vertex = -1;                 // subleaf
    std::optional<int> attach;       // subleaf neighbour, if any
    std::vector<int> path;           // handle: end1, internals..., end2

    int handle_length() const { return static_cast<int>(path.size()) - 1; }

    static BuildStep subleaf(int v, std::optional<int> a = std::nullopt)
    {
        BuildStep s;
        s.kind = Kind::subleaf;
        s.vertex = v;
        s.attach = a;
        return s;
    }

    static BuildStep handle(std::vector<int> p)
    {
        BuildStep s;
        s.kind = Kind::handle;
        s.path = std::move(p);
        return s;
    }

    bool operator==(const BuildStep &) const = default;
};

struct BuildCertificate {
    int beta = 2;
    BuildMode mode = BuildMode::weak;
    int vertex_count = 0;
    std::pair<int, int> base{0, 1};  // strong mode only
    std::vector<BuildStep> steps;

    int handle_count() const
    {
        return static_cast<int>(std::count_if(steps.begin(), steps.end(),
                                              [](const BuildStep & s) { return s.kind == BuildStep::Kind::handle; }));
    }
};

/// Rebuilds the graph a certificate describes, validating every step.
inline Graph replay(const BuildCertificate & cert)
{
    if (cert.beta < 2)
        throw PreconditionError("beta must be at least 2");
    int n = cert.vertex_count;
    if (n < 0)
        throw PreconditionError("negative vertex count");
    Graph g(n);
    std::vector<char> present(n, 0);
    auto check = [&](int v, const char * what) {
        if (v < 0 || v >= n)
            throw PreconditionError(std::string(what) + ": vertex " + std::to_string(v) + " out of range");
    };
    if (cert.mode == BuildMode::strong) {
        auto [a, b] = cert.base;
        check(a, "base");
        check(b, "base");
        if (a == b)
            throw PreconditionError("base vertices must be distinct");
        present[a] = present[b] = 1;
    }
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        const auto & s = cert.steps[i];
        std::string at = "step " + std::to_string(i);
        if (s.kind == BuildStep::Kind::subleaf) {
            if (cert.mode == BuildMode::strong)
                throw PreconditionError(at + ": subleaf in a strong certificate");
            check(s.vertex, at.c_str());
            if (present[s.vertex])
                throw PreconditionError(at + ": subleaf vertex already present");
            if (s.attach) {
                check(*s.attach, at.c_str());
                if (!present[*s.attach])
                    throw PreconditionError(at + ": subleaf attached to an absent vertex");
                g.add_edge(s.vertex, *s.attach);
            }
            present[s.vertex] = 1;
            continue;
        }
        const auto & p = s.path;
        if (p.size() < 3)
            throw PreconditionError(at + ": handle shorter than 2");
        if (s.handle_length() < cert.beta)
            throw PreconditionError(at + ": handle length " + std::to_string(s.handle_length()) + " below beta " +
                                    std::to_string(cert.beta));
        for (int v : p)
            check(v, at.c_str());
        int e1 = p.front(), e2 = p.back();
        if (e1 == e2 || !present[e1] || !present[e2])
            throw PreconditionError(at + ": handle ends must be distinct present vertices");
        if (g.adjacent(e1, e2))
            throw PreconditionError(at + ": handle is not induced (ends adjacent)");
        for (std::size_t k = 1; k + 1 < p.size(); ++k) {
            if (present[p[k]])
                throw PreconditionError(at + ": handle internal vertex already present");
            present[p[k]] = 1;
        }
        for (std::size_t k = 0; k + 1 < p.size(); ++k)
            g.add_edge(p[k], p[k + 1]);
    }
    for (int v = 0; v < n; ++v)
        if (!present[v])
            throw PreconditionError("vertex " + std::to_string(v) + " never added");
    return g;
}

namespace detail {

struct HandleCandidate {
    std::vector<int> path;
    std::vector<int> internals;  // sorted, for tie-breaking
};

/// Induced paths of the subgraph on `mask` whose internal vertices have degree
/// two there, of length at least max(2, min_len). Longest first, then by
/// internal vertex list.
inline std::vector<HandleCandidate> handle_candidates(const Graph & g, std::uint64_t mask, int min_len)
{
    int n = g.n();
    auto in = [&](int v) { return (mask >> v) & 1u; };
    std::vector<int> deg(n, 0);
    for (int v = 0; v < n; ++v)
        if (in(v))
            for (int w : g.neighbours(v))
                deg[v] += in(w);
    auto nbrs = [&](int v) {
        std::vector<int> out;
        for (int w : g.neighbours(v))
            if (in(w))
                out.push_back(w);
        return out;
    };
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    std::vector<HandleCandidate> out;
    int need = std::max(2, min_len);
    for (int s = 0; s < n; ++s) {
        if (!in(s))
            continue;
        for (int t : nbrs(s)) {
            if (deg[t] != 2)
                continue;
            std::vector<int> path{s, t};
            int prev = s, cur = t;
            while (true) {
                auto nb = nbrs(cur);
                int next = nb[0] == prev ? nb[1] : nb[0];
                if (std::find(path.begin(), path.end(), next) != path.end())
                    break;
                path.push_back(next);
                int len = static_cast<int>(path.size()) - 1;
                if (len >= need && !g.adjacent(s, next)) {
                    std::vector<int> internals(path.begin() + 1, path.end() - 1);
                    std::sort(internals.begin(), internals.end());
                    std::vector<int> ends{std::min(s, next), std::max(s, next)};
                    if (seen.insert({internals, ends}).second) {
                        std::vector<int> p = path;
                        if (p.front() > p.back())
                            std::reverse(p.begin(), p.end());
                        out.push_back({p, internals});
                    }
                }
                if (deg[next] != 2)
                    break;
                prev = cur;
                cur = next;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const HandleCandidate & a, const HandleCandidate & b) {
        if (a.path.size() != b.path.size())
            return a.path.size() > b.path.size();
        if (a.internals != b.internals)
            return a.internals < b.internals;
        return a.path < b.path;
    });
    return out;
}

inline int lowest_subleaf(const Graph & g, std::uint64_t mask, std::optional<int> & attach)
{
    for (int v = 0; v < g.n(); ++v) {
        if (!((mask >> v) & 1u))
            continue;
        int d = 0, last = -1;
        for (int w : g.neighbours(v))
            if ((mask >> w) & 1u) {
                ++d;
                last = w;
            }
        if (d <= 1) {
            attach = d == 1 ? std::optional<int>(last) : std::nullopt;
            return v;
        }
    }
    return -1;
}

struct PeelSearch {
    const Graph & g;
    int beta;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    std::unordered_set<std::uint64_t> dead{};
    std::vector<BuildStep> peeled{};  // in removal order

    // true: fully peeled; false: impossible from this mask
    bool run(std::uint64_t mask)
    {
        if (mask == 0)
            return true;
        if (dead.count(mask))
            return false;
        if (++nodes > budget)
            throw InconclusiveSearch("peel search exceeded its node budget");
        std::optional<int> attach;
        int v = lowest_subleaf(g, mask, attach);
        if (v >= 0) {
            peeled.push_back(BuildStep::subleaf(v, attach));
            if (run(mask & ~(std::uint64_t{1} << v)))
                return true;
            peeled.pop_back();
            dead.insert(mask);
            return false;
        }
        for (const auto & c : handle_candidates(g, mask, beta)) {
            std::uint64_t next = mask;
            for (int x : c.internals)
                next &= ~(std::uint64_t{1} << x);
            peeled.push_back(BuildStep::handle(c.path));
            if (run(next))
                return true;
            peeled.pop_back();
        }
        dead.insert(mask);
        return false;
    }
};

inline BuildCertificate certificate_from_peel(int n, int beta, std::vector<BuildStep> peeled)
{
    BuildCertificate cert;
    cert.beta = beta;
    cert.mode = BuildMode::weak;
    cert.vertex_count = n;
    std::reverse(peeled.begin(), peeled.end());
    cert.steps = std::move(peeled);
    return cert;
}

inline std::uint64_t full_mask(int n) { return n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1); }

}  // namespace detail

inline constexpr int default_peel_limit = 20;

struct WeakSearch {
    Verdict verdict = Verdict::absent;
    std::optional<BuildCertificate> certificate;
};

/// Exhaustive search over peel orders. Subleaves are removed eagerly (removing
/// one never destroys buildability); handles are tried longest first.
inline WeakSearch weak_certificate(const Graph & h, int beta, int limit = default_peel_limit,
                                   std::uint64_t budget = 1u << 22)
{
    if (beta < 2)
        throw PreconditionError("beta must be at least 2");
    if (h.n() > limit || h.n() > 63)
        throw PreconditionError("weak certificate search limited to n <= " + std::to_string(std::min(limit, 63)));
    detail::PeelSearch s{h, beta, budget};
    WeakSearch out;
    try {
        if (s.run(detail::full_mask(h.n()))) {
            out.verdict = Verdict::found;
            out.certificate = detail::certificate_from_peel(h.n(), beta, s.peeled);
        }
    } catch (const InconclusiveSearch &) {
        out.verdict = Verdict::inconclusive;
    }
    return out;
}

/// Raised when the input's congestion exceeds the requested bound. Carries the
/// densest vertex set found.
class CongestionTooLarge : public HypothesisViolation {
public:
    CongestionTooLarge(Rational value, VertexSet witness)
        : HypothesisViolation("congestion <= xi", "congestion is " + to_string(value)),
          value(std::move(value)), witness(std::move(witness))
    {
    }

    Rational value;
    VertexSet witness;
};

inline int longbranch_beta(const Rational & xi)
{
    return static_cast<int>(floor_rational(1 / (3 * xi))) + 1;
}

/// Weak certificate with beta = floor(1/(3 xi)) + 1 for a graph of congestion
/// at most xi, by greedy peeling: subleaves first, otherwise a longest handle
/// cut from a branch. If the greedy peel stalls the exhaustive search decides.
inline BuildCertificate longbranch_witness(const Graph & h, const Rational & xi)
{
    if (h.n() == 0)
        throw PreconditionError("graph must be non-null");
    if (xi <= 0 || xi > Rational(1, 3))
        throw PreconditionError("xi must lie in (0, 1/3]");
    if (h.n() > 63)
        throw PreconditionError("longbranch peeling limited to n <= 63");
    auto c = congestion(h);
    if (c.value > xi)
        throw CongestionTooLarge(c.value, c.witness.value_or(VertexSet{}));
    int beta = longbranch_beta(xi);
    std::uint64_t mask = detail::full_mask(h.n());
    std::vector<BuildStep> peeled;
    while (mask) {
        std::optional<int> attach;
        int v = detail::lowest_subleaf(h, mask, attach);
        if (v >= 0) {
            peeled.push_back(BuildStep::subleaf(v, attach));
            mask &= ~(std::uint64_t{1} << v);
            continue;
        }
        auto cands = detail::handle_candidates(h, mask, beta);
        if (cands.empty())
            break;
        peeled.push_back(BuildStep::handle(cands.front().path));
        for (int x : cands.front().internals)
            mask &= ~(std::uint64_t{1} << x);
    }
    if (mask == 0)
        return detail::certificate_from_peel(h.n(), beta, peeled);
    auto fallback = weak_certificate(h, beta);
    if (fallback.certificate)
        return *fallback.certificate;
    throw StageFailure("longbranch", "no handle of length >= " + std::to_string(beta) +
                                         (fallback.verdict == Verdict::absent ? "; graph is not weakly buildable"
                                                                              : "; search inconclusive"));
}

struct BuildableEmbedding {
    Graph host;
    BuildCertificate cert;
    Embedding emb;
};

/// Turns a weak certificate into a strong one for a larger host that contains
/// the certified graph as an induced subgraph. Each subleaf becomes a handle of
/// length max(4, beta) passing through it.
inline BuildableEmbedding embed_from_certificate(const BuildCertificate & weak)
{
    if (weak.mode != BuildMode::weak)
        throw PreconditionError("expected a weak certificate");
    Graph h = replay(weak);
    int beta = weak.beta;
    int sub_len = std::max(4, beta);
    BuildCertificate strong;
    strong.beta = beta;
    strong.mode = BuildMode::strong;
    strong.base = {0, 1};
    std::vector<int> emb(h.n(), -1);
    int next = 2;
    std::vector<std::vector<int>> adj(2);  // host adjacency while building
    auto add_handle = [&](std::vector<int> path) {
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            adj[path[k]].push_back(path[k + 1]);
            adj[path[k + 1]].push_back(path[k]);
        }
        strong.steps.push_back(BuildStep::handle(std::move(path)));
    };
    auto fresh = [&]() {
        adj.emplace_back();
        return next++;
    };
    auto host_adjacent = [&](int a, int b) { return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end(); };
    std::size_t first = 0;
    const auto & st = weak.steps;
    if (st.size() >= 2 && st[0].kind == BuildStep::Kind::subleaf && !st[0].attach &&
        st[1].kind == BuildStep::Kind::subleaf && !st[1].attach) {
        emb[st[0].vertex] = 0;
        emb[st[1].vertex] = 1;
        first = 2;
    }
    for (std::size_t i = first; i < st.size(); ++i) {
        const auto & s = st[i];
        if (s.kind == BuildStep::Kind::handle) {
            std::vector<int> path;
            path.push_back(emb[s.path.front()]);
            for (std::size_t k = 1; k + 1 < s.path.size(); ++k) {
                emb[s.path[k]] = fresh();
                path.push_back(emb[s.path[k]]);
            }
            path.push_back(emb[s.path.back()]);
            add_handle(std::move(path));
            continue;
        }
        std::vector<int> path(sub_len + 1, -1);
        if (!s.attach) {
            // between the base vertices, subleaf at position 2
            path.front() = 0;
            path.back() = 1;
            for (int k = 1; k < sub_len; ++k)
                path[k] = fresh();
            emb[s.vertex] = path[2];
        } else {
            int a = emb[*s.attach];
            int q = -1;
            for (int x = 0; x < next && q < 0; ++x)
                if (x != a && !host_adjacent(a, x))
                    q = x;
            if (q < 0) {
                std::vector<int> aux(sub_len + 1);
                aux.front() = 0;
                aux.back() = 1;
                for (int k = 1; k < sub_len; ++k)
                    aux[k] = fresh();
                q = aux[2];
                add_handle(std::move(aux));
            }
            path.front() = a;
            path.back() = q;
            for (int k = 1; k < sub_len; ++k)
                path[k] = fresh();
            emb[s.vertex] = path[1];
        }
        add_handle(std::move(path));
    }
    strong.vertex_count = next;
    Graph host = replay(strong);
    if (!is_induced_embedding(host, h, emb))
        throw CertificationFailure("embedding into the buildable host is not induced");
    return {std::move(host), std::move(strong), Embedding{emb}};
}

inline BuildableEmbedding embed_in_buildable(const Graph & h, int beta)
{
    auto w = weak_certificate(h, beta);
    if (!w.certificate)
        throw PreconditionError(w.verdict == Verdict::absent ? "graph is not weakly buildable"
                                                              : "weak buildability search inconclusive");
    return embed_from_certificate(*w.certificate);
}

inline json step_to_json(const BuildStep & s)
{
    if (s.kind == BuildStep::Kind::subleaf) {
        json j = {{"kind", "subleaf"}, {"vertex", s.vertex}};
        j["attach"] = s.attach ? json(*s.attach) : json(nullptr);
        return j;
    }
    return {{"kind", "handle"}, {"path", s.path}, {"length", s.handle_length()}};
}

inline json certificate_to_json(const BuildCertificate & c)
{
    json steps = json::array();
    for (const auto & s : c.steps)
        steps.push_back(step_to_json(s));
    json j = {{"beta", c.beta}, {"mode", c.mode == BuildMode::weak ? "weak" : "strong"},
              {"vertex_count", c.vertex_count}, {"steps", steps}};
    if (c.mode == BuildMode::strong)
        j["base"] = {c.base.first, c.base.second};
    return j;
}

inline BuildCertificate certificate_from_json(const json & j)
{
    BuildCertificate c;
    c.beta = j.at("beta").get<int>();
    std::string mode = j.at("mode").get<std::string>();
    if (mode != "weak" && mode != "strong")
        throw PreconditionError("unknown certificate mode " + mode);
    c.mode = mode == "weak" ? BuildMode::weak : BuildMode::strong;
    c.vertex_count = j.at("vertex_count").get<int>();
    if (c.mode == BuildMode::strong)
        c.base = {j.at("base").at(0).get<int>(), j.at("base").at(1).get<int>()};
    for (const auto & s : j.at("steps")) {
        std::string kind = s.at("kind").get<std::string>();
        if (kind == "subleaf") {
            std::optional<int> a;
            if (s.contains("attach") && !s.at("attach").is_null())
                a = s.at("attach").get<int>();
            c.steps.push_back(BuildStep::subleaf(s.at("vertex").get<int>(), a));
        } else if (kind == "handle") {
            c.steps.push_back(BuildStep::handle(s.at("path").get<std::vector<int>>()));
        } else {
            throw PreconditionError("unknown step kind " + kind);
        }
    }
    return c;
}

/// Random strong certificate: handles of length in [beta, beta + 3] between
/// random nonadjacent vertices until the next handle would pass max_vertices.
inline BuildCertificate random_strong_certificate(int beta, int max_vertices, std::uint64_t seed)
{
    BuildCertificate c;
    c.beta = beta;
    c.mode = BuildMode::strong;
    c.base = {0, 1};
    int n = 2;
    std::vector<std::vector<char>> adj(2, std::vector<char>(2, 0));
    std::uint64_t draw = 0;
    auto rnd = [&](std::uint64_t mod) { return hash_combine(seed, draw++) % mod; };
    for (int attempts = 0; attempts < 200; ++attempts) {
        int len = beta + static_cast<int>(rnd(4));
        if (n + len - 1 > max_vertices)
            break;
        int a = static_cast<int>(rnd(n));
        int b = static_cast<int>(rnd(n));
        if (a == b || adj[a][b])
            continue;
        std::vector<int> path{a};
        for (int k = 1; k < len; ++k)
            path.push_back(n + k - 1);
        path.push_back(b);
        n += len - 1;
        for (auto & row : adj)
            row.resize(n, 0);
        adj.resize(n, std::vector<char>(n, 0));
        for (std::size_t k = 0; k + 1 < path.size(); ++k)
            adj[path[k]][path[k + 1]] = adj[path[k + 1]][path[k]] = 1;
        c.steps.push_back(BuildStep::handle(std::move(path)));
    }
    c.vertex_count = n;
    return c;
}

}  // namespace purepairs
