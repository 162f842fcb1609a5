#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "graph.hpp"
#include "maxflow.hpp"

namespace purepairs {

enum class CongestionMethod { exhaustive, parametric_cut };

struct CongestionResult {
    Rational value = 0;
    Rational gamma = 0;
    std::optional<VertexSet> witness;           // vertex set of J
    std::vector<std::pair<int, int>> witness_edges;  // E(J): all edges of g inside the witness
};

struct DensityResult {
    Rational gamma;
    VertexSet witness;
};

inline std::int64_t edges_inside(const Graph & g, const VertexSet & s)
{
    std::int64_t e = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            e += g.adjacent(s[i], s[j]);
    return e;
}

/// |E(S)| / (|S| - 1) for |S| >= 2.
inline Rational density_of(const Graph & g, const VertexSet & s)
{
    if (s.size() < 2)
        throw PreconditionError("density needs at least two vertices");
    return Rational(edges_inside(g, s), static_cast<std::int64_t>(s.size()) - 1);
}

inline constexpr int default_exhaustive_limit = 16;

/// Maximum density over vertex subsets by enumeration; ties go to the
/// lexicographically smallest vertex set.
inline DensityResult max_density_exhaustive(const Graph & g, int limit = default_exhaustive_limit)
{
    int n = g.n();
    if (n > limit)
        throw PreconditionError("exhaustive congestion limited to n <= " + std::to_string(limit));
    if (g.edge_count() == 0)
        throw PreconditionError("graph has no edge");
    std::vector<std::uint32_t> adj(n, 0);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (g.adjacent(u, v))
                adj[u] |= 1u << v;
    std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
    std::vector<std::int32_t> e(static_cast<std::size_t>(full) + 1, 0);
    std::int64_t best_e = 0, best_k = 1;
    VertexSet best;
    auto as_set = [](std::uint32_t m) {
        VertexSet s;
        for (; m; m &= m - 1)
            s.push_back(std::countr_zero(m));
        return s;
    };
    for (std::uint32_t m = 1; m <= full && m != 0; ++m) {
        int low = std::countr_zero(m);
        std::uint32_t rest = m & (m - 1);
        e[m] = e[rest] + std::popcount(adj[low] & rest);
        int k = std::popcount(m) - 1;
        if (k < 1 || e[m] == 0)
            continue;
        // e/k compared with best_e/best_k
        std::int64_t lhs = static_cast<std::int64_t>(e[m]) * best_k;
        std::int64_t rhs = best_e * k;
        if (lhs > rhs) {
            best_e = e[m];
            best_k = k;
            best = as_set(m);
        } else if (lhs == rhs) {
            VertexSet s = as_set(m);
            if (s < best)
                best = std::move(s);
        }
        if (m == full)
            break;
    }
    return {Rational(best_e, best_k), best};
}

namespace detail {

/// Finds S with |E(S)| - q(|S|-1) > 0 for q = a/b, or nothing. Uses one
/// closure min-cut per forced vertex.
inline std::optional<VertexSet> denser_than(const Graph & g, std::int64_t a, std::int64_t b)
{
    int n = g.n();
    auto es = g.edges();
    std::int64_t m = static_cast<std::int64_t>(es.size());
    int source = 0, sink = 1, base_e = 2, base_v = 2 + static_cast<int>(m);
    for (int v = 0; v < n; ++v) {
        MaxFlow f(base_v + n);
        for (std::int64_t i = 0; i < m; ++i) {
            int node = base_e + static_cast<int>(i);
            f.add_edge(source, node, b);
            f.add_edge(node, base_v + es[i].first, MaxFlow::inf);
            f.add_edge(node, base_v + es[i].second, MaxFlow::inf);
        }
        for (int u = 0; u < n; ++u)
            f.add_edge(base_v + u, sink, a);
        f.add_edge(source, base_v + v, MaxFlow::inf);
        std::int64_t cut = f.run(source, sink);
        // best closure value b e(S) - a|S| equals b m - cut
        if (b * m - cut + a > 0) {
            auto side = f.source_side(source);
            VertexSet s;
            for (int u = 0; u < n; ++u)
                if (side[base_v + u])
                    s.push_back(u);
            if (s.size() >= 2 && Rational(edges_inside(g, s), static_cast<std::int64_t>(s.size()) - 1) > Rational(a, b))
                return s;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Maximum density via binary search on a closure min-cut oracle. The search
/// runs on a grid of step 1/(2(n-1)(n-2)), fine enough to separate any two
/// distinct densities, and the answer is read off the last witness.
inline DensityResult max_density_parametric(const Graph & g)
{
    int n = g.n();
    auto es = g.edges();
    if (es.empty())
        throw PreconditionError("graph has no edge");
    VertexSet best{es.front().first, es.front().second};
    std::sort(best.begin(), best.end());
    Rational lo = 1;
    if (n <= 2)
        return {lo, best};
    std::int64_t den = 2LL * (n - 1) * (n - 2);
    Rational hi = static_cast<std::int64_t>(es.size());
    while (hi - lo >= Rational(2, den)) {
        Rational mid = Rational(floor_rational((lo + hi) * den / 2), den);
        auto num = boost::multiprecision::numerator(mid);
        auto dd = boost::multiprecision::denominator(mid);
        auto s = detail::denser_than(g, static_cast<std::int64_t>(num), static_cast<std::int64_t>(dd));
        if (s) {
            best = *s;
            lo = density_of(g, best);
        } else {
            hi = mid;
        }
    }
    auto num = boost::multiprecision::numerator(lo);
    auto dd = boost::multiprecision::denominator(lo);
    if (detail::denser_than(g, static_cast<std::int64_t>(num), static_cast<std::int64_t>(dd)))
        throw CertificationFailure("parametric density search did not converge");
    return {lo, best};
}

inline DensityResult max_density(const Graph & g, CongestionMethod method = CongestionMethod::parametric_cut,
                                 int limit = default_exhaustive_limit)
{
    return method == CongestionMethod::exhaustive ? max_density_exhaustive(g, limit) : max_density_parametric(g);
}

inline CongestionResult congestion(const Graph & g, CongestionMethod method = CongestionMethod::parametric_cut,
                                   int limit = default_exhaustive_limit)
{
    if (method == CongestionMethod::exhaustive && g.n() > limit)
        throw PreconditionError("exhaustive congestion limited to n <= " + std::to_string(limit));
    CongestionResult r;
    if (g.edge_count() == 0)
        return r;
    DensityResult d = max_density(g, method, limit);
    r.gamma = d.gamma;
    r.value = 1 - 1 / d.gamma;
    r.witness = d.witness;
    for (std::size_t i = 0; i < d.witness.size(); ++i)
        for (std::size_t j = i + 1; j < d.witness.size(); ++j)
            if (g.adjacent(d.witness[i], d.witness[j]))
                r.witness_edges.emplace_back(d.witness[i], d.witness[j]);
    return r;
}

/// Congestion of the subgraph (witness vertices, witness edges) recomputed from scratch.
inline Rational congestion_of_witness(const CongestionResult & r)
{
    if (!r.witness || r.witness_edges.empty())
        return 0;
    return 1 - Rational(static_cast<std::int64_t>(r.witness->size()) - 1, static_cast<std::int64_t>(r.witness_edges.size()));
}

}  // namespace purepairs
