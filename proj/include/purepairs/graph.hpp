#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "common.hpp"

namespace purepairs {

/// Finite simple undirected graph on vertices 0..n-1 with bitset adjacency rows.
class Graph {
public:
    Graph() = default;

    explicit Graph(int n) : n_(n), words_((n + 63) / 64), rows_(static_cast<std::size_t>(n) * words_, 0)
    {
        if (n < 0)
            throw PreconditionError("negative vertex count");
    }

    int n() const { return n_; }
    int words() const { return words_; }

    bool adjacent(int u, int v) const
    {
        return (row(u)[v >> 6] >> (v & 63)) & 1u;
    }

    void add_edge(int u, int v)
    {
        check_vertex(u);
        check_vertex(v);
        if (u == v)
            throw PreconditionError("loop at vertex " + std::to_string(u));
        row_mut(u)[v >> 6] |= std::uint64_t{1} << (v & 63);
        row_mut(v)[u >> 6] |= std::uint64_t{1} << (u & 63);
    }

    void remove_edge(int u, int v)
    {
        row_mut(u)[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
        row_mut(v)[u >> 6] &= ~(std::uint64_t{1} << (u & 63));
    }

    const std::uint64_t * row(int u) const { return rows_.data() + static_cast<std::size_t>(u) * words_; }

    int degree(int u) const
    {
        int d = 0;
        const auto * r = row(u);
        for (int w = 0; w < words_; ++w)
            d += std::popcount(r[w]);
        return d;
    }

    int max_degree() const
    {
        int d = 0;
        for (int v = 0; v < n_; ++v)
            d = std::max(d, degree(v));
        return d;
    }

    std::int64_t edge_count() const
    {
        std::int64_t s = 0;
        for (int v = 0; v < n_; ++v)
            s += degree(v);
        return s / 2;
    }

    VertexSet neighbours(int u) const
    {
        VertexSet out;
        const auto * r = row(u);
        for (int w = 0; w < words_; ++w) {
            std::uint64_t bits = r[w];
            while (bits) {
                out.push_back(w * 64 + std::countr_zero(bits));
                bits &= bits - 1;
            }
        }
        return out;
    }

    /// Number of neighbours of u inside s.
    int degree_into(int u, const VertexSet & s) const
    {
        int d = 0;
        for (int v : s)
            d += adjacent(u, v);
        return d;
    }

    bool has_neighbour_in(int u, const VertexSet & s) const
    {
        for (int v : s)
            if (adjacent(u, v))
                return true;
        return false;
    }

    /// Vertices of `within` with a neighbour in `from`.
    VertexSet neighbourhood_in(const VertexSet & from, const VertexSet & within) const
    {
        VertexSet out;
        for (int v : within)
            if (has_neighbour_in(v, from))
                out.push_back(v);
        return out;
    }

    std::vector<std::pair<int, int>> edges() const
    {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n_; ++u)
            for (int v : neighbours(u))
                if (u < v)
                    out.emplace_back(u, v);
        return out;
    }

    Graph induced(const VertexSet & s) const
    {
        Graph h(static_cast<int>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (adjacent(s[i], s[j]))
                    h.add_edge(static_cast<int>(i), static_cast<int>(j));
        return h;
    }

    bool operator==(const Graph & o) const { return n_ == o.n_ && rows_ == o.rows_; }

    void check_vertex(int v) const
    {
        if (v < 0 || v >= n_)
            throw PreconditionError("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n_));
    }

private:
    std::uint64_t * row_mut(int u) { return rows_.data() + static_cast<std::size_t>(u) * words_; }

    int n_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> rows_;
};

inline Graph complement(const Graph & g)
{
    Graph h(g.n());
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (!g.adjacent(u, v))
                h.add_edge(u, v);
    return h;
}

inline Graph from_edges(int n, const std::vector<std::pair<int, int>> & es)
{
    Graph g(n);
    for (auto [u, v] : es)
        g.add_edge(u, v);
    return g;
}

inline Graph edgeless_graph(int n) { return Graph(n); }

/// Path with n vertices (length n-1).
inline Graph path_graph(int n)
{
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(i, i + 1);
    return g;
}

inline Graph cycle_graph(int n)
{
    if (n < 3)
        throw PreconditionError("cycle needs at least 3 vertices");
    Graph g = path_graph(n);
    g.add_edge(n - 1, 0);
    return g;
}

inline Graph complete_graph(int n)
{
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            g.add_edge(u, v);
    return g;
}

inline Graph complete_bipartite(int a, int b)
{
    Graph g(a + b);
    for (int u = 0; u < a; ++u)
        for (int v = a; v < a + b; ++v)
            g.add_edge(u, v);
    return g;
}

inline Graph petersen_graph()
{
    Graph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
}

inline Graph disjoint_union(const Graph & a, const Graph & b)
{
    Graph g(a.n() + b.n());
    for (auto [u, v] : a.edges())
        g.add_edge(u, v);
    for (auto [u, v] : b.edges())
        g.add_edge(a.n() + u, a.n() + v);
    return g;
}

inline bool is_sparse(const Graph & g, const Rational & eps)
{
    if (eps <= 0)
        throw PreconditionError("eps must be positive");
    return Rational(g.max_degree()) < eps * g.n();
}

inline bool is_forest(const Graph & g)
{
    std::vector<int> parent(g.n());
    for (int v = 0; v < g.n(); ++v)
        parent[v] = v;
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : g.edges()) {
        int a = find(u), b = find(v);
        if (a == b)
            return false;
        parent[a] = b;
    }
    return true;
}

inline bool is_connected(const Graph & g, const VertexSet & s)
{
    if (s.empty())
        return true;
    std::vector<char> seen(g.n(), 0), in(g.n(), 0);
    for (int v : s)
        in[v] = 1;
    std::vector<int> stack{s.front()};
    seen[s.front()] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : g.neighbours(u))
            if (in[v] && !seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == s.size();
}

/// Counter-based mixing of a seed and a stream position.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) derived from (seed, index).
inline double unit_from(std::uint64_t seed, std::uint64_t index)
{
    return static_cast<double>(hash_combine(seed, index) >> 11) * 0x1.0p-53;
}

/// G(n, p): pair {u < v} is an edge iff the draw keyed on its index is below p.
inline Graph gnp(int n, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw PreconditionError("p must lie in [0, 1]");
    Graph g(n);
    std::uint64_t idx = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++idx)
            if (unit_from(seed, idx) < p)
                g.add_edge(u, v);
    return g;
}

}  // namespace purepairs
