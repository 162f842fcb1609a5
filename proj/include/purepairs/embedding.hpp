#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "graph.hpp"

namespace purepairs {

/// Injective map from pattern vertices to host vertices.
struct Embedding {
    std::vector<int> map;

    bool operator==(const Embedding &) const = default;
};

/// Independent check: injective and adjacency preserved both ways.
inline bool is_induced_embedding(const Graph & g, const Graph & h, const std::vector<int> & map)
{
    if (static_cast<int>(map.size()) != h.n())
        return false;
    std::vector<char> used(g.n(), 0);
    for (int x : map) {
        if (x < 0 || x >= g.n() || used[x])
            return false;
        used[x] = 1;
    }
    for (int u = 0; u < h.n(); ++u)
        for (int v = u + 1; v < h.n(); ++v)
            if (h.adjacent(u, v) != g.adjacent(map[u], map[v]))
                return false;
    return true;
}

/// Extra per-assignment filter used by constrained searches: (pattern vertex,
/// host vertex, partial map with -1 for unassigned) -> allowed.
using EmbedFilter = std::function<bool(int, int, const std::vector<int> &)>;

namespace detail {

/// Pattern vertex order: repeatedly take the unplaced vertex with most
/// already-placed neighbours, then highest degree, then smallest index.
inline std::vector<int> pattern_order(const Graph & h)
{
    std::vector<int> order;
    std::vector<char> placed(h.n(), 0);
    for (int step = 0; step < h.n(); ++step) {
        int best = -1, best_conn = -1, best_deg = -1;
        for (int v = 0; v < h.n(); ++v) {
            if (placed[v])
                continue;
            int conn = 0;
            for (int u : order)
                conn += h.adjacent(u, v);
            int deg = h.degree(v);
            if (conn > best_conn || (conn == best_conn && deg > best_deg)) {
                best = v;
                best_conn = conn;
                best_deg = deg;
            }
        }
        placed[best] = 1;
        order.push_back(best);
    }
    return order;
}

struct EmbedSearch {
    const Graph & g;
    const Graph & h;
    const EmbedFilter * filter;
    std::vector<int> order;
    std::vector<int> map;
    std::vector<char> used;
    std::function<bool(const std::vector<int> &)> visit;

    bool run(std::size_t depth)
    {
        if (depth == order.size())
            return visit(map);
        int p = order[depth];
        for (int x = 0; x < g.n(); ++x) {
            if (used[x] || g.degree(x) < h.degree(p))
                continue;
            bool ok = true;
            for (std::size_t k = 0; k < depth && ok; ++k) {
                int q = order[k];
                ok = h.adjacent(p, q) == g.adjacent(x, map[q]);
            }
            if (!ok)
                continue;
            if (filter && !(*filter)(p, x, map))
                continue;
            map[p] = x;
            used[x] = 1;
            bool stop = run(depth + 1);
            used[x] = 0;
            map[p] = -1;
            if (stop)
                return true;
        }
        return false;
    }
};

}  // namespace detail

/// Calls `visit` on every induced embedding of h into g until it returns true.
/// Returns whether the enumeration was stopped.
inline bool for_each_embedding(const Graph & g, const Graph & h, const std::function<bool(const std::vector<int> &)> & visit,
                               const EmbedFilter * filter = nullptr)
{
    if (h.n() > g.n())
        return false;
    detail::EmbedSearch s{g, h, filter, detail::pattern_order(h), std::vector<int>(h.n(), -1), std::vector<char>(g.n(), 0), visit};
    return s.run(0);
}

/// First induced embedding of h into g in search order, if any.
inline std::optional<Embedding> contains(const Graph & g, const Graph & h, const EmbedFilter * filter = nullptr)
{
    std::optional<Embedding> out;
    for_each_embedding(g, h, [&](const std::vector<int> & m) {
        out = Embedding{m};
        return true;
    }, filter);
    return out;
}

inline bool are_isomorphic(const Graph & a, const Graph & b)
{
    return a.n() == b.n() && a.edge_count() == b.edge_count() && contains(a, b).has_value();
}

}  // namespace purepairs
