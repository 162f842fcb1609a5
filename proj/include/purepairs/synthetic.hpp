#pragma once

// Seeded instance generators for desk-scale runs of the blockade machinery.

#include <memory>

#include "purepairs/blockade.hpp"

namespace purepairs {

/// k blocks of `size` vertices. Cross-block pairs are edges with probability
/// `dense`, except that each vertex is "weak" with probability `weak_rate`
/// and then keeps its cross edges only with probability `sparse`. No edges
/// inside blocks.
inline Blockade defective_blockade(int k, int size, std::uint64_t seed, double dense = 0.92, double weak_rate = 0.15,
                                   double sparse = 0.1)
{
    if (k < 1 || size < 1)
        throw PreconditionError("defective blockade needs k, size >= 1");
    const int n = k * size;
    std::vector<char> weak(n);
    for (int v = 0; v < n; ++v)
        weak[v] = unit_from(hash_combine(seed, 1), static_cast<std::uint64_t>(v)) < weak_rate;
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (u / size == v / size)
                continue;
            double p = (weak[u] || weak[v]) ? sparse : dense;
            if (unit_from(hash_combine(seed, 2), static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) +
                                                    static_cast<std::uint64_t>(v)) < p)
                g.add_edge(u, v);
        }
    return equipartition(std::make_shared<const Graph>(std::move(g)), k);
}

/// A defective blockade patched until it is not (gamma, delta)-divergent:
/// while the exhaustive search finds an anticomplete pair, join its
/// highest-degree members. Weak vertices therefore tend to survive.
inline Blockade nondivergent_blockade(int k, int size, std::uint64_t seed, const Rational & gamma,
                                      const Rational & delta, double weak_rate = 0.15)
{
    Blockade b = defective_blockade(k, size, seed, 0.92, weak_rate, 0.1);
    Graph g = b.host();
    while (true) {
        Blockade cur(std::make_shared<const Graph>(g), b.indices(), b.blocks());
        auto d = is_divergent(cur, gamma, delta, std::uint64_t{1} << 26);
        if (d.verdict == Verdict::absent)
            return cur;
        if (d.verdict == Verdict::inconclusive)
            throw InconclusiveSearch("divergence search exhausted while patching a synthetic blockade");
        auto pick = [&](const VertexSet & s) {
            return *std::max_element(s.begin(), s.end(), [&](int x, int y) { return g.degree(x) < g.degree(y); });
        };
        g.add_edge(pick(d.x), pick(d.y));
    }
}

/// k blocks of `size` vertices; every cross-block pair is an edge with
/// probability p (no edges inside blocks).
inline Blockade random_blockade(int k, int size, double p, std::uint64_t seed)
{
    return defective_blockade(k, size, seed, p, 0.0, p);
}

/// k blocks of `size` vertices; between every two blocks the union of `degree`
/// seeded random perfect matchings. Low linkage with good small-set expansion.
inline Blockade matching_blockade(int k, int size, int degree, std::uint64_t seed)
{
    if (k < 1 || size < 1 || degree < 0)
        throw PreconditionError("matching blockade needs k, size >= 1 and degree >= 0");
    Graph g(k * size);
    std::vector<int> perm(static_cast<std::size_t>(size));
    std::uint64_t draw = 0;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            for (int d = 0; d < degree; ++d) {
                for (int i = 0; i < size; ++i)
                    perm[static_cast<std::size_t>(i)] = i;
                for (int i = size - 1; i > 0; --i) {
                    auto r = static_cast<int>(unit_from(hash_combine(seed, 3), draw++) * (i + 1));
                    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(std::min(r, i))]);
                }
                for (int i = 0; i < size; ++i)
                    g.add_edge(a * size + i, b * size + perm[static_cast<std::size_t>(i)]);
            }
    return equipartition(std::make_shared<const Graph>(std::move(g)), k);
}

}  // namespace purepairs
