#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "graph.hpp"

namespace purepairs {

enum class PairKind { complete, anticomplete };

inline const char * to_string(PairKind k) { return k == PairKind::complete ? "complete" : "anticomplete"; }

struct PurePair {
    VertexSet a;
    VertexSet b;
    PairKind kind = PairKind::anticomplete;
};

inline bool is_pure_pair(const Graph & g, const PurePair & p)
{
    if (p.a.empty() || p.b.empty() || !disjoint(p.a, p.b))
        return false;
    for (int u : p.a)
        for (int v : p.b)
            if (g.adjacent(u, v) != (p.kind == PairKind::complete))
                return false;
    return true;
}

struct PairSearch {
    Verdict verdict = Verdict::absent;
    std::optional<PurePair> pair;
    std::uint64_t nodes = 0;
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline Bits bits_of(const VertexSet & s, int words)
{
    Bits b(words, 0);
    for (int v : s)
        b[v >> 6] |= std::uint64_t{1} << (v & 63);
    return b;
}

inline int popcount(const Bits & b)
{
    int c = 0;
    for (auto w : b)
        c += std::popcount(w);
    return c;
}

inline VertexSet members(const Bits & b)
{
    VertexSet out;
    for (std::size_t w = 0; w < b.size(); ++w) {
        auto bits = b[w];
        while (bits) {
            out.push_back(static_cast<int>(w * 64) + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return out;
}

struct AnticompleteSearch {
    const Graph & g;
    VertexSet pool;  // candidates for A
    std::size_t x;
    std::size_t y;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool exhausted = false;
    VertexSet chosen{};
    std::optional<PurePair> found{};

    // r: vertices of the B-side pool not in A and not adjacent to A.
    bool run(std::size_t start, const Bits & r)
    {
        if (++nodes > budget) {
            exhausted = true;
            return true;
        }
        if (static_cast<std::size_t>(popcount(r)) < y)
            return false;
        if (chosen.size() == x) {
            found = PurePair{chosen, members(r), PairKind::anticomplete};
            return true;
        }
        for (std::size_t i = start; i + (x - chosen.size()) <= pool.size(); ++i) {
            int v = pool[i];
            Bits next = r;
            const auto * row = g.row(v);
            for (std::size_t w = 0; w < next.size(); ++w)
                next[w] &= ~row[w];
            next[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
            chosen.push_back(v);
            bool stop = run(i + 1, next);
            chosen.pop_back();
            if (stop)
                return true;
        }
        return false;
    }
};

}  // namespace detail

/// Exact search for anticomplete A ⊆ p, B ⊆ q with |A| ≥ x and |B| ≥ y, A and
/// B disjoint. A is enumerated as x-subsets of p in increasing index order and
/// B is everything in q left non-adjacent to A.
inline PairSearch find_anticomplete_between(const Graph & g, const VertexSet & p, const VertexSet & q, std::size_t x,
                                            std::size_t y, std::uint64_t budget)
{
    if (budget == 0)
        throw PreconditionError("budget must be positive");
    if (x == 0 || y == 0)
        throw PreconditionError("pair sizes must be at least 1");
    detail::AnticompleteSearch s{g, p, x, y, budget};
    s.run(0, detail::bits_of(q, g.words()));
    PairSearch out;
    out.nodes = s.nodes;
    if (s.found) {
        out.verdict = Verdict::found;
        out.pair = s.found;
    } else {
        out.verdict = s.exhausted ? Verdict::inconclusive : Verdict::absent;
    }
    return out;
}

inline VertexSet all_vertices(const Graph & g)
{
    VertexSet s(g.n());
    for (int v = 0; v < g.n(); ++v)
        s[v] = v;
    return s;
}

inline PairSearch find_anticomplete_pair(const Graph & g, std::size_t a_min, std::size_t b_min, std::uint64_t budget)
{
    VertexSet all = all_vertices(g);
    return find_anticomplete_between(g, all, all, a_min, b_min, budget);
}

/// Pure pair with both sides of size at least t, in g or in its complement.
inline PairSearch find_pure_pair(const Graph & g, std::size_t t, std::uint64_t budget)
{
    if (t == 0)
        throw PreconditionError("t must be at least 1");
    PairSearch anti = find_anticomplete_pair(g, t, t, budget);
    if (anti.verdict == Verdict::found)
        return anti;
    PairSearch comp = find_anticomplete_pair(complement(g), t, t, budget);
    comp.nodes += anti.nodes;
    if (comp.verdict == Verdict::found) {
        comp.pair->kind = PairKind::complete;
        return comp;
    }
    if (anti.verdict == Verdict::inconclusive)
        comp.verdict = Verdict::inconclusive;
    return comp;
}

}  // namespace purepairs
