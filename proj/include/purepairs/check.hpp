#pragma once

// Independent invariant checkers. They rely only on Graph::adjacent and plain
// loops so that a bug in a constructor cannot hide behind shared helpers.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "purepairs/blockade.hpp"
#include "purepairs/structures.hpp"

namespace purepairs::check {

using Problem = std::optional<std::string>;

namespace detail {

inline bool any_edge(const Graph & g, const VertexSet & a, const VertexSet & b)
{
    for (int x : a)
        for (int y : b)
            if (x != y && g.adjacent(x, y))
                return true;
    return false;
}

// every vertex of b has a neighbour in a
inline bool covers(const Graph & g, const VertexSet & a, const VertexSet & b)
{
    for (int y : b) {
        bool hit = false;
        for (int x : a)
            if (g.adjacent(x, y)) {
                hit = true;
                break;
            }
        if (!hit)
            return false;
    }
    return true;
}

inline bool subset(const VertexSet & a, const VertexSet & b)
{
    std::set<int> s(b.begin(), b.end());
    for (int x : a)
        if (!s.count(x))
            return false;
    return true;
}

inline VertexSet join(const std::vector<VertexSet> & parts, std::size_t from, std::size_t to)
{
    std::set<int> s;
    for (std::size_t i = from; i < to && i < parts.size(); ++i)
        s.insert(parts[i].begin(), parts[i].end());
    return VertexSet(s.begin(), s.end());
}

inline std::vector<VertexSet> vertex_sets(const std::vector<TaggedBlock> & blocks)
{
    std::vector<VertexSet> out;
    for (const auto & b : blocks)
        out.push_back(b.vertices);
    return out;
}

}  // namespace detail

/// min_height 0 admits the single-layer (apex only) sequence that a grading
/// built on a height-1 levelling leaves behind.
inline Problem levelling(const Graph & g, const std::vector<VertexSet> & layers, int min_height = 1)
{
    if (layers.empty() || static_cast<int>(layers.size()) < min_height + 1)
        return "levelling is too short";
    if (layers[0].size() != 1)
        return "L_0 must be a single vertex";
    std::set<int> seen;
    for (std::size_t i = 0; i < layers.size(); ++i)
        for (int v : layers[i]) {
            if (v < 0 || v >= g.n())
                return "layer " + std::to_string(i) + " has a vertex outside the graph";
            if (!seen.insert(v).second)
                return "layers are not disjoint (vertex " + std::to_string(v) + ")";
        }
    for (std::size_t i = 1; i < layers.size(); ++i) {
        if (!detail::covers(g, layers[i - 1], layers[i]))
            return "L_" + std::to_string(i - 1) + " does not cover L_" + std::to_string(i);
        if (i >= 2 && detail::any_edge(g, detail::join(layers, 0, i - 1), layers[i]))
            return "L_" + std::to_string(i) + " has a neighbour in an earlier non-adjacent layer";
    }
    return std::nullopt;
}

inline Problem levelling(const Graph & g, const Levelling & l) { return levelling(g, l.layers); }

/// (L_0, ..., L_k, c) is a levelling.
inline Problem reaches(const Graph & g, const Levelling & l, const VertexSet & c)
{
    auto layers = l.layers;
    layers.push_back(c);
    if (auto p = levelling(g, layers, 1))
        return "does not reach: " + *p;
    return std::nullopt;
}

/// Each set lies inside one block of a, and no block holds two of the sets.
inline Problem rainbow(const Blockade & a, const std::vector<VertexSet> & sets)
{
    std::set<int> used;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        if (sets[s].empty())
            return "set " + std::to_string(s) + " is empty";
        int owner = -1;
        for (int p = 0; p < a.length(); ++p)
            if (detail::subset(sets[s], a.at(p)))
                owner = a.index_at(p);
        if (owner < 0)
            return "set " + std::to_string(s) + " is not inside a single block";
        if (!used.insert(owner).second)
            return "block " + std::to_string(owner) + " holds two sets";
    }
    return std::nullopt;
}

/// Some subset of base covers blocks[g..] and misses blocks[..g-1], for every
/// position g (forward), or covers blocks[..g] and misses blocks[g+1..]
/// (backward). Existence is decided by taking the largest candidate: base
/// vertices anticomplete to the blocks that must be missed.
inline Problem grades(const Graph & g, const VertexSet & base, const std::vector<VertexSet> & blocks, bool forward,
                      const std::vector<VertexSet> * witnesses = nullptr)
{
    const std::size_t n = blocks.size();
    for (std::size_t pos = 0; pos < n; ++pos) {
        VertexSet miss = forward ? detail::join(blocks, 0, pos) : detail::join(blocks, pos + 1, n);
        VertexSet hit = forward ? detail::join(blocks, pos, n) : detail::join(blocks, 0, pos + 1);
        VertexSet best;
        for (int y : base)
            if (!detail::any_edge(g, {y}, miss))
                best.push_back(y);
        if (!detail::covers(g, best, hit))
            return "no witness for position " + std::to_string(pos);
        if (witnesses) {
            if (witnesses->size() != n)
                return "witness count differs from block count";
            const auto & w = (*witnesses)[pos];
            if (!detail::subset(w, base))
                return "witness " + std::to_string(pos) + " is not inside the base";
            if (!detail::covers(g, w, hit) || detail::any_edge(g, w, miss))
                return "stated witness " + std::to_string(pos) + " is wrong";
        }
    }
    return std::nullopt;
}

inline Problem grading(const Graph & g, const Grading & gr)
{
    if (auto p = levelling(g, gr.lev.layers, 0))
        return p;
    auto sets = detail::vertex_sets(gr.blocks);
    for (std::size_t i = 0; i < sets.size(); ++i)
        if (sets[i].empty())
            return "graded block " + std::to_string(i) + " is empty";
    if (auto p = reaches(g, gr.lev, detail::join(sets, 0, sets.size())))
        return p;
    return grades(g, gr.lev.base(), sets, true, &gr.witnesses);
}

/// Full bi-levelling (or bi-grading) check; rainbow against a when given.
inline Problem bilevelling(const Graph & g, const BiLevelling & b, const Blockade * a = nullptr)
{
    if (auto p = levelling(g, b.l))
        return "L: " + *p;
    if (auto p = levelling(g, b.m))
        return "M: " + *p;
    if (b.l.layers[0] != b.m.layers[0])
        return "L and M have different apexes";
    VertexSet lrest = detail::join(b.l.layers, 1, b.l.layers.size());
    VertexSet mrest = detail::join(b.m.layers, 1, b.m.layers.size());
    for (int x : lrest)
        if (std::find(mrest.begin(), mrest.end(), x) != mrest.end())
            return "L and M layers intersect";
    if (detail::any_edge(g, lrest, mrest))
        return "L and M layers are not anticomplete";
    auto sets = detail::vertex_sets(b.blocks);
    if (sets.empty())
        return "no blocks";
    VertexSet all = detail::join(sets, 0, sets.size());
    std::size_t total = 0;
    for (const auto & s : sets) {
        if (s.empty())
            return "empty block";
        total += s.size();
    }
    if (total != all.size())
        return "blocks overlap";
    if (auto p = reaches(g, b.l, all))
        return "L " + *p;
    if (auto p = reaches(g, b.m, all))
        return "M " + *p;
    if (auto p = grades(g, b.l.base(), sets, true, b.forward.empty() ? nullptr : &b.forward))
        return "L forward grading: " + *p;
    if (b.bigrading)
        if (auto p = grades(g, b.m.base(), sets, false, b.backward.empty() ? nullptr : &b.backward))
            return "M backward grading: " + *p;
    if (a) {
        std::vector<VertexSet> parts = sets;
        for (const auto & layer : b.l.layers)
            parts.push_back(layer);
        for (std::size_t i = 1; i < b.m.layers.size(); ++i)
            parts.push_back(b.m.layers[i]);
        if (auto p = rainbow(*a, parts))
            return "not rainbow: " + *p;
        for (const auto & t : b.blocks)
            if (!a->has_index(t.index) || !detail::subset(t.vertices, a->block(t.index)))
                return "block tag does not match the ambient blockade";
    }
    return std::nullopt;
}

inline Problem induced_path(const Graph & g, const std::vector<int> & path)
{
    std::set<int> s(path.begin(), path.end());
    if (s.size() != path.size())
        return "repeated vertex";
    for (std::size_t i = 0; i < path.size(); ++i)
        for (std::size_t j = i + 1; j < path.size(); ++j) {
            bool edge = g.adjacent(path[i], path[j]);
            if (edge != (j == i + 1))
                return "pair " + std::to_string(i) + "," + std::to_string(j) + " breaks the induced path";
        }
    return std::nullopt;
}

inline Problem induced_cycle(const Graph & g, const std::vector<int> & cyc)
{
    const std::size_t n = cyc.size();
    if (n < 3)
        return "cycle needs at least 3 vertices";
    std::set<int> s(cyc.begin(), cyc.end());
    if (s.size() != n)
        return "repeated vertex";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            bool consecutive = j == i + 1 || (i == 0 && j == n - 1);
            if (g.adjacent(cyc[i], cyc[j]) != consecutive)
                return "pair " + std::to_string(i) + "," + std::to_string(j) + " breaks the induced cycle";
        }
    return std::nullopt;
}

/// tau-expansion by brute force over every subset; blocks must be small.
inline Problem expanding(const Blockade & b, const Rational & tau)
{
    const Graph & g = b.host();
    for (int p = 0; p < b.length(); ++p)
        for (int q = 0; q < b.length(); ++q) {
            if (p == q)
                continue;
            const auto & bi = b.at(p);
            const auto & bj = b.at(q);
            if (bi.size() > 20)
                return "block too large for brute force";
            for (std::uint32_t mask = 1; mask < (1u << bi.size()); ++mask) {
                VertexSet x;
                for (std::size_t k = 0; k < bi.size(); ++k)
                    if ((mask >> k) & 1u)
                        x.push_back(bi[k]);
                std::int64_t hit = 0;
                for (int y : bj)
                    hit += detail::any_edge(g, x, {y});
                Rational lhs(hit, static_cast<std::int64_t>(bj.size()));
                Rational need = tau * static_cast<std::int64_t>(x.size()) / static_cast<std::int64_t>(bi.size());
                if (lhs < std::min(need, Rational(1, 4)))
                    return "blocks " + std::to_string(b.index_at(p)) + "->" + std::to_string(b.index_at(q)) +
                           " fail expansion";
            }
        }
    return std::nullopt;
}

}  // namespace purepairs::check
