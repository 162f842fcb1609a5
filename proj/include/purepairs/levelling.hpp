#pragma once

#include <map>
#include <optional>
#include <vector>

#include "purepairs/check.hpp"
#include "purepairs/expansion.hpp"
#include "purepairs/structures.hpp"

namespace purepairs {

struct LevellingResult {
    std::vector<int> j_set;          // ascending
    Levelling lev;                   // L_0..L_k; the base is the union of the C_j
    std::vector<int> layer_blocks;   // h_0..h_{k-1}, block index of each non-base layer
    std::map<int, VertexSet> c;      // C_j = L_k ∩ B_j for j in j_set
    int t = 0;                       // height reached by the greedy phase
    std::vector<Rational> m;         // m_1..m_t
};

namespace detail {

inline bool fraction_at_least(std::int64_t num, std::int64_t den, const Rational & q)
{
    return Rational(num, den) >= q;
}

inline std::int64_t count_with_neighbour(const Graph & g, const VertexSet & block, const VertexSet & from)
{
    std::int64_t c = 0;
    for (int w : block)
        c += g.has_neighbour_in(w, from);
    return c;
}

inline std::int64_t sz(const VertexSet & s) { return static_cast<std::int64_t>(s.size()); }

}  // namespace detail

/// Greedy max-ratio layer growth from apex v through the blocks of h_set,
/// then the choice of k and of the blocks J reached at the k-th layer.
/// tau is the expansion constant of (B_i : i != h0); x = 2/tau sets the
/// stopping ratio.
inline LevellingResult build_levelling(const Blockade & b, const std::vector<int> & h_set, int h0, Vertex v, int rho,
                                       const Rational & tau, Mode mode = Mode::strict)
{
    const Graph & g = b.host();
    std::vector<int> hs = h_set;
    std::sort(hs.begin(), hs.end());
    if (std::adjacent_find(hs.begin(), hs.end()) != hs.end())
        throw PreconditionError("h_set has repeated indices");
    for (int h : hs)
        if (!b.has_index(h))
            throw PreconditionError("h_set index " + std::to_string(h) + " is not a block");
    if (static_cast<int>(hs.size()) != rho)
        throw PreconditionError("|h_set| must equal rho");
    if (!std::binary_search(hs.begin(), hs.end(), h0))
        throw PreconditionError("h0 must belong to h_set");
    if (!contains_vertex(b.block(h0), v))
        throw PreconditionError("v must lie in block h0");
    if (tau <= 0)
        throw PreconditionError("tau must be positive");
    bool touches = false;
    for (int h : hs)
        if (h != h0 && g.has_neighbour_in(v, b.block(h)))
            touches = true;
    if (!touches)
        throw PreconditionError("v has no neighbour in the other h_set blocks");
    if (mode == Mode::strict) {
        if (tau < 6)
            throw HypothesisViolation("tau >= 6", "tau = " + to_string(tau));
        if (compare_with_power(tau / 2, g.n(), Rational(1, rho - 1)) < 0)
            throw HypothesisViolation("(tau/2)^(rho-1) >= |G|");
        std::vector<int> rest;
        for (int i : b.indices())
            if (i != h0)
                rest.push_back(i);
        if (rest.size() >= 2) {
            auto chk = check_expanding(b.sub(rest), tau);
            if (chk.verdict == ExpansionVerdict::fail)
                throw HypothesisViolation("(B_i : i != h0) is tau-expanding",
                                          "blocks " + std::to_string(chk.i) + " -> " + std::to_string(chk.j));
            if (chk.verdict == ExpansionVerdict::sampled_pass)
                throw InconclusiveSearch("expansion only verified by sampling");
        }
    }
    const Rational x = 2 / tau;
    LevellingResult out;
    std::vector<VertexSet> layers{{v}};
    std::vector<int> used{h0};
    auto unused = [&](int h) { return std::find(used.begin(), used.end(), h) == used.end(); };
    while (true) {
        const std::size_t i = layers.size() - 1;
        if (i >= 1 && detail::fraction_at_least(detail::sz(layers[i]), detail::sz(b.block(used[i])), x / 2))
            break;
        int best = -1;
        Rational best_ratio = -1;
        for (int h : hs) {
            if (!unused(h))
                continue;
            Rational r(detail::count_with_neighbour(g, b.block(h), layers[i]), detail::sz(b.block(h)));
            if (r > best_ratio) {
                best_ratio = r;
                best = h;
            }
        }
        if (best < 0) {
            if (mode == Mode::strict)
                throw CertificationFailure("levelling ran out of h_set blocks before reaching ratio x/2");
            break;
        }
        VertexSet earlier;
        for (std::size_t q = 0; q + 1 < layers.size(); ++q)
            earlier = set_union(earlier, layers[q]);
        VertexSet next;
        for (int w : b.block(best))
            if (g.has_neighbour_in(w, layers[i]) && !g.has_neighbour_in(w, earlier))
                next.push_back(w);
        if (next.empty()) {
            if (mode == Mode::strict)
                throw CertificationFailure("levelling produced an empty layer");
            break;
        }
        if (mode == Mode::strict) {
            Rational sum = 0;
            for (const auto & mm : out.m)
                sum += mm;
            if (x * best_ratio < sum ||
                Rational(detail::sz(next), detail::sz(b.block(best))) < (1 - x) * best_ratio)
                throw CertificationFailure("m-bookkeeping inequality failed at layer " + std::to_string(i + 1));
        }
        out.m.push_back(best_ratio);
        layers.push_back(next);
        used.push_back(best);
    }
    const int t = static_cast<int>(layers.size()) - 1;
    out.t = t;
    std::vector<int> outside;
    for (int i : b.indices())
        if (!std::binary_search(hs.begin(), hs.end(), i))
            outside.push_back(i);
    if (outside.empty())
        throw StageFailure("levelling", "no block outside h_set");
    const auto rest = static_cast<std::int64_t>(outside.size());
    // prefix[i] = L_0 ∪ ... ∪ L_i
    std::vector<VertexSet> prefix;
    for (const auto & l : layers)
        prefix.push_back(prefix.empty() ? l : set_union(prefix.back(), l));
    auto reached = [&](int j, int upto) {
        return upto < 0 ? std::int64_t{0} : detail::count_with_neighbour(g, b.block(j), prefix[static_cast<std::size_t>(upto)]);
    };
    int k = -1;
    for (int kk = 1; kk <= t + 1 && k < 0; ++kk) {
        std::int64_t n_km1 = 0;
        for (int j : outside)
            n_km1 += reached(j, kk - 1) * 4 * (t + 1) >= kk * detail::sz(b.block(j));
        if (n_km1 * (t + 1) >= kk * rest)
            k = kk;
    }
    if (k < 0)
        throw StageFailure("levelling", "no admissible k: the layers reach too little of the outside blocks");
    for (int j : outside) {
        std::int64_t bj = detail::sz(b.block(j));
        if (reached(j, k - 1) * 4 * (t + 1) >= k * bj && reached(j, k - 2) * 4 * (t + 1) <= (k - 1) * bj)
            out.j_set.push_back(j);
    }
    VertexSet base;
    for (int j : out.j_set) {
        VertexSet cj;
        for (int w : b.block(j))
            if (g.has_neighbour_in(w, prefix[static_cast<std::size_t>(k - 1)]) &&
                (k < 2 || !g.has_neighbour_in(w, prefix[static_cast<std::size_t>(k - 2)])))
                cj.push_back(w);
        out.c[j] = cj;
        base = set_union(base, cj);
    }
    out.lev.layers.assign(layers.begin(), layers.begin() + k);
    out.lev.layers.push_back(base);
    out.layer_blocks.assign(used.begin(), used.begin() + k);

    // postconditions, re-verified by the independent checker
    if (auto p = check::levelling(g, out.lev))
        throw CertificationFailure("levelling invalid: " + *p);
    if (Rational(detail::sz(out.j_set)) < Rational(b.length(), rho) - 1)
        throw CertificationFailure("|J| below |I|/rho - 1");
    for (int j : out.j_set)
        if (Rational(detail::sz(out.c[j])) * 4 * rho < detail::sz(b.block(j)))
            throw CertificationFailure("|L_k ∩ B_j| below |B_j|/(4 rho)");
    std::vector<VertexSet> upper(out.lev.layers.begin(), out.lev.layers.end() - 1);
    if (auto p = check::rainbow(b.sub(hs), upper))
        throw CertificationFailure("levelling not rainbow in h_set: " + *p);
    return out;
}

struct GradingResult {
    std::vector<int> j_set;   // ascending
    Grading grading;          // blocks in grading order
    LevellingResult levelling;
    std::vector<VertexSet> y;  // Y_1 ⊆ ... ⊆ Y_n in construction order
    bool truncated = false;    // relaxed: stopped early once no Y_i could reach a fresh block
};

/// Grading of sub-blocks C_j ⊆ B_j by the levelling's upper layers: nested
/// Y_1 ⊆ ... ⊆ Y_n inside L_{k-1}, each grown minimally until it reaches
/// i|B_j|/(4 rho n) of some not yet chosen block.
inline GradingResult build_grading(const Blockade & b, const std::vector<int> & h_set, int h0, Vertex v, int rho,
                                   const Rational & tau, Mode mode = Mode::strict)
{
    const Graph & g = b.host();
    const std::int64_t len = b.length();
    if (mode == Mode::strict) {
        if (linkage(b) > Rational(1, 8 * len))
            throw PreconditionError("linkage exceeds 1/(8|I|): " + to_string(linkage(b)));
        auto chk = check_expanding(b, tau);
        if (chk.verdict == ExpansionVerdict::fail)
            throw HypothesisViolation("blockade is tau-expanding");
        if (chk.verdict == ExpansionVerdict::sampled_pass)
            throw InconclusiveSearch("expansion only verified by sampling");
    }
    GradingResult out;
    out.levelling = build_levelling(b, h_set, h0, v, rho, tau, mode);
    const auto & lev = out.levelling.lev;
    const int k = lev.height();
    const std::int64_t n = static_cast<std::int64_t>(ceil_rational(Rational(len, rho))) - 1;
    if (n < 1)
        throw StageFailure("grading", "ceil(|I|/rho) - 1 is zero: nothing to grade");
    if (static_cast<std::int64_t>(out.levelling.j_set.size()) < n)
        throw CertificationFailure("levelling returned fewer than ceil(|I|/rho) - 1 blocks");
    std::vector<int> js(out.levelling.j_set.begin(), out.levelling.j_set.begin() + n);
    const VertexSet & upper = lev.layers[static_cast<std::size_t>(k - 1)];
    const VertexSet & base = lev.base();
    std::vector<int> remaining = js;
    std::vector<int> order;  // j_1..j_n
    VertexSet prev;
    for (std::int64_t i = 1; i <= n; ++i) {
        auto meets = [&](const VertexSet & y) -> int {
            VertexSet reach = g.neighbourhood_in(y, base);
            for (int j : remaining) {
                auto cnt = detail::sz(set_intersection(reach, b.block(j)));
                if (mode == Mode::strict ? cnt * 4 * rho * n < i * detail::sz(b.block(j)) : cnt == 0)
                    continue;
                if (mode == Mode::strict)
                    return j;
                // relaxed: only blocks that gain a vertex not already seen by Y_{i-1}
                for (int w : set_intersection(reach, b.block(j)))
                    if (!g.has_neighbour_in(w, prev))
                        return j;
            }
            return -1;
        };
        VertexSet y = prev;
        VertexSet added;
        for (int u : upper) {
            if (meets(y) >= 0)
                break;
            if (contains_vertex(y, u))
                continue;
            y = set_union(y, {u});
            added.push_back(u);
        }
        if (meets(y) < 0) {
            if (mode == Mode::strict)
                throw CertificationFailure("no Y_i reaches the required share of any remaining block");
            if (i > 1) {
                out.truncated = true;
                break;
            }
            throw StageFailure("grading", "Y_" + std::to_string(i) + " cannot be grown");
        }
        for (int u : added) {
            VertexSet trial = set_difference(y, {u});
            if (meets(trial) >= 0)
                y = trial;
        }
        int j = meets(y);
        VertexSet cj;
        for (int w : set_intersection(b.block(j), base))
            if (g.has_neighbour_in(w, y) && !g.has_neighbour_in(w, prev))
                cj.push_back(w);
        if (cj.empty()) {
            if (mode == Mode::strict)
                throw CertificationFailure("empty graded block");
            throw StageFailure("grading", "graded block " + std::to_string(j) + " is empty");
        }
        if (mode == Mode::strict && Rational(detail::sz(cj)) * 8 * len < detail::sz(b.block(j)))
            throw CertificationFailure("|C_j| below |B_j|/(8|I|)");
        out.y.push_back(y);
        order.push_back(j);
        remaining.erase(std::find(remaining.begin(), remaining.end(), j));
        out.grading.blocks.push_back({j, cj});
        prev = y;
    }
    std::reverse(out.grading.blocks.begin(), out.grading.blocks.end());
    out.grading.witnesses.assign(out.y.rbegin(), out.y.rend());
    out.grading.lev.layers.assign(lev.layers.begin(), lev.layers.end() - 1);
    out.j_set = out.truncated ? order : js;
    std::sort(out.j_set.begin(), out.j_set.end());
    if (auto p = check::grading(g, out.grading))
        throw CertificationFailure("grading invalid: " + *p);
    return out;
}

/// Induced path x = m_m, ..., m_1, apex, l_1, ..., l_k = y climbing each
/// levelling by smallest-index neighbours.
inline std::vector<int> connecting_path(const Graph & g, const BiLevelling & bl, Vertex x, Vertex y)
{
    if (auto p = check::bilevelling(g, bl))
        throw PreconditionError("structure is not a bi-levelling: " + *p);
    if (!contains_vertex(bl.m.base(), x) || !contains_vertex(bl.l.base(), y))
        throw PreconditionError("x must lie in the base of M and y in the base of L");
    auto climb = [&](const Levelling & lev, Vertex from) {
        std::vector<int> up{from};
        for (int i = lev.height() - 1; i >= 0; --i) {
            int next = -1;
            for (int w : lev.layers[static_cast<std::size_t>(i)])
                if (g.adjacent(up.back(), w)) {
                    next = w;
                    break;
                }
            if (next < 0)
                throw CertificationFailure("levelling layer does not cover the next one");
            up.push_back(next);
        }
        return up;
    };
    auto down = climb(bl.m, x);
    auto up = climb(bl.l, y);
    std::vector<int> path(down.begin(), down.end());
    for (auto it = up.rbegin() + 1; it != up.rend(); ++it)
        path.push_back(*it);
    if (auto p = check::induced_path(g, path))
        throw CertificationFailure("connecting path is not induced: " + *p);
    const VertexSet blocks = bl.block_vertices();
    for (std::size_t i = 1; i + 1 < path.size(); ++i)
        if (g.has_neighbour_in(path[i], blocks))
            throw CertificationFailure("connecting path has an interior vertex touching a block");
    if (static_cast<int>(path.size()) - 1 != bl.height())
        throw CertificationFailure("connecting path length differs from the height");
    return path;
}

}  // namespace purepairs
