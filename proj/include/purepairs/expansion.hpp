#pragma once

#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "purepairs/blockade.hpp"

namespace purepairs {

/// Raised when a construction runs into an anticomplete pair that its
/// non-divergence hypothesis rules out. Carries the pair.
class DivergenceWitness : public HypothesisViolation {
public:
    DivergenceWitness(std::string condition, int i, int j, VertexSet x, VertexSet y)
        : HypothesisViolation(std::move(condition), "anticomplete X in block " + std::to_string(i) + " (" +
                                                        std::to_string(x.size()) + " vertices), Y in block " +
                                                        std::to_string(j) + " (" + std::to_string(y.size()) + ")"),
          i(i), j(j), x(std::move(x)), y(std::move(y))
    {
    }

    int i;
    int j;
    VertexSet x;
    VertexSet y;
};

enum class ExpansionVerdict { pass, fail, sampled_pass };

inline const char * to_string(ExpansionVerdict v)
{
    switch (v) {
    case ExpansionVerdict::pass: return "pass";
    case ExpansionVerdict::fail: return "fail";
    case ExpansionVerdict::sampled_pass: return "sampled-pass";
    }
    return "?";
}

struct ExpansionCheck {
    ExpansionVerdict verdict = ExpansionVerdict::pass;
    int i = -1;  // block indices of the first violation
    int j = -1;
    VertexSet witness;
    std::uint64_t samples = 0;
};

namespace detail {

inline Bits bits_into(const Graph & g, int v, const VertexSet & target)
{
    Bits b((target.size() + 63) / 64, 0);
    for (std::size_t k = 0; k < target.size(); ++k)
        if (g.adjacent(v, target[k]))
            b[k / 64] |= std::uint64_t{1} << (k % 64);
    return b;
}

// need[x] = least |N(X) ∩ B_j| that an x-subset of B_i must reach.
inline std::vector<std::int64_t> expansion_need(const Rational & tau, std::size_t si, std::size_t sj)
{
    std::vector<std::int64_t> need(si + 1);
    auto cap = static_cast<std::int64_t>(ceil_rational(Rational(static_cast<std::int64_t>(sj), 4)));
    for (std::size_t x = 0; x <= si; ++x) {
        Rational t = tau * static_cast<std::int64_t>(x) * static_cast<std::int64_t>(sj) / static_cast<std::int64_t>(si);
        BigInt c = ceil_rational(t);
        need[x] = c >= cap ? cap : static_cast<std::int64_t>(c);
    }
    return need;
}

}  // namespace detail

/// Tests whether every X ⊆ B_i reaches min(tau|X|/|B_i|, 1/4) of every other
/// block. Blocks up to `exhaustive_limit` are enumerated; larger ones are
/// probed with all singletons plus `samples` random subsets.
inline ExpansionCheck check_expanding(const Blockade & b, const Rational & tau, int exhaustive_limit = 12,
                                      std::uint64_t seed = 0, std::uint64_t samples = 4096)
{
    if (tau < 0)
        throw PreconditionError("tau must be non-negative");
    if (exhaustive_limit > 24)
        throw PreconditionError("exhaustive limit above 24 is impractical");
    const Graph & g = b.host();
    ExpansionCheck out;
    bool sampled = false;
    for (int p = 0; p < b.length(); ++p)
        for (int q = 0; q < b.length(); ++q) {
            if (p == q)
                continue;
            const auto & bi = b.at(p);
            const auto & bj = b.at(q);
            auto need = detail::expansion_need(tau, bi.size(), bj.size());
            std::vector<detail::Bits> single;
            for (int v : bi)
                single.push_back(detail::bits_into(g, v, bj));
            auto fail = [&](const std::vector<std::size_t> & members) {
                out.verdict = ExpansionVerdict::fail;
                out.i = b.index_at(p);
                out.j = b.index_at(q);
                for (auto k : members)
                    out.witness.push_back(bi[k]);
                return out;
            };
            if (static_cast<int>(bi.size()) <= exhaustive_limit) {
                std::size_t full = std::size_t{1} << bi.size();
                std::vector<detail::Bits> nb(full, detail::Bits(single.empty() ? 0 : single[0].size(), 0));
                for (std::size_t mask = 1; mask < full; ++mask) {
                    std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
                    const auto & prev = nb[mask & (mask - 1)];
                    auto & cur = nb[mask];
                    for (std::size_t w = 0; w < cur.size(); ++w)
                        cur[w] = prev[w] | single[low][w];
                    if (detail::popcount(cur) < need[static_cast<std::size_t>(std::popcount(mask))]) {
                        std::vector<std::size_t> members;
                        for (std::size_t k = 0; k < bi.size(); ++k)
                            if ((mask >> k) & 1u)
                                members.push_back(k);
                        return fail(members);
                    }
                }
                continue;
            }
            sampled = true;
            for (std::size_t k = 0; k < bi.size(); ++k) {
                ++out.samples;
                if (detail::popcount(single[k]) < need[1])
                    return fail({k});
            }
            std::uint64_t pair_seed = hash_combine(hash_combine(seed, static_cast<std::uint64_t>(p)), static_cast<std::uint64_t>(q));
            for (std::uint64_t s = 0; s < samples; ++s) {
                ++out.samples;
                std::uint64_t h = hash_combine(pair_seed, s);
                std::size_t size = 1 + h % bi.size();
                std::vector<std::size_t> order(bi.size());
                for (std::size_t k = 0; k < order.size(); ++k)
                    order[k] = k;
                for (std::size_t k = 0; k < size; ++k) {
                    std::size_t r = k + hash_combine(h, k) % (order.size() - k);
                    std::swap(order[k], order[r]);
                }
                std::vector<std::size_t> members(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
                detail::Bits acc(single[0].size(), 0);
                for (auto k : members)
                    for (std::size_t w = 0; w < acc.size(); ++w)
                        acc[w] |= single[k][w];
                if (detail::popcount(acc) < need[size]) {
                    std::sort(members.begin(), members.end());
                    return fail(members);
                }
            }
        }
    out.verdict = sampled ? ExpansionVerdict::sampled_pass : ExpansionVerdict::pass;
    return out;
}

struct ExpandingContraction {
    Blockade contraction;
    Rational tau;
    std::map<std::pair<int, int>, VertexSet> z;  // Z_{i,j} by block indices, nonempty entries only
    ExpansionCheck final_check;
    int rounds = 0;
};

/// Grows the sets Z_{i,j} ⊆ A_i by violating witnesses of (1/(4δ))-expansion
/// until the contraction (A_i \ Z_i) expands. Strict mode checks δK <= 1/4
/// and refutes (δ, 1/8)-divergence exhaustively first.
inline ExpandingContraction expanding_contraction(const Blockade & a, const Rational & delta, Mode mode = Mode::strict,
                                                  std::uint64_t budget = 1u << 24, int exhaustive_limit = 12,
                                                  std::uint64_t seed = 0)
{
    const int k = a.length();
    if (k < 2)
        throw PreconditionError("expanding contraction needs at least two blocks");
    if (delta <= 0 || delta > 1)
        throw PreconditionError("delta must lie in (0, 1]");
    if (mode == Mode::strict) {
        if (delta * k > Rational(1, 4))
            throw HypothesisViolation("delta*K <= 1/4", "delta*K = " + to_string(delta * k));
        auto d = is_divergent(a, delta, Rational(1, 8), budget);
        if (d.verdict == Verdict::inconclusive)
            throw InconclusiveSearch("(delta, 1/8)-divergence search exhausted its budget");
        if (d.verdict == Verdict::found)
            throw DivergenceWitness("not (delta, 1/8)-divergent", d.i, d.j, d.x, d.y);
    }
    const Graph & g = a.host();
    const Rational tau = 1 / (4 * delta);
    std::vector<std::vector<VertexSet>> z(k, std::vector<VertexSet>(k));
    auto zi = [&](int p) {
        VertexSet all;
        for (int q = 0; q < k; ++q)
            all = set_union(all, z[p][q]);
        return all;
    };
    auto good = [&]() -> std::optional<std::string> {
        std::vector<VertexSet> zs(k);
        for (int p = 0; p < k; ++p)
            zs[p] = zi(p);
        for (int p = 0; p < k; ++p)
            for (int q = 0; q < k; ++q) {
                if (p == q)
                    continue;
                auto ai = static_cast<std::int64_t>(a.at(p).size());
                auto aj = static_cast<std::int64_t>(a.at(q).size());
                auto zij = static_cast<std::int64_t>(z[p][q].size());
                if (!(Rational(zij, ai) < delta))
                    return "|Z_ij| < delta |A_i| fails";
                VertexSet rest = set_difference(a.at(q), zs[q]);
                std::int64_t y = 0;
                for (int w : rest)
                    y += g.has_neighbour_in(w, z[p][q]);
                if (Rational(y, aj) * 3 * delta * ai > zij)
                    return "|Y_ij|/|A_j| <= |Z_ij|/(3 delta |A_i|) fails";
            }
        return std::nullopt;
    };
    auto contraction = [&]() {
        std::vector<VertexSet> blocks;
        for (int p = 0; p < k; ++p) {
            blocks.push_back(set_difference(a.at(p), zi(p)));
            if (blocks.back().empty())
                throw StageFailure("expansion", "block " + std::to_string(a.index_at(p)) + " was emptied");
        }
        return a.contract(a.indices(), blocks);
    };
    int rounds = 0;
    while (true) {
        Blockade b = contraction();
        auto chk = check_expanding(b, tau, exhaustive_limit, seed);
        if (chk.verdict != ExpansionVerdict::fail) {
            ExpandingContraction out{b, tau, {}, chk, rounds};
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q)
                    if (!z[p][q].empty())
                        out.z[{a.index_at(p), a.index_at(q)}] = z[p][q];
            if (mode == Mode::strict)
                for (int p = 0; p < k; ++p)
                    if (Rational(static_cast<std::int64_t>(b.at(p).size()), static_cast<std::int64_t>(a.at(p).size())) <
                        1 - delta * k)
                        throw CertificationFailure("contraction lost more than delta*K of a block");
            return out;
        }
        ++rounds;
        int p = a.position_of(chk.i), q = a.position_of(chk.j);
        VertexSet grown = set_union(z[p][q], chk.witness);
        auto ai = static_cast<std::int64_t>(a.at(p).size());
        if (!(Rational(static_cast<std::int64_t>(grown.size()), ai) < delta)) {
            VertexSet free;
            for (int w : a.at(q))
                if (!g.has_neighbour_in(w, grown))
                    free.push_back(w);
            if (Rational(static_cast<std::int64_t>(free.size()), static_cast<std::int64_t>(a.at(q).size())) >=
                Rational(1, 8))
                throw DivergenceWitness("not (delta, 1/8)-divergent", chk.i, chk.j, grown, free);
            if (mode == Mode::strict)
                throw CertificationFailure("maximal good choice met a non-expanding set without a divergent pair");
            throw StageFailure("expansion", "good choice cannot absorb a violating set");
        }
        z[p][q] = grown;
        if (auto bad = good()) {
            if (mode == Mode::strict)
                throw CertificationFailure("good choice broken after augmentation: " + *bad);
            throw StageFailure("expansion", *bad);
        }
    }
}

struct RainbowPathFailure : StageFailure {
    RainbowPathFailure(int layer, const std::string & detail)
        : StageFailure("rainbow-path", "layer " + std::to_string(layer) + ": " + detail), layer(layer)
    {
    }
    int layer;
};

/// Induced path v = p_0, ..., p_r with one vertex per block of `contraction`,
/// ending in y. Blocks are walked in the order i1, the remaining indices
/// ascending, i2; layer t is N(layer t-1) inside the t-th block.
inline std::vector<int> rainbow_path(const Blockade & a, const Blockade & contraction, int i1, Vertex v, int i2,
                                     const VertexSet & y, const Rational & gamma, const Rational & delta,
                                     Mode mode = Mode::relaxed)
{
    if (i1 == i2 || !contraction.has_index(i1) || !contraction.has_index(i2))
        throw PreconditionError("rainbow path needs two distinct block indices of the contraction");
    if (!contains_vertex(contraction.block(i1), v))
        throw PreconditionError("v must lie in block i1 of the contraction");
    if (!std::includes(contraction.block(i2).begin(), contraction.block(i2).end(), y.begin(), y.end()))
        throw PreconditionError("Y must lie in block i2 of the contraction");
    for (int p = 0; p < contraction.length(); ++p)
        if (!a.has_index(contraction.index_at(p)) ||
            !std::includes(a.block(contraction.index_at(p)).begin(), a.block(contraction.index_at(p)).end(),
                           contraction.at(p).begin(), contraction.at(p).end()))
            throw PreconditionError("contraction is not a contraction of a");
    const int rho = contraction.length();
    if (mode == Mode::strict) {
        if (gamma > Rational(1, 8))
            throw HypothesisViolation("gamma <= 1/8");
        if (Rational(static_cast<std::int64_t>(y.size())) < gamma * static_cast<std::int64_t>(a.block(i2).size()))
            throw HypothesisViolation("|Y| >= gamma |A_i2|");
        Rational lhs = 1;
        for (int r = 0; r < rho; ++r)
            lhs *= 4 * delta;
        if (lhs * a.host().n() > 3)
            throw HypothesisViolation("(4 delta)^rho |G| <= 3");
    }
    const Graph & g = a.host();
    std::vector<int> order{i1};
    for (int idx : contraction.indices())
        if (idx != i1 && idx != i2)
            order.push_back(idx);
    order.push_back(i2);
    std::vector<VertexSet> layer{{v}};
    for (std::size_t t = 1; t < order.size(); ++t) {
        VertexSet next = g.neighbourhood_in(layer.back(), contraction.block(order[t]));
        if (t + 1 == order.size())
            next = set_intersection(next, y);
        if (next.empty())
            throw RainbowPathFailure(static_cast<int>(t), t + 1 == order.size() ? "no vertex of Y reached"
                                                                                : "no neighbour in the next block");
        layer.push_back(next);
    }
    // backtrack one vertex per layer, then shortcut to an induced path
    std::vector<int> walk{layer.back().front()};
    for (std::size_t t = layer.size() - 1; t > 0; --t) {
        int cur = walk.back();
        for (int w : layer[t - 1])
            if (g.adjacent(cur, w)) {
                walk.push_back(w);
                break;
            }
    }
    std::reverse(walk.begin(), walk.end());
    // BFS inside the walk's vertex set from v to the end vertex
    const std::size_t n = walk.size();
    std::vector<int> prev(n, -1);
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (std::size_t nx = 0; nx < n; ++nx)
            if (!seen[nx] && g.adjacent(walk[cur], walk[nx])) {
                seen[nx] = 1;
                prev[nx] = static_cast<int>(cur);
                queue.push_back(nx);
            }
    }
    std::vector<int> path;
    for (int at = static_cast<int>(n - 1); at >= 0; at = prev[static_cast<std::size_t>(at)])
        path.push_back(walk[static_cast<std::size_t>(at)]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace purepairs
