#pragma once

#include <map>
#include <vector>

#include "purepairs/blockade.hpp"

namespace purepairs {

/// coef * n^exp for a fixed graph order n; kept symbolic so that |G|^c stays exact.
struct Scaled {
    Rational coef = 1;
    Rational exp = 0;
};

namespace detail {

/// sign of r - s.coef * n^s.exp
inline int compare_scaled(const Rational & r, const Scaled & s, std::int64_t n)
{
    if (s.coef <= 0)
        return r > 0 ? 1 : (r < 0 ? -1 : 0);
    if (r <= 0)
        return -1;
    return compare_with_power(r / s.coef, n, s.exp);
}

inline BigInt ipow(std::int64_t base, int e)
{
    return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
}

}  // namespace detail

struct SelectivePart {
    VertexSet x;
    std::vector<int> j;  // block indices, ascending
};

struct SelectiveCoverOutcome {
    enum class Kind { partition, pair } kind = Kind::pair;
    std::vector<SelectivePart> parts;  // partition variant: nonempty parts only
    SelectivePart pair;                // pair variant
    Rational eps;                      // the epsilon the bounds were checked against
    bool bounds_hold = false;          // stated inequalities re-verified exactly
    int absorbed = 0;                  // vertices committed before the pair was found
};

/// Augments disjoint pairs (X(J), Y(J)) over all k-subsets J of the block
/// indices, one vertex of a_set at a time. Either every vertex is absorbed
/// (a partition into at most K^k parts, each sparse to k blocks) or some
/// vertex overflows a Y(J), giving X with
///     n^-c alpha <= |N(X) ∩ B_i|/|B_i| < K^k alpha + eps   for i in J.
/// Relaxed mode skips the degree and length preconditions, widens eps to the
/// measured max-degree ratio when needed, and reports rather than enforces the
/// final bounds.
inline SelectiveCoverOutcome selective_cover(const VertexSet & a_set, const Blockade & b, int k, const Rational & c,
                                             const Scaled & alpha, const Rational & eps, Mode mode = Mode::strict)
{
    const Graph & g = b.host();
    const int K = b.length();
    const std::int64_t n = g.n();
    if (k < 1 || k > K)
        throw PreconditionError("need 1 <= k <= K");
    if (c <= 0 || eps <= 0 || alpha.coef <= 0)
        throw PreconditionError("c, eps and alpha must be positive");
    if (a_set.empty())
        throw PreconditionError("a_set is empty and covers nothing");
    const VertexSet vb = b.vertices();
    if (!disjoint(a_set, vb))
        throw PreconditionError("a_set meets the blockade");
    for (int y : vb)
        if (!g.has_neighbour_in(y, a_set))
            throw PreconditionError("a_set does not cover vertex " + std::to_string(y));
    Rational e = eps;
    for (int p = 0; p < K; ++p) {
        const auto bs = static_cast<std::int64_t>(b.at(p).size());
        const Rational deg(max_degree_between(g, a_set, b.at(p)), bs);
        if (deg >= e) {
            if (mode == Mode::strict)
                throw PreconditionError("max-degree into block " + std::to_string(b.index_at(p)) + " is not below eps");
            e = deg + Rational(1, bs);
        }
    }
    if (mode == Mode::strict && Rational(K) < (2 + 1 / c) * (k - 1))
        throw PreconditionError("K < (2 + 1/c)(k - 1)");

    const BigInt kk = detail::ipow(K, k);  // K^k
    SelectiveCoverOutcome out;
    out.eps = e;
    std::map<std::vector<int>, std::pair<VertexSet, VertexSet>> xy;  // J -> (X(J), Y(J))
    VertexSet y_all;
    auto ratio_below_alpha = [&](std::int64_t cnt, std::int64_t size) {
        return detail::compare_scaled(Rational(cnt, size), alpha, n) < 0;
    };

    for (int a : a_set) {
        std::vector<std::pair<Rational, int>> order;  // (n_i/|B_i|, position)
        std::vector<VertexSet> nb(static_cast<std::size_t>(K));
        for (int p = 0; p < K; ++p) {
            for (int w : b.at(p))
                if (g.adjacent(a, w) && !contains_vertex(y_all, w))
                    nb[static_cast<std::size_t>(p)].push_back(w);
            order.emplace_back(Rational(static_cast<std::int64_t>(nb[static_cast<std::size_t>(p)].size()),
                                        static_cast<std::int64_t>(b.at(p).size())),
                               p);
        }
        std::stable_sort(order.begin(), order.end(), [](const auto & x, const auto & y) { return x.first < y.first; });
        auto index_set = [&](int from, int to) {  // sorted positions from..to (1-based, inclusive)
            std::vector<int> js;
            for (int q = from; q <= to; ++q)
                js.push_back(b.index_at(order[static_cast<std::size_t>(q - 1)].second));
            std::sort(js.begin(), js.end());
            return js;
        };
        if (order[static_cast<std::size_t>(k - 1)].first == 0) {
            auto & slot = xy[index_set(1, k)];
            slot.first.push_back(a);
            ++out.absorbed;
            continue;
        }
        int lo = 1;
        if (k > 1) {
            int t = 0;
            for (int tt = 1; tt * (k - 1) + 1 <= K; ++tt) {
                const Rational r = order[static_cast<std::size_t>(tt * (k - 1))].first;
                if (compare_with_power(r, n, -1 + (tt - 1) * c) >= 0)
                    t = tt;
            }
            lo = t * (k - 1) + 1;
            if (t == 0 || (t + 1) * (k - 1) + 1 > K) {
                if (mode == Mode::strict)
                    throw CertificationFailure("selective window runs past the last block");
                lo = K - k + 1;
            }
        }
        const std::vector<int> js = index_set(lo, lo + k - 1);
        auto & slot = xy[js];
        VertexSet y_new = slot.second;
        for (int j : js)
            y_new = set_union(y_new, nb[static_cast<std::size_t>(b.position_of(j))]);
        bool fits = true;
        for (int j : js) {
            const auto cnt = static_cast<std::int64_t>(set_intersection(y_new, b.block(j)).size());
            if (!ratio_below_alpha(cnt, static_cast<std::int64_t>(b.block(j).size())))
                fits = false;
        }
        if (fits) {
            slot.first.push_back(a);
            y_all = set_union(y_all, set_difference(y_new, slot.second));
            slot.second = y_new;
            ++out.absorbed;
            continue;
        }
        out.kind = SelectiveCoverOutcome::Kind::pair;
        out.pair.x = set_union(slot.first, {a});
        out.pair.j = js;
        const Scaled lower{alpha.coef, alpha.exp - c};
        out.bounds_hold = true;
        for (int j : js) {
            const auto bs = static_cast<std::int64_t>(b.block(j).size());
            const Rational r(static_cast<std::int64_t>(g.neighbourhood_in(out.pair.x, b.block(j)).size()), bs);
            const Scaled upper{alpha.coef * Rational(kk), alpha.exp};
            if (detail::compare_scaled(r, lower, n) < 0 || detail::compare_scaled(r - e, upper, n) >= 0)
                out.bounds_hold = false;
        }
        if (!out.bounds_hold && mode == Mode::strict)
            throw CertificationFailure("selective pair violates its density bounds");
        return out;
    }

    out.kind = SelectiveCoverOutcome::Kind::partition;
    out.bounds_hold = true;
    const Scaled cap{alpha.coef * Rational(kk), alpha.exp};
    for (auto & [js, slot] : xy) {
        if (slot.first.empty())
            continue;
        for (int j : js) {
            const auto bs = static_cast<std::int64_t>(b.block(j).size());
            const Rational r(static_cast<std::int64_t>(g.neighbourhood_in(slot.first, b.block(j)).size()), bs);
            if (detail::compare_scaled(r, cap, n) >= 0)
                out.bounds_hold = false;
        }
        out.parts.push_back({slot.first, js});
    }
    if (!out.bounds_hold && mode == Mode::strict)
        throw CertificationFailure("partition part is not sparse to its blocks");
    return out;
}

}  // namespace purepairs
