#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "purepairs/levelling.hpp"

namespace purepairs {

struct BilevelParams {
    Rational gamma;
    Rational delta;
    std::optional<int> max_height;  // the ell cap; unset means 3 rho - 3
    bool keep_all = false;          // keep every block of the winning type, not just k
};

/// Everything the construction touched, kept for audit and replay.
struct BilevelRun {
    BiLevelling result;
    int rho = 0;
    Vertex u = -1;            // apex of the grading levelling
    Vertex v = -1;            // far end of the short path, apex of M
    Vertex w = -1;            // shared apex of the result
    std::vector<int> path;    // P = (u, ..., v)
    std::pair<int, int> type{0, 0};
    std::vector<int> h1, h2, h3, j1, j2, j3;
    Blockade expanded;        // A minus Z
    Blockade contracted;      // D over j1
    GradingResult grading;
    LevellingResult m_levelling;
    bool shortpath_ok = false;
    std::vector<std::string> fallbacks;  // relaxed-mode stages that kept their input uncontracted
};

namespace detail {

inline std::vector<int> smallest(const std::vector<int> & from, std::size_t n)
{
    std::vector<int> s = from;
    std::sort(s.begin(), s.end());
    if (s.size() > n)
        s.resize(n);
    return s;
}

/// Shortest induced path from `from`, one vertex per block of `blocks` (the
/// block of `from` excluded), whose last vertex satisfies `stop` and whose
/// other vertices do not. Lexicographically smallest among the shortest.
inline std::optional<std::vector<int>> short_rainbow_path(const Graph & g, Vertex from,
                                                          const std::vector<VertexSet> & blocks,
                                                          const std::function<bool(Vertex)> & stop)
{
    if (stop(from))
        return std::vector<int>{from};
    std::vector<int> path{from};
    std::vector<char> used(blocks.size(), 0);
    std::function<bool(std::size_t)> extend = [&](std::size_t target) -> bool {
        if (path.size() == target)
            return stop(path.back());
        if (stop(path.back()))
            return false;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (used[b])
                continue;
            used[b] = 1;
            for (int x : blocks[b]) {
                if (!g.adjacent(path.back(), x))
                    continue;
                bool chord = false;
                for (std::size_t i = 0; i + 1 < path.size() && !chord; ++i)
                    chord = g.adjacent(path[i], x);
                if (chord)
                    continue;
                path.push_back(x);
                if (extend(target))
                    return true;
                path.pop_back();
            }
            used[b] = 0;
        }
        return false;
    };
    for (std::size_t len = 2; len <= blocks.size() + 1; ++len)
        if (extend(len))
            return path;
    return std::nullopt;
}

inline Vertex first_neighbour(const Graph & g, Vertex x, const VertexSet & in)
{
    for (int y : in)
        if (g.adjacent(x, y))
            return y;
    return -1;
}

}  // namespace detail

/// A-rainbow bi-levelling of length k: expand, grade from a vertex u, reach
/// the graded blocks from u by a short rainbow path P to v, level from v,
/// then bucket the surviving vertices by where their climb back to u first
/// meets P.
inline BilevelRun build_bilevelling(const Blockade & a, int k, const Rational & c, const BilevelParams & prm,
                                    Mode mode = Mode::strict)
{
    const Graph & g = a.host();
    if (k < 1)
        throw PreconditionError("length k must be at least 1");
    if (c <= 0)
        throw PreconditionError("c must be positive");
    if (prm.gamma <= 0 || prm.delta <= 0 || prm.delta > 1)
        throw PreconditionError("gamma must be positive and delta in (0, 1]");
    const int rho = static_cast<int>(ceil_rational(1 + 1 / c));
    const std::int64_t K = a.length();
    if (mode == Mode::strict) {
        const std::int64_t need = static_cast<std::int64_t>(k) * rho * rho * rho * rho;
        if (K < need)
            throw HypothesisViolation("length K >= k rho^4", "K = " + std::to_string(K) + " < " + std::to_string(need));
        const Rational lam = linkage(a);
        if (lam > Rational(1, 512 * rho * rho * K))
            throw HypothesisViolation("lambda <= 1/(512 rho^2 K)", "linkage = " + to_string(lam));
        if (prm.gamma > Rational(3, 256 * K))
            throw HypothesisViolation("gamma <= 3/(256 K)");
        if (prm.delta > Rational(3 * rho, 128 * K * K))
            throw HypothesisViolation("delta <= 3 rho/(128 K^2)");
        if (compare_with_power(Rational(256 * K) * prm.delta / 3, g.n(), Rational(-1, rho - 1)) > 0)
            throw HypothesisViolation("(256 K delta/3)^(rho-1) |G| <= 1");
        auto d = is_divergent(a, prm.gamma, prm.delta, std::uint64_t{1} << 26);
        if (d.verdict == Verdict::inconclusive)
            throw InconclusiveSearch("divergence search exhausted its budget");
        if (d.verdict == Verdict::found)
            throw DivergenceWitness("not (gamma, delta)-divergent", d.i, d.j, d.x, d.y);
    }
    if (rho < 3)
        throw StageFailure("setup", "rho = 2 leaves no block for the connecting path; use c <= 1/2");

    BilevelRun run;
    run.rho = rho;
    try {
        auto ex = expanding_contraction(a, prm.delta, mode);
        run.expanded = ex.contraction;
    } catch (const DivergenceWitness &) {
        if (mode == Mode::strict)
            throw;
        run.expanded = a;
        run.fallbacks.push_back("expansion");
    } catch (const StageFailure &) {
        if (mode == Mode::strict)
            throw;
        run.expanded = a;
        run.fallbacks.push_back("expansion");
    }
    const Blockade & b = run.expanded;
    const Rational tau = 1 / (4 * prm.delta);
    run.h1 = detail::smallest(b.indices(), static_cast<std::size_t>(rho));
    const int h1 = run.h1.front();
    VertexSet others;
    for (int h : run.h1)
        if (h != h1)
            others = set_union(others, b.block(h));

    std::optional<StageFailure> last;
    const std::size_t kept = run.fallbacks.size();
    for (Vertex u : b.block(h1)) {
        run.fallbacks.resize(kept);
        if (!g.has_neighbour_in(u, others))
            continue;
        try {
            run.u = u;
            run.grading = build_grading(b, run.h1, h1, u, rho, tau, mode);
            const auto & gr = run.grading.grading;
            const int t = gr.lev.height();
            if (t < 1)
                throw StageFailure("grading", "grading levelling has height 0; its apex touches the graded blocks");
            std::vector<int> order;  // j_set in grading order
            std::map<int, std::size_t> pos;
            for (std::size_t p = 0; p < gr.blocks.size(); ++p) {
                order.push_back(gr.blocks[p].index);
                pos[gr.blocks[p].index] = p;
            }
            run.j1 = run.grading.j_set;
            if (static_cast<int>(order.size()) < rho)
                throw StageFailure("grading", "fewer than rho graded blocks");

            // D: expanding contraction of the graded blocks
            std::vector<VertexSet> cblocks;
            for (int j : run.j1)
                cblocks.push_back(gr.blocks[pos[j]].vertices);
            Blockade cb(a.host_ptr(), run.j1, cblocks);
            Rational dprime = Rational(32 * K) * prm.delta / 3;
            if (mode == Mode::relaxed)
                dprime = std::min(dprime, Rational(1, 8));
            else if (dprime > 1)
                throw CertificationFailure("contraction parameter 32 K delta/3 exceeds 1");
            Rational dtau = 1 / (4 * dprime);
            try {
                run.contracted = expanding_contraction(cb, dprime, mode).contraction;
            } catch (const DivergenceWitness & e) {
                if (mode == Mode::strict)
                    throw CertificationFailure(std::string("graded blocks are divergent: ") + e.what());
                run.contracted = cb;
                run.fallbacks.push_back("contraction");
            } catch (const StageFailure &) {
                if (mode == Mode::strict)
                    throw;
                run.contracted = cb;
                run.fallbacks.push_back("contraction");
            }
            const Blockade & d = run.contracted;

            std::vector<int> rest;
            for (int i : b.indices())
                if (!std::binary_search(run.j1.begin(), run.j1.end(), i) &&
                    !std::binary_search(run.h1.begin(), run.h1.end(), i))
                    rest.push_back(i);
            if (static_cast<int>(rest.size()) < rho - 2)
                throw StageFailure("path", "too few spare blocks for the connecting path");
            run.h2 = detail::smallest(rest, static_cast<std::size_t>(rho - 2));
            run.h3.assign(order.begin(), order.begin() + (rho - 1));
            VertexSet target;
            for (int j : run.h3)
                target = set_union(target, d.block(j));

            // existence of a short rainbow path into D_{j_1}
            {
                std::vector<int> idx = run.h2;
                idx.push_back(h1);
                idx.push_back(run.h3.front());
                std::sort(idx.begin(), idx.end());
                std::vector<VertexSet> bl;
                for (int i : idx)
                    bl.push_back(i == run.h3.front() ? d.block(i) : b.block(i));
                Blockade contraction(a.host_ptr(), idx, bl);
                try {
                    rainbow_path(a.sub(idx), contraction, h1, u, run.h3.front(), d.block(run.h3.front()), prm.gamma,
                                 prm.delta, mode);
                    run.shortpath_ok = true;
                } catch (const StageFailure &) {
                    if (mode == Mode::strict)
                        throw;
                } catch (const HypothesisViolation &) {
                    if (mode == Mode::strict)
                        throw;
                }
            }

            std::vector<VertexSet> h2blocks;
            for (int h : run.h2)
                h2blocks.push_back(b.block(h));
            auto p = detail::short_rainbow_path(g, u, h2blocks, [&](Vertex x) { return g.has_neighbour_in(x, target); });
            if (!p || p->size() < 2)
                throw StageFailure("path", "no rainbow path from u to a neighbour of the first graded blocks");
            run.path = *p;
            run.v = run.path.back();
            int h2 = -1;
            for (int h : run.h2)
                if (contains_vertex(b.block(h), run.v))
                    h2 = h;

            // M: levelling from v over (D_j : j in J1) and D_{h2} = B_{h2}
            std::vector<int> midx = run.j1;
            midx.push_back(h2);
            std::sort(midx.begin(), midx.end());
            std::vector<VertexSet> mbl;
            for (int i : midx)
                mbl.push_back(i == h2 ? b.block(i) : d.block(i));
            Blockade mb(a.host_ptr(), midx, mbl);
            std::vector<int> mh = run.h3;
            mh.push_back(h2);
            run.m_levelling = build_levelling(mb, mh, h2, run.v, rho, dtau, mode);
            run.j2 = run.m_levelling.j_set;

            // F, then types: (vertices of P' , vertices of Q')
            const VertexSet pset(run.path.begin(), run.path.end());
            const VertexSet ptail(run.path.begin() + 1, run.path.end());
            std::map<int, std::map<std::pair<int, int>, VertexSet>> classes;
            for (int j : run.j2) {
                const VertexSet & y = gr.witnesses[pos[j]];
                for (int f : run.m_levelling.c[j]) {
                    if (g.has_neighbour_in(f, pset))
                        continue;
                    std::vector<int> q{f, detail::first_neighbour(g, f, y)};
                    for (int i = 1; i <= t; ++i)
                        q.push_back(detail::first_neighbour(g, q.back(), gr.lev.layers[static_cast<std::size_t>(t - i)]));
                    if (std::find(q.begin(), q.end(), -1) != q.end())
                        throw CertificationFailure("grading witness does not reach back to the apex");
                    int s = 1;
                    while (!g.has_neighbour_in(q[static_cast<std::size_t>(s)], ptail))
                        ++s;
                    int z = 0;
                    for (std::size_t i = 1; i < run.path.size(); ++i)
                        if (g.adjacent(q[static_cast<std::size_t>(s)], run.path[i]))
                            z = static_cast<int>(i);
                    classes[j][{static_cast<int>(run.path.size()) - z, s + 1}].push_back(f);
                }
            }
            auto largest = [](const auto & m) {
                auto best = m.begin();
                for (auto it = m.begin(); it != m.end(); ++it)
                    if (it->second.size() > best->second.size())
                        best = it;
                return best;
            };
            std::map<std::pair<int, int>, std::vector<int>> jtypes;
            std::map<int, VertexSet> gsets;
            for (const auto & [j, m] : classes) {
                auto best = largest(m);
                gsets[j] = best->second;
                jtypes[best->first].push_back(j);
            }
            if (jtypes.empty())
                throw StageFailure("bucketing", "every levelled vertex touches the path");
            auto bt = largest(jtypes);
            run.type = bt->first;
            std::vector<int> j3 = bt->second;
            std::sort(j3.begin(), j3.end(), [&](int x, int y) { return pos[x] < pos[y]; });
            if (static_cast<int>(j3.size()) < k)
                throw StageFailure("bucketing", "only " + std::to_string(j3.size()) + " blocks share a type");
            if (!prm.keep_all)
                j3.resize(static_cast<std::size_t>(k));
            run.j3 = j3;

            const auto [ta, tb] = run.type;
            const std::size_t z0 = run.path.size() - static_cast<std::size_t>(ta);
            const VertexSet pprime(run.path.begin() + static_cast<std::ptrdiff_t>(z0), run.path.end());
            run.w = run.path[z0];
            const VertexSet & ystar = gr.witnesses[pos[j3.front()]];
            std::vector<VertexSet> n{{run.w}};
            for (int i = 1; i <= tb - 1; ++i) {
                const auto & layer = gr.lev.layers[static_cast<std::size_t>(t - tb + i + 1)];
                VertexSet next;
                for (int x : layer) {
                    bool ok = i == 1 ? g.adjacent(x, run.w) && !g.has_neighbour_in(x, set_difference(pprime, {run.w}))
                                     : !g.has_neighbour_in(x, pprime) && g.has_neighbour_in(x, n.back());
                    if (ok && (i < tb - 1 || contains_vertex(ystar, x)))
                        next.push_back(x);
                }
                if (next.empty())
                    throw StageFailure("assembly", "layer " + std::to_string(i) + " of the new levelling is empty");
                n.push_back(next);
            }
            BiLevelling bl;
            bl.l.layers = n;
            for (std::size_t i = z0; i < run.path.size(); ++i)
                bl.m.layers.push_back({run.path[i]});
            const auto & ml = run.m_levelling.lev.layers;
            for (std::size_t i = 1; i + 1 < ml.size(); ++i)
                bl.m.layers.push_back(ml[i]);
            for (int j : j3) {
                bl.blocks.push_back({j, gsets[j]});
                bl.forward.push_back(set_intersection(gr.witnesses[pos[j]], n.back()));
            }
            if (auto prob = check::bilevelling(g, bl, &a))
                throw CertificationFailure("bi-levelling invalid: " + *prob);
            const int cap = prm.max_height.value_or(3 * rho - 3);
            if (bl.height() > 3 * rho - 3)
                throw CertificationFailure("bi-levelling height exceeds 3 rho - 3");
            if (bl.height() > cap)
                throw StageFailure("assembly", "height " + std::to_string(bl.height()) + " exceeds the cap");
            if (mode == Mode::strict)
                for (const auto & tb2 : bl.blocks)
                    if (Rational(static_cast<std::int64_t>(tb2.vertices.size())) * 64 * rho * rho * rho * K <
                        static_cast<std::int64_t>(a.block(tb2.index).size()))
                        throw CertificationFailure("A-size of the blocks below 1/(64 rho^3 K)");
            run.result = std::move(bl);
            return run;
        } catch (const StageFailure & e) {
            last = e;
        }
    }
    if (last)
        throw *last;
    throw StageFailure("grading", "no vertex of the first block has a neighbour in the other levelling blocks");
}

}  // namespace purepairs
