#pragma once

#include <map>
#include <string>
#include <vector>

#include "purepairs/exact.hpp"

namespace purepairs {

/// K_k = 1, K_t = ceil((2 + 1/d) K_{t+1} + 1); returned as K_0..K_k.
inline std::vector<BigInt> bigrade_ladder(int k, const Rational & d)
{
    if (k < 1 || d <= 0)
        throw PreconditionError("need k >= 1 and d > 0");
    std::vector<BigInt> out(static_cast<std::size_t>(k + 1));
    out[static_cast<std::size_t>(k)] = 1;
    for (int t = k - 1; t >= 0; --t)
        out[static_cast<std::size_t>(t)] =
            ceil_rational((2 + 1 / d) * Rational(out[static_cast<std::size_t>(t + 1)]) + 1);
    return out;
}

/// ceil(K_0 (3 + 1/c)^(ell + 2)) for the ladder above.
inline BigInt bigrade_length(int k, int ell, const Rational & c, const Rational & d)
{
    Rational p(bigrade_ladder(k, d).front());
    for (int i = 0; i < ell + 2; ++i)
        p *= 3 + 1 / c;
    return ceil_rational(p);
}

/// One round of the induction: position i_t, the surviving positions I_t,
/// the selected X ⊆ M_m, D = N(X) ∩ C^{t-1}_{i_t} and the shrunk blocks.
struct BigradeStep {
    int i = -1;
    std::vector<int> survivors;
    VertexSet x;
    VertexSet d;
    std::map<int, VertexSet> c;  // position -> C^t
    SelectiveCoverOutcome cover;
};

struct BigradeRun {
    BiLevelling result;
    BiLevelling initial;
    std::vector<int> ladder;          // K_0..K_k actually used
    std::vector<BigradeStep> steps;
    std::vector<int> positions;       // i_1 < ... < i_k, positions in the initial grading order
    Rational lambda_in;               // linkage bound used for the selective covers
    Rational eta;                     // A-size of the initial blocks
    Rational kappa;
    std::vector<std::string> fallbacks;
};

namespace detail {

inline Rational a_size(const Blockade & a, const std::vector<TaggedBlock> & blocks)
{
    Rational m = 1;
    for (const auto & t : blocks)
        m = std::min(m, relative_size(a, t.index, t.vertices));
    return m;
}

inline Rational tagged_linkage(const Graph & g, const std::vector<TaggedBlock> & blocks)
{
    Rational best = 0;
    for (const auto & s : blocks)
        for (const auto & t : blocks)
            if (s.index != t.index)
                best = std::max(best, Rational(max_degree_between(g, s.vertices, t.vertices),
                                               static_cast<std::int64_t>(t.vertices.size())));
    return best;
}

}  // namespace detail

/// Bi-grading of length k: an exact-height bi-levelling of length K_0 whose
/// blocks are shrunk over k selective-cover rounds so that M also grades them
/// backwards. Relaxed mode uses the ladder K_t = K_{t+1} + 1, measured
/// linkage and A-size, and falls back to build_bilevelling's height when no
/// exact-height start exists.
inline BigradeRun build_bigrading(const Blockade & a, int k, int ell, const Rational & c, const Rational & d,
                                  const Rational & lambda_out, Mode mode = Mode::strict)
{
    const Graph & g = a.host();
    const std::int64_t n = g.n();
    if (k < 1 || c <= 0 || d <= 0 || d > 1 || lambda_out <= 0 || lambda_out > 1)
        throw PreconditionError("need k >= 1, c > 0, 0 < d <= 1 and 0 < lambda_out <= 1");
    if (Rational(ell) < 3 * Rational(ceil_rational(1 / c)) + 1)
        throw PreconditionError("ell must be at least 3 ceil(1/c) + 1");

    BigradeRun run;
    BigInt kbig_pow = 1;  // strict: K^K
    Rational lambda_strict;
    if (mode == Mode::strict) {
        const auto ladder = bigrade_ladder(k, d);
        const BigInt need = bigrade_length(k, ell, c, d);
        if (BigInt(a.length()) != need)
            throw HypothesisViolation("length K = ceil(K_0 (3 + 1/c)^(ell + 2))",
                                      "K = " + std::to_string(a.length()) + ", need " + need.str());
        const int K = a.length();
        for (const auto & x : ladder)
            run.ladder.push_back(static_cast<int>(x));
        run.eta = Rational(1, K) / detail::ipow(2, 2 * ell - 6).convert_to<Rational>();
        lambda_strict = lambda_out * run.eta / (8 * k * detail::ipow(2, k).convert_to<Rational>());
        run.lambda_in = lambda_strict;
        if (linkage(a) > lambda_strict)
            throw HypothesisViolation("linkage <= lambda", "linkage = " + to_string(linkage(a)));
        kbig_pow = detail::ipow(K, K);
        run.kappa = Rational(1) / Rational(kbig_pow);
        const Rational gamma = Rational(1, K) / detail::ipow(2, 6 + 2 * ell).convert_to<Rational>();
        const Rational delta = run.kappa / Rational(detail::ipow(n, static_cast<int>(ceil_rational(c))));
        auto dv = is_divergent(a, gamma, delta, std::uint64_t{1} << 26);
        if (dv.verdict == Verdict::inconclusive)
            throw InconclusiveSearch("divergence search exhausted its budget");
        if (dv.verdict == Verdict::found)
            throw DivergenceWitness("not (2^(-6-2 ell)/K, K^-K |G|^-c)-divergent", dv.i, dv.j, dv.x, dv.y);
        ExactParams ep{gamma, delta, lambda_strict};
        run.initial = exact_bilevelling(a, run.ladder.front(), c, ell, ep, mode).result;
    } else {
        for (int t = 0; t <= k; ++t)
            run.ladder.push_back(k + 1 - t);
        const int k0 = run.ladder.front();
        try {
            run.initial = exact_bilevelling(a, k0, c, ell, {}, mode).result;
        } catch (const StageFailure &) {
            run.fallbacks.push_back("height");
            run.initial = build_bilevelling(a, 1, c, BilevelParams{Rational(1, 64), Rational(1, 16), {}, true}, mode)
                              .result;
        }
        if (run.initial.length() < k0)
            throw StageFailure("ladder", "initial bi-levelling has " + std::to_string(run.initial.length()) +
                                             " blocks, needs " + std::to_string(k0));
        run.initial.blocks.resize(static_cast<std::size_t>(k0));
        run.initial.forward.resize(static_cast<std::size_t>(k0));
        run.eta = detail::a_size(a, run.initial.blocks);
        run.lambda_in = linkage(a);
        run.kappa = Rational(1) / Rational(detail::ipow(k0, k0));
    }

    const BiLevelling & init = run.initial;
    const VertexSet & mbase = init.m.base();
    const int k0 = run.ladder.front();
    auto fail = [&](int t, const std::string & bullet) {
        throw StageFailure("bigrading", "step " + std::to_string(t) + ": " + bullet);
    };
    // |D|/|A_i| >= 2^(1-k-2 ell) K^-K |G|^-d, strict only
    auto big_enough = [&](const VertexSet & s, int pos, int shift) {
        const Rational r = relative_size(a, init.blocks[static_cast<std::size_t>(pos)].index, s);
        const Rational scale = Rational(detail::ipow(2, k + 2 * ell - shift)) * Rational(kbig_pow);
        return compare_with_power(r * scale, n, -d) >= 0;
    };
    const Rational cap = lambda_out / (4 * k);
    std::map<int, VertexSet> cur;
    std::vector<int> alive;
    for (int p = 0; p < k0; ++p) {
        cur[p] = init.blocks[static_cast<std::size_t>(p)].vertices;
        alive.push_back(p);
    }
    for (int t = 0; t < k; ++t) {
        std::vector<VertexSet> cblocks;
        for (int p : alive)
            cblocks.push_back(cur[p]);
        Blockade cb(a.host_ptr(), alive, cblocks);
        Rational eps = run.lambda_in * detail::ipow(2, t).convert_to<Rational>() / run.eta;
        if (eps <= 0)
            eps = Rational(1, n);
        const int next = run.ladder[static_cast<std::size_t>(t + 1)];
        BigradeStep step;
        step.cover = selective_cover(mbase, cb, next + 1, d, Scaled{run.kappa / 8, 0}, eps, mode);
        struct Choice {
            VertexSet x;
            int i;
            std::vector<int> keep;
        };
        std::vector<Choice> choices;
        if (step.cover.kind == SelectiveCoverOutcome::Kind::partition) {
            const int first = alive.front();
            std::vector<std::pair<std::size_t, std::size_t>> by_size;  // (|D|, part)
            for (std::size_t q = 0; q < step.cover.parts.size(); ++q)
                by_size.emplace_back(g.neighbourhood_in(step.cover.parts[q].x, cur[first]).size(), q);
            std::stable_sort(by_size.begin(), by_size.end(), [](auto & l, auto & r) { return l.first > r.first; });
            for (auto [size, q] : by_size) {
                Choice ch{step.cover.parts[q].x, first, {}};
                for (int p : step.cover.parts[q].j)
                    if (p != first && static_cast<int>(ch.keep.size()) < next)
                        ch.keep.push_back(p);
                choices.push_back(ch);
                if (mode == Mode::strict)
                    break;  // the part with largest D only
            }
        } else {
            choices.push_back({step.cover.pair.x, step.cover.pair.j.front(),
                               std::vector<int>(step.cover.pair.j.begin() + 1, step.cover.pair.j.end())});
        }
        const Rational thresh = mode == Mode::strict
                                    ? detail::ipow(2, t + 2).convert_to<Rational>() * lambda_strict / run.eta
                                    : cap;
        std::vector<int> keep;
        // relaxed: first part (largest D first) that leaves every survivor nonempty
        for (const auto & ch : choices) {
            step.x = ch.x;
            step.i = ch.i;
            keep = ch.keep;
            step.d = g.neighbourhood_in(step.x, cur[step.i]);
            step.c.clear();
            bool nonempty = !step.d.empty();
            for (int p : keep) {
                VertexSet nc;
                for (int y : cur[p])
                    if (!g.has_neighbour_in(y, step.x)) {
                        const auto deg = static_cast<std::int64_t>(g.neighbourhood_in(VertexSet{y}, step.d).size());
                        if (mode == Mode::strict ? Rational(deg) < thresh * static_cast<std::int64_t>(step.d.size())
                                                 : Rational(deg) <= thresh * static_cast<std::int64_t>(step.d.size()))
                            nc.push_back(y);
                    }
                nonempty = nonempty && !nc.empty();
                step.c[p] = nc;
            }
            if (nonempty)
                break;
        }
        step.survivors = keep;
        if (step.d.empty())
            fail(t + 1, "D is empty");

        // the six inductive conditions
        if (static_cast<int>(keep.size()) != next ||
            std::any_of(keep.begin(), keep.end(), [&](int p) { return p <= step.i; }))
            fail(t + 1, "I_t has K_t members, all after i_t");
        for (int p : keep) {
            const auto & nc = step.c[p];
            if (nc.empty() || (mode == Mode::strict && 2 * nc.size() < cur[p].size()))
                fail(t + 1, "C^t_i keeps half of C^(t-1)_i");
        }
        if (mode == Mode::strict && !big_enough(step.d, step.i, 1))
            fail(t + 1, "D has A-size at least 2^(1-k-2 ell) K^-K |G|^-d");
        const VertexSet seen = g.neighbourhood_in(step.x, step.d);
        if (!std::includes(mbase.begin(), mbase.end(), step.x.begin(), step.x.end()) || seen != step.d)
            fail(t + 1, "X covers D");
        for (int p : keep)
            if (g.neighbourhood_in(step.x, step.c[p]).size() > 0)
                fail(t + 1, "X is anticomplete to C^t_i");
        for (const auto & prev : run.steps)
            if (Rational(max_degree_between(g, step.d, prev.d)) > cap * static_cast<std::int64_t>(prev.d.size()))
                fail(t + 1, "max-degree from D to earlier D is at most lambda'|D|/(4k)");
        for (int p : keep)
            if (Rational(max_degree_between(g, step.c[p], step.d)) > cap * static_cast<std::int64_t>(step.d.size()))
                fail(t + 1, "max-degree from C^t_i to D is at most lambda'|D|/(4k)");

        cur = step.c;
        alive = keep;
        run.positions.push_back(step.i);
        run.steps.push_back(std::move(step));
    }

    // B_h: vertices of D_h light to every later D_j
    BiLevelling out;
    out.l = init.l;
    out.m = init.m;
    out.bigrading = true;
    VertexSet y;
    for (std::size_t h = 0; h < run.steps.size(); ++h) {
        const auto & dh = run.steps[h].d;
        VertexSet bh;
        for (int v : dh) {
            bool light = true;
            for (std::size_t j = h + 1; j < run.steps.size() && light; ++j) {
                const auto & dj = run.steps[j].d;
                const auto deg = static_cast<std::int64_t>(g.neighbourhood_in(VertexSet{v}, dj).size());
                light = 2 * Rational(deg) <= lambda_out * static_cast<std::int64_t>(dj.size());
            }
            if (light)
                bh.push_back(v);
        }
        if (bh.empty() || (mode == Mode::strict && 2 * bh.size() < dh.size()))
            throw StageFailure("bigrading", "final block " + std::to_string(h + 1) + " keeps under half of D");
        const int pos = run.steps[h].i;
        out.blocks.push_back({init.blocks[static_cast<std::size_t>(pos)].index, bh});
        out.forward.push_back(init.forward[static_cast<std::size_t>(pos)]);
        y = set_union(y, run.steps[h].x);
        out.backward.push_back(y);
    }
    if (auto p = check::bilevelling(g, out, &a))
        throw CertificationFailure("bi-grading invalid: " + *p);
    const Rational link = detail::tagged_linkage(g, out.blocks);
    if (link > lambda_out) {
        if (mode == Mode::strict)
            throw CertificationFailure("bi-grading linkage exceeds lambda_out");
        throw StageFailure("linkage", "bi-grading linkage " + to_string(link) + " exceeds lambda_out");
    }
    if (mode == Mode::strict)
        for (std::size_t h = 0; h < out.blocks.size(); ++h)
            if (!big_enough(out.blocks[h].vertices, run.steps[h].i, 0))
                throw CertificationFailure("A-size below 2^(-k-2 ell) K^-K |G|^-d");
    run.result = std::move(out);
    return run;
}

}  // namespace purepairs
