#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "embedding.hpp"
#include "io.hpp"
#include "purepair.hpp"

namespace purepairs {

/// Ordered family of disjoint nonempty vertex blocks B_i (i in I), I strictly
/// increasing. The host graph is shared, never copied.
class Blockade {
public:
    Blockade() = default;

    Blockade(std::shared_ptr<const Graph> host, std::vector<int> indices, std::vector<VertexSet> blocks)
        : host_(std::move(host)), indices_(std::move(indices)), blocks_(std::move(blocks))
    {
        validate();
    }

    Blockade(std::shared_ptr<const Graph> host, std::vector<VertexSet> blocks)
        : host_(std::move(host)), blocks_(std::move(blocks))
    {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            indices_.push_back(static_cast<int>(i));
        validate();
    }

    const Graph & host() const { return *host_; }
    const std::shared_ptr<const Graph> & host_ptr() const { return host_; }
    int length() const { return static_cast<int>(blocks_.size()); }
    const std::vector<int> & indices() const { return indices_; }
    const std::vector<VertexSet> & blocks() const { return blocks_; }
    int index_at(int pos) const { return indices_[pos]; }
    const VertexSet & at(int pos) const { return blocks_[pos]; }

    bool has_index(int i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

    int position_of(int index) const
    {
        auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
        if (it == indices_.end() || *it != index)
            throw PreconditionError("no block with index " + std::to_string(index));
        return static_cast<int>(it - indices_.begin());
    }

    const VertexSet & block(int index) const { return blocks_[position_of(index)]; }

    int width() const
    {
        int w = blocks_.empty() ? 0 : static_cast<int>(blocks_[0].size());
        for (const auto & b : blocks_)
            w = std::min(w, static_cast<int>(b.size()));
        return w;
    }

    VertexSet vertices() const
    {
        VertexSet all;
        for (const auto & b : blocks_)
            all.insert(all.end(), b.begin(), b.end());
        canonicalize(all);
        return all;
    }

    /// Block index containing each host vertex, or -1.
    std::vector<int> index_of_vertex() const
    {
        std::vector<int> out(host_->n(), -1);
        for (std::size_t p = 0; p < blocks_.size(); ++p)
            for (int v : blocks_[p])
                out[v] = indices_[p];
        return out;
    }

    Blockade sub(const std::vector<int> & keep_indices) const
    {
        std::vector<int> idx;
        std::vector<VertexSet> bl;
        for (int i : keep_indices) {
            idx.push_back(i);
            bl.push_back(block(i));
        }
        return Blockade(host_, idx, bl);
    }

    /// Contraction of a sub-blockade: new_blocks[k] ⊆ block(indices[k]).
    Blockade contract(const std::vector<int> & idx, const std::vector<VertexSet> & new_blocks) const
    {
        for (std::size_t k = 0; k < idx.size(); ++k)
            if (!std::includes(block(idx[k]).begin(), block(idx[k]).end(), new_blocks[k].begin(), new_blocks[k].end()))
                throw PreconditionError("contraction block " + std::to_string(idx[k]) + " not contained in its parent");
        return Blockade(host_, idx, new_blocks);
    }

    Blockade reindex(std::vector<int> new_indices) const { return Blockade(host_, std::move(new_indices), blocks_); }

private:
    void validate() const
    {
        if (!host_)
            throw PreconditionError("blockade without host");
        if (indices_.size() != blocks_.size())
            throw PreconditionError("index/block count mismatch");
        std::vector<char> seen(host_->n(), 0);
        for (std::size_t p = 0; p < blocks_.size(); ++p) {
            if (p > 0 && indices_[p] <= indices_[p - 1])
                throw PreconditionError("block indices must be strictly increasing");
            if (blocks_[p].empty())
                throw PreconditionError("empty block " + std::to_string(indices_[p]));
            for (std::size_t k = 0; k < blocks_[p].size(); ++k) {
                int v = blocks_[p][k];
                if (v < 0 || v >= host_->n())
                    throw PreconditionError("block vertex out of range");
                if (k > 0 && v <= blocks_[p][k - 1])
                    throw PreconditionError("block vertices must be sorted and distinct");
                if (seen[v])
                    throw PreconditionError("blocks are not disjoint");
                seen[v] = 1;
            }
        }
    }

    std::shared_ptr<const Graph> host_;
    std::vector<int> indices_;
    std::vector<VertexSet> blocks_;
};

/// |X| / |A_i|, the size of X relative to the block of `a` it lives in.
inline Rational relative_size(const Blockade & a, int index, const VertexSet & x)
{
    return Rational(static_cast<std::int64_t>(x.size()), static_cast<std::int64_t>(a.block(index).size()));
}

/// Minimum relative size of the blocks of `b` inside the blocks of `a` with the same index.
inline Rational relative_size(const Blockade & a, const Blockade & b)
{
    Rational m = 1;
    for (int p = 0; p < b.length(); ++p)
        m = std::min(m, relative_size(a, b.index_at(p), b.at(p)));
    return m;
}

/// Largest number of neighbours in `to` of a vertex of `from`.
inline int max_degree_between(const Graph & g, const VertexSet & from, const VertexSet & to)
{
    int d = 0;
    for (int v : from)
        d = std::max(d, g.degree_into(v, to));
    return d;
}

struct BlockadeMetrics {
    int length = 0;
    int width = 0;
    int host_size = 0;
    double shrinkage = 0;
    Rational linkage = 0;
};

inline Rational linkage(const Blockade & b)
{
    Rational best = 0;
    for (int i = 0; i < b.length(); ++i)
        for (int j = 0; j < b.length(); ++j)
            if (i != j) {
                Rational r(max_degree_between(b.host(), b.at(i), b.at(j)), static_cast<std::int64_t>(b.at(j).size()));
                best = std::max(best, r);
            }
    return best;
}

inline double shrinkage(int width, int host_size)
{
    if (host_size <= 1)
        throw PreconditionError("shrinkage undefined for hosts with fewer than 2 vertices");
    return 1.0 - std::log(static_cast<double>(width)) / std::log(static_cast<double>(host_size));
}

inline BlockadeMetrics metrics(const Blockade & b)
{
    BlockadeMetrics m;
    m.length = b.length();
    m.width = b.width();
    m.host_size = b.host().n();
    m.shrinkage = shrinkage(m.width, m.host_size);
    m.linkage = linkage(b);
    return m;
}

/// Exact test of "shrinkage at most sigma0": width >= |G|^(1 - sigma0).
inline bool shrinkage_at_most(const Blockade & b, const Rational & sigma0)
{
    if (b.host().n() <= 1)
        throw PreconditionError("shrinkage undefined for hosts with fewer than 2 vertices");
    return compare_with_power(Rational(b.width()), b.host().n(), 1 - sigma0) >= 0;
}

struct DivergenceResult {
    Verdict verdict = Verdict::absent;
    int i = -1;
    int j = -1;
    VertexSet x;
    VertexSet y;
};

/// Looks for distinct i, j and anticomplete X ⊆ A_i, Y ⊆ A_j with
/// |X| >= gamma |A_i| and |Y| >= delta |A_j|. The budget is shared by all pairs.
inline DivergenceResult is_divergent(const Blockade & b, const Rational & gamma, const Rational & delta,
                                     std::uint64_t budget)
{
    if (budget == 0)
        throw PreconditionError("budget must be positive");
    if (gamma <= 0 || gamma > 1 || delta <= 0 || delta > 1)
        throw PreconditionError("gamma and delta must lie in (0, 1]");
    DivergenceResult out;
    std::uint64_t left = budget;
    bool inconclusive = false;
    for (int p = 0; p < b.length(); ++p)
        for (int q = 0; q < b.length(); ++q) {
            if (p == q)
                continue;
            auto x = static_cast<std::size_t>(ceil_rational(gamma * static_cast<std::int64_t>(b.at(p).size())));
            auto y = static_cast<std::size_t>(ceil_rational(delta * static_cast<std::int64_t>(b.at(q).size())));
            if (left == 0) {
                inconclusive = true;
                continue;
            }
            auto r = find_anticomplete_between(b.host(), b.at(p), b.at(q), x, y, left);
            left -= std::min(left, r.nodes);
            if (r.verdict == Verdict::found) {
                out.verdict = Verdict::found;
                out.i = b.index_at(p);
                out.j = b.index_at(q);
                out.x = r.pair->a;
                out.y = r.pair->b;
                return out;
            }
            if (r.verdict == Verdict::inconclusive)
                inconclusive = true;
        }
    out.verdict = inconclusive ? Verdict::inconclusive : Verdict::absent;
    return out;
}

/// k blocks of sizes ceil(n/k) then floor(n/k), vertices in index order.
inline Blockade equipartition(std::shared_ptr<const Graph> g, int k)
{
    int n = g->n();
    if (k < 1 || k > n)
        throw PreconditionError("equipartition needs 1 <= k <= n");
    std::vector<VertexSet> blocks(k);
    int big = n % k, base = n / k, v = 0;
    for (int i = 0; i < k; ++i)
        for (int s = 0; s < base + (i < big ? 1 : 0); ++s)
            blocks[i].push_back(v++);
    return Blockade(std::move(g), std::move(blocks));
}

struct RainbowEmbedding {
    Embedding emb;
    std::vector<int> block_of;  // block index per pattern vertex
};

struct RainbowConstraints {
    std::optional<int> first;  // pattern vertex in the least used block
    std::optional<int> last;   // pattern vertex in the greatest used block
};

/// Independent check of a rainbow embedding and its first/last constraints.
inline bool is_rainbow_copy(const Blockade & b, const Graph & h, const RainbowEmbedding & r,
                            const RainbowConstraints & c = {})
{
    if (!is_induced_embedding(b.host(), h, r.emb.map) || static_cast<int>(r.block_of.size()) != h.n())
        return false;
    auto where = b.index_of_vertex();
    std::vector<int> used;
    for (int p = 0; p < h.n(); ++p) {
        int blk = where[r.emb.map[p]];
        if (blk < 0 || blk != r.block_of[p])
            return false;
        used.push_back(blk);
    }
    auto sorted = used;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return false;
    if (h.n() > 0) {
        if (c.first && used[*c.first] != sorted.front())
            return false;
        if (c.last && used[*c.last] != sorted.back())
            return false;
    }
    return true;
}

/// Exhaustive backtracking for an induced copy of h using at most one vertex
/// per block, honouring first/last constraints.
inline std::optional<RainbowEmbedding> find_rainbow_copy(const Blockade & b, const Graph & h,
                                                         const RainbowConstraints & c = {})
{
    if (h.n() > b.length())
        return std::nullopt;
    if (c.first && c.last && *c.first == *c.last && h.n() > 1)
        return std::nullopt;
    auto where = b.index_of_vertex();
    EmbedFilter filter = [&](int pv, int x, const std::vector<int> & map) {
        int blk = where[x];
        if (blk < 0)
            return false;
        for (int q = 0; q < h.n(); ++q) {
            if (map[q] < 0)
                continue;
            int other = where[map[q]];
            if (other == blk)
                return false;
            if (c.first && ((pv == *c.first && other < blk) || (q == *c.first && blk < other)))
                return false;
            if (c.last && ((pv == *c.last && other > blk) || (q == *c.last && blk > other)))
                return false;
        }
        return true;
    };
    auto e = contains(b.host(), h, &filter);
    if (!e)
        return std::nullopt;
    RainbowEmbedding r{*e, {}};
    for (int v : e->map)
        r.block_of.push_back(where[v]);
    return r;
}

inline json blockade_to_json(const Blockade & b)
{
    json blocks = json::array();
    for (int p = 0; p < b.length(); ++p)
        blocks.push_back({{"index", b.index_at(p)}, {"vertices", b.at(p)}});
    return {{"host_hash", graph_hash(b.host())}, {"blocks", blocks}};
}

inline Blockade blockade_from_json(std::shared_ptr<const Graph> host, const json & j)
{
    if (j.contains("host_hash") && j.at("host_hash").get<std::uint64_t>() != graph_hash(*host))
        throw PreconditionError("blockade host hash does not match the graph");
    std::vector<int> idx;
    std::vector<VertexSet> blocks;
    for (const auto & b : j.at("blocks")) {
        idx.push_back(b.at("index").get<int>());
        blocks.push_back(b.at("vertices").get<VertexSet>());
    }
    return Blockade(std::move(host), idx, blocks);
}

}  // namespace purepairs
