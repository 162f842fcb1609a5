#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "purepairs/common.hpp"
#include "purepairs/io.hpp"

namespace purepairs {

/// Layers L_0..L_k with L_0 a single apex vertex.
struct Levelling {
    std::vector<VertexSet> layers;

    int height() const { return static_cast<int>(layers.size()) - 1; }
    Vertex apex() const { return layers.front().front(); }
    const VertexSet & base() const { return layers.back(); }
};

/// A block of a graded family, tagged with the ambient block index it lives in.
struct TaggedBlock {
    int index = -1;
    VertexSet vertices;

    bool operator==(const TaggedBlock &) const = default;
};

/// A levelling grading a family of blocks. Blocks are listed in grading
/// order: witnesses[g] lies in the base, covers blocks[g..] and is
/// anticomplete to blocks[..g-1].
struct Grading {
    Levelling lev;
    std::vector<TaggedBlock> blocks;
    std::vector<VertexSet> witnesses;
};

/// Two parallel levellings L and M sharing an apex, both reaching the blocks
/// of C. L grades C forwards along the listed order. When bigrading is set,
/// M grades C backwards and backward[g] covers blocks[..g] and is
/// anticomplete to blocks[g+1..].
struct BiLevelling {
    Levelling l;
    Levelling m;
    std::vector<TaggedBlock> blocks;
    std::vector<VertexSet> forward;
    std::vector<VertexSet> backward;
    bool bigrading = false;

    int height() const { return l.height() + m.height(); }
    int length() const { return static_cast<int>(blocks.size()); }
    VertexSet block_vertices() const
    {
        VertexSet all;
        for (const auto & b : blocks)
            all = set_union(all, b.vertices);
        return all;
    }
};

inline json levelling_to_json(const Levelling & l) { return json{{"layers", l.layers}}; }

inline Levelling levelling_from_json(const json & j)
{
    return Levelling{j.at("layers").get<std::vector<VertexSet>>()};
}

inline json tagged_to_json(const std::vector<TaggedBlock> & blocks)
{
    json out = json::array();
    for (const auto & b : blocks)
        out.push_back({{"index", b.index}, {"vertices", b.vertices}});
    return out;
}

inline std::vector<TaggedBlock> tagged_from_json(const json & j)
{
    std::vector<TaggedBlock> out;
    for (const auto & e : j)
        out.push_back({e.at("index").get<int>(), e.at("vertices").get<VertexSet>()});
    return out;
}

inline json grading_to_json(const Grading & g)
{
    return json{{"levelling", levelling_to_json(g.lev)}, {"blocks", tagged_to_json(g.blocks)}, {"witnesses", g.witnesses}};
}

inline json bilevelling_to_json(const BiLevelling & b)
{
    return json{{"l", levelling_to_json(b.l)},
                {"m", levelling_to_json(b.m)},
                {"blocks", tagged_to_json(b.blocks)},
                {"forward", b.forward},
                {"backward", b.backward},
                {"bigrading", b.bigrading},
                {"height", b.height()}};
}

inline BiLevelling bilevelling_from_json(const json & j)
{
    BiLevelling b;
    b.l = levelling_from_json(j.at("l"));
    b.m = levelling_from_json(j.at("m"));
    b.blocks = tagged_from_json(j.at("blocks"));
    b.forward = j.at("forward").get<std::vector<VertexSet>>();
    b.backward = j.at("backward").get<std::vector<VertexSet>>();
    b.bigrading = j.at("bigrading").get<bool>();
    return b;
}

}  // namespace purepairs
