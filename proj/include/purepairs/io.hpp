#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <iterator>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "graph.hpp"

namespace purepairs {

using json = nlohmann::json;

/// Edge-list text: "n m" then m lines "u v", 0-based.
inline Graph read_edge_list(std::istream & in)
{
    long long n = -1, m = -1;
    if (!(in >> n >> m) || n < 0 || m < 0)
        throw PreconditionError("edge list: bad header");
    Graph g(static_cast<int>(n));
    for (long long i = 0; i < m; ++i) {
        int u, v;
        if (!(in >> u >> v))
            throw PreconditionError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
        if (u == v)
            throw PreconditionError("edge list: loop at " + std::to_string(u));
        g.add_edge(u, v);
    }
    return g;
}

inline std::string write_edge_list(const Graph & g)
{
    std::ostringstream out;
    auto es = g.edges();
    out << g.n() << ' ' << es.size() << '\n';
    for (auto [u, v] : es)
        out << u << ' ' << v << '\n';
    return out.str();
}

/// Parses one graph6 line (optionally prefixed with ">>graph6<<").
inline Graph parse_graph6(std::string s)
{
    const std::string header = ">>graph6<<";
    if (s.rfind(header, 0) == 0)
        s = s.substr(header.size());
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r'))
        s.pop_back();
    std::size_t pos = 0;
    auto byte = [&]() {
        if (pos >= s.size())
            throw PreconditionError("graph6: truncated");
        int c = static_cast<unsigned char>(s[pos++]) - 63;
        if (c < 0 || c > 63)
            throw PreconditionError("graph6: invalid character");
        return c;
    };
    long long n = byte();
    if (n == 63) {
        n = 0;
        int first = byte();
        if (first == 63) {
            for (int i = 0; i < 6; ++i)
                n = (n << 6) | byte();
        } else {
            n = first;
            for (int i = 0; i < 2; ++i)
                n = (n << 6) | byte();
        }
    }
    Graph g(static_cast<int>(n));
    int bit = 6, cur = 0;
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u) {
            if (bit == 6) {
                cur = byte();
                bit = 0;
            }
            if ((cur >> (5 - bit)) & 1)
                g.add_edge(u, v);
            ++bit;
        }
    return g;
}

inline std::string to_graph6(const Graph & g)
{
    std::string out;
    long long n = g.n();
    if (n < 63) {
        out += static_cast<char>(n + 63);
    } else if (n < 258048) {
        out += static_cast<char>(126);
        for (int s = 12; s >= 0; s -= 6)
            out += static_cast<char>(((n >> s) & 63) + 63);
    } else {
        out += static_cast<char>(126);
        out += static_cast<char>(126);
        for (int s = 30; s >= 0; s -= 6)
            out += static_cast<char>(((n >> s) & 63) + 63);
    }
    int bit = 0, cur = 0;
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u) {
            cur = (cur << 1) | (g.adjacent(u, v) ? 1 : 0);
            if (++bit == 6) {
                out += static_cast<char>(cur + 63);
                bit = cur = 0;
            }
        }
    if (bit) {
        cur <<= 6 - bit;
        out += static_cast<char>(cur + 63);
    }
    return out;
}

/// Reads a graph file: graph6 if the first token is not a number, else edge list.
inline Graph load_graph(const std::string & path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open " + path);
    std::string first;
    in >> std::ws;
    std::getline(in, first);
    bool numeric = !first.empty() && (std::isdigit(static_cast<unsigned char>(first[0])) != 0);
    if (!numeric)
        return parse_graph6(first);
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::istringstream all(first + "\n" + rest);
    return read_edge_list(all);
}

inline json graph_to_json(const Graph & g)
{
    json es = json::array();
    for (auto [u, v] : g.edges())
        es.push_back({u, v});
    return {{"n", g.n()}, {"edges", es}};
}

inline Graph graph_from_json(const json & j)
{
    Graph g(j.at("n").get<int>());
    for (const auto & e : j.at("edges"))
        g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    return g;
}

/// FNV-1a over the graph6 string, used to tag structures with their host.
inline std::uint64_t graph_hash(const Graph & g)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : to_graph6(g)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace purepairs
