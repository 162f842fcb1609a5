#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace purepairs {

/// Dinic max-flow with 64-bit capacities.
class MaxFlow {
public:
    static constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;

    explicit MaxFlow(int n) : g_(n), level_(n), it_(n) {}

    int add_edge(int from, int to, std::int64_t cap)
    {
        g_[from].push_back({to, static_cast<int>(g_[to].size()), cap});
        g_[to].push_back({from, static_cast<int>(g_[from].size()) - 1, 0});
        return static_cast<int>(g_[from].size()) - 1;
    }

    std::int64_t run(int s, int t)
    {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            while (std::int64_t f = dfs(s, t, inf))
                flow += f;
        }
        return flow;
    }

    /// Vertices reachable from s in the residual graph after run().
    std::vector<char> source_side(int s) const
    {
        std::vector<char> seen(g_.size(), 0);
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (const auto & e : g_[u])
                if (e.cap > 0 && !seen[e.to]) {
                    seen[e.to] = 1;
                    stack.push_back(e.to);
                }
        }
        return seen;
    }

private:
    struct Edge {
        int to;
        int rev;
        std::int64_t cap;
    };

    bool bfs(int s, int t)
    {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const auto & e : g_[u])
                if (e.cap > 0 && level_[e.to] < 0) {
                    level_[e.to] = level_[u] + 1;
                    q.push(e.to);
                }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int u, int t, std::int64_t f)
    {
        if (u == t)
            return f;
        for (int & i = it_[u]; i < static_cast<int>(g_[u].size()); ++i) {
            Edge & e = g_[u][i];
            if (e.cap > 0 && level_[u] < level_[e.to]) {
                std::int64_t d = dfs(e.to, t, std::min(f, e.cap));
                if (d > 0) {
                    e.cap -= d;
                    g_[e.to][e.rev].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    std::vector<std::vector<Edge>> g_;
    std::vector<int> level_;
    std::vector<int> it_;
};

}  // namespace purepairs
