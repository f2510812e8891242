#pragma once

// k-Directed Path by ball covers. A path with k arcs lies within b balls of
// radius ceil(k/b) in UG(D) centred on path vertices, so trying every b-set
// of centres and solving longest path exactly on the induced union of balls
// is exact. On apex-minor-free classes such unions have width O(k / sqrt b).

#include <cstdint>
#include <optional>
#include <vector>

#include "subexp/digraph.hpp"
#include "subexp/iob.hpp"
#include "subexp/td_dp.hpp"
#include "subexp/treewidth.hpp"

namespace subexp {

/// Vertices at undirected distance <= radius from v, sorted.
inline std::vector<Vertex> ball(const UndirectedGraph& g, Vertex v, int radius)
{
    if (radius < 0)
        throw PreconditionError("ball: negative radius");
    if (v < 0 || v >= g.vertex_count())
        throw PreconditionError("ball: vertex out of range");
    const auto dist = bfs_distances(g, v);
    std::vector<Vertex> result;
    for (Vertex w = 0; w < g.vertex_count(); ++w)
        if (dist[w] >= 0 && dist[w] <= radius)
            result.push_back(w);
    return result;
}

inline int ball_radius(int k, int b)
{
    return (k + b - 1) / b;
}

inline constexpr std::uint64_t kDefaultBallSetBudget = 2'000'000;

struct KpathOptions {
    std::uint64_t budget = kDefaultBallSetBudget;  ///< cap on C(n, b)
    DpLimits dp_limits;
};

struct KpathStats {
    int radius = 0;
    std::uint64_t ball_sets = 0;       ///< C(n, b)
    std::uint64_t sets_examined = 0;
    int max_width = -1;
    int max_cover_size = 0;
};

struct KpathResult {
    bool answer = false;
    std::vector<Vertex> path;          ///< k+1 vertices when answer is yes
    std::vector<Vertex> centres;
    KpathStats stats;
};

/// Longest path restricted to D[cover], in input indices.
inline LongestPathResult longest_path_within(const Digraph& d, const std::vector<Vertex>& cover,
                                             const DpLimits& limits, int* width = nullptr)
{
    const Digraph f = induced_subgraph(d, cover);
    const TreeDecomposition td = greedy_decomposition(underlying_graph(f));
    if (width)
        *width = td.width();
    LongestPathResult res = dp_longest_path(f, td, limits);
    for (Vertex& v : res.path)
        v = cover[v];
    return res;
}

inline KpathResult solve_kpath_ballcover(const Digraph& d, int k, int b,
                                         const KpathOptions& options = {})
{
    const int n = d.vertex_count();
    if (k < 0)
        throw PreconditionError("solve_kpath_ballcover: k must be non-negative");
    if (b < 1 || b > n)
        throw PreconditionError("solve_kpath_ballcover: b must lie in [1, n]");
    KpathResult result;
    result.stats.radius = ball_radius(k, b);
    result.stats.ball_sets = binomial(n, b);
    if (result.stats.ball_sets > options.budget)
        throw BudgetExceeded("C(" + std::to_string(n) + ", " + std::to_string(b) + ") = " +
                             std::to_string(result.stats.ball_sets) + " ball sets, budget is " +
                             std::to_string(options.budget));

    const UndirectedGraph g = underlying_graph(d);
    std::vector<std::vector<Vertex>> balls(n);
    for (Vertex v = 0; v < n; ++v)
        balls[v] = ball(g, v, result.stats.radius);

    std::vector<int> combo(b);
    for (int i = 0; i < b; ++i)
        combo[i] = i;
    while (true) {
        std::vector<bool> in_cover(n, false);
        for (int c : combo)
            for (Vertex w : balls[c])
                in_cover[w] = true;
        std::vector<Vertex> cover;
        for (Vertex v = 0; v < n; ++v)
            if (in_cover[v])
                cover.push_back(v);
        ++result.stats.sets_examined;
        result.stats.max_cover_size = std::max(result.stats.max_cover_size, static_cast<int>(cover.size()));

        int width = -1;
        LongestPathResult lp = longest_path_within(d, cover, options.dp_limits, &width);
        result.stats.max_width = std::max(result.stats.max_width, width);
        if (lp.length >= k) {
            result.answer = true;
            lp.path.resize(k + 1);
            result.path = std::move(lp.path);
            result.centres.assign(combo.begin(), combo.end());
            return result;
        }

        int i = b - 1;
        while (i >= 0 && combo[i] == n - b + i)
            --i;
        if (i < 0)
            break;
        ++combo[i];
        for (int j = i + 1; j < b; ++j)
            combo[j] = combo[j - 1] + 1;
    }
    return result;
}

} // namespace subexp
