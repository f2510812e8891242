#pragma once

// Shared corpora and test-only oracles.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "subexp/digraph.hpp"

namespace testing_support {

using subexp::Digraph;
using subexp::UndirectedGraph;
using subexp::Vertex;

/// Each ordered pair becomes an arc with probability p.
inline Digraph random_digraph(std::mt19937_64& rng, int n, double p)
{
    std::bernoulli_distribution coin(p);
    Digraph d(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (u != v && coin(rng))
                d.add_arc(u, v);
    return d;
}

/// A random spanning out-tree from `root` plus arcs with probability p.
inline Digraph random_rooted_digraph(std::mt19937_64& rng, int n, double p, Vertex root = 0)
{
    Digraph d = random_digraph(rng, n, p);
    std::vector<Vertex> order;
    for (Vertex v = 0; v < n; ++v)
        if (v != root)
            order.push_back(v);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Vertex> placed{root};
    for (Vertex v : order) {
        std::uniform_int_distribution<std::size_t> pick(0, placed.size() - 1);
        d.add_arc(placed[pick(rng)], v);
        placed.push_back(v);
    }
    return d;
}

/// Seeded mix of unconstrained and root-reachable digraphs with 1 <= n <= max_n.
inline std::vector<Digraph> random_corpus(std::size_t count, std::uint64_t seed, int max_n = 7)
{
    std::mt19937_64 rng(seed);
    const double densities[] = {0.15, 0.25, 0.4, 0.6};
    std::vector<Digraph> corpus;
    for (std::size_t i = 0; i < count; ++i) {
        const int n = 1 + static_cast<int>(i % static_cast<std::size_t>(max_n));
        const double p = densities[(i / max_n) % 4];
        corpus.push_back(i % 3 == 0 ? random_digraph(rng, n, p)
                                    : random_rooted_digraph(rng, n, p, static_cast<Vertex>(rng() % n)));
    }
    return corpus;
}

/// Every orientation of g: each edge becomes u->v, v->u or both.
inline std::vector<Digraph> all_orientations(const UndirectedGraph& g)
{
    const auto edges = g.edges();
    std::vector<Digraph> out;
    std::vector<int> choice(edges.size(), 0);
    while (true) {
        Digraph d(g.vertex_count());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto [u, v] = edges[i];
            if (choice[i] != 1)
                d.add_arc(u, v);
            if (choice[i] != 0)
                d.add_arc(v, u);
        }
        out.push_back(std::move(d));
        std::size_t i = 0;
        while (i < choice.size() && choice[i] == 2)
            choice[i++] = 0;
        if (i == choice.size())
            break;
        ++choice[i];
    }
    return out;
}

inline UndirectedGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges)
{
    UndirectedGraph g(n);
    for (auto [u, v] : edges)
        g.add_edge(u, v);
    return g;
}

/// C4, paw, diamond and the claw.
inline std::vector<UndirectedGraph> selected_four_vertex_graphs()
{
    return {
        graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}),
        graph_from_edges(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}),
        graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}),
        graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}}),
    };
}

inline std::vector<Digraph> four_vertex_orientations()
{
    std::vector<Digraph> out;
    for (const auto& g : selected_four_vertex_graphs())
        for (auto& d : all_orientations(g))
            out.push_back(std::move(d));
    return out;
}

inline UndirectedGraph grid_graph(int rows, int cols)
{
    UndirectedGraph g(rows * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const int v = i * cols + j;
            if (j + 1 < cols)
                g.add_edge(v, v + 1);
            if (i + 1 < rows)
                g.add_edge(v, v + cols);
        }
    return g;
}

inline Digraph bidirected(const UndirectedGraph& g)
{
    Digraph d(g.vertex_count());
    for (auto [u, v] : g.edges()) {
        d.add_arc(u, v);
        d.add_arc(v, u);
    }
    return d;
}

/// Width of the best elimination ordering, by trying all of them.
inline int treewidth_by_permutations(const UndirectedGraph& g)
{
    const int n = g.vertex_count();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i)
        order[i] = i;
    int best = n - 1;
    do {
        std::vector<std::set<int>> adj(n);
        for (auto [u, v] : g.edges()) {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        int width = 0;
        for (int v : order) {
            width = std::max(width, static_cast<int>(adj[v].size()));
            if (width >= best)
                break;
            for (int a : adj[v])
                for (int b : adj[v])
                    if (a != b)
                        adj[a].insert(b);
            for (int a : adj[v])
                adj[a].erase(v);
            adj[v].clear();
        }
        best = std::min(best, width);
    } while (std::next_permutation(order.begin(), order.end()));
    return std::max(best, 0);
}

/// Is h isomorphic to a spanning subgraph of g (same vertex count)?
inline bool is_spanning_subgraph(const UndirectedGraph& h, const UndirectedGraph& g)
{
    const int n = h.vertex_count();
    if (g.vertex_count() != n)
        return false;
    std::vector<int> image(n, -1);
    std::vector<bool> used(n, false);
    std::function<bool(int)> place = [&](int v) {
        if (v == n)
            return true;
        for (int w = 0; w < n; ++w) {
            if (used[w])
                continue;
            bool ok = true;
            for (int u : h.neighbors(v))
                if (u < v && !g.has_edge(image[u], w)) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            image[v] = w;
            used[w] = true;
            if (place(v + 1))
                return true;
            used[w] = false;
        }
        image[v] = -1;
        return false;
    };
    return place(0);
}

/// Is h a minor of g when |V(h)| = |V(g)| - 1? Tries every single vertex
/// deletion and edge contraction of g, built here from scratch.
inline bool is_one_step_minor(const UndirectedGraph& h, const UndirectedGraph& g)
{
    const int n = g.vertex_count();
    if (h.vertex_count() != n - 1)
        return false;
    auto relabel = [&](int w, int gone) { return w < gone ? w : w - 1; };
    for (int x = 0; x < n; ++x) {
        UndirectedGraph del(n - 1);
        for (auto [u, v] : g.edges())
            if (u != x && v != x)
                del.add_edge(relabel(u, x), relabel(v, x));
        if (is_spanning_subgraph(h, del))
            return true;
    }
    for (auto [a, b] : g.edges()) {
        UndirectedGraph con(n - 1);
        for (auto [u, v] : g.edges()) {
            const int u2 = relabel(u == b ? a : u, b);
            const int v2 = relabel(v == b ? a : v, b);
            if (u2 != v2 && !con.has_edge(u2, v2))
                con.add_edge(u2, v2);
        }
        if (is_spanning_subgraph(h, con))
            return true;
    }
    return false;
}

} // namespace testing_support
