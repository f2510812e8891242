#pragma once

// Brute-force ground truth for small inputs. These are deliberately naive
// and share no code path with the solvers they audit.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "subexp/digraph.hpp"

namespace subexp {

inline constexpr std::uint64_t kDefaultEnumerationLimit = 5'000'000;

/// Calls `visit` once for every spanning r-out-branching of `d`. Each
/// non-root vertex picks a parent among its in-neighbours, in vertex order;
/// partial choices that close a parent cycle are pruned. Returns the count.
inline std::uint64_t enum_arborescences(const Digraph& d, Vertex r,
                                        const std::function<void(const OutBranching&)>& visit,
                                        std::uint64_t limit = kDefaultEnumerationLimit)
{
    if (!d.contains(r))
        throw PreconditionError("enum_arborescences: root out of range");
    const int n = d.vertex_count();
    std::vector<Vertex> order;
    for (Vertex v = 0; v < n; ++v)
        if (v != r)
            order.push_back(v);
    std::vector<Vertex> parent(n, kNoVertex);
    std::uint64_t count = 0;

    // Does following parents from v come back to v?
    auto closes_cycle = [&](Vertex v) {
        Vertex cur = parent[v];
        for (int steps = 0; cur != kNoVertex && steps <= n; ++steps) {
            if (cur == v)
                return true;
            cur = parent[cur];
        }
        return false;
    };

    std::function<void(std::size_t)> extend = [&](std::size_t i) {
        if (i == order.size()) {
            if (++count > limit)
                throw BudgetExceeded("more than " + std::to_string(limit) + " arborescences");
            OutBranching t(n, r);
            for (Vertex v : order)
                t.set_parent(v, parent[v]);
            visit(t);
            return;
        }
        const Vertex v = order[i];
        for (Vertex u : d.in_neighbors(v)) {
            parent[v] = u;
            if (!closes_cycle(v))
                extend(i + 1);
        }
        parent[v] = kNoVertex;
    };
    extend(0);
    return count;
}

/// Number of spanning r-out-branchings by the directed matrix-tree theorem:
/// the determinant of the in-degree Laplacian with r's row and column removed.
/// Fraction-free Gaussian elimination keeps the arithmetic exact.
inline std::int64_t count_arborescences_matrix_tree(const Digraph& d, Vertex r)
{
    const int n = d.vertex_count();
    if (!d.contains(r))
        throw PreconditionError("count_arborescences_matrix_tree: root out of range");
    std::vector<Vertex> index;
    for (Vertex v = 0; v < n; ++v)
        if (v != r)
            index.push_back(v);
    const std::size_t m = index.size();
    if (m == 0)
        return 1;
    std::vector<std::vector<__int128>> a(m, std::vector<__int128>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        const Vertex v = index[i];
        a[i][i] = d.in_degree(v);
        for (std::size_t j = 0; j < m; ++j)
            if (d.has_arc(index[j], v))
                a[j][i] -= 1;
    }
    // Bareiss elimination.
    __int128 sign = 1;
    __int128 prev = 1;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < m && a[swap_row][k] == 0)
                ++swap_row;
            if (swap_row == m)
                return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < m; ++i)
            for (std::size_t j = k + 1; j < m; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return static_cast<std::int64_t>(sign * a[m - 1][m - 1]);
}

inline std::optional<int> brute_max_leaves(const Digraph& d, Vertex r,
                                           std::uint64_t limit = kDefaultEnumerationLimit)
{
    std::optional<int> best;
    enum_arborescences(
        d, r, [&](const OutBranching& t) { best = std::max(best.value_or(0), t.leaf_count()); },
        limit);
    return best;
}

inline std::optional<int> brute_max_internal(const Digraph& d, Vertex r,
                                             std::uint64_t limit = kDefaultEnumerationLimit)
{
    std::optional<int> best;
    enum_arborescences(
        d, r, [&](const OutBranching& t) { best = std::max(best.value_or(0), t.internal_count()); },
        limit);
    return best;
}

/// Best over all roots; none if `d` has no out-branching at all.
inline std::optional<int> brute_max_leaves_any_root(const Digraph& d)
{
    std::optional<int> best;
    for (Vertex r = 0; r < d.vertex_count(); ++r)
        if (auto v = brute_max_leaves(d, r))
            best = std::max(best.value_or(0), *v);
    return best;
}

inline std::optional<int> brute_max_internal_any_root(const Digraph& d)
{
    std::optional<int> best;
    for (Vertex r = 0; r < d.vertex_count(); ++r)
        if (auto v = brute_max_internal(d, r))
            best = std::max(best.value_or(0), *v);
    return best;
}

/// Calls `visit` for every r-out-tree (not necessarily spanning) with at
/// most `size_cap` vertices: every vertex subset containing r, every
/// arborescence of the induced subdigraph. Trees are in host indices.
inline void enum_out_trees(const Digraph& d, Vertex r, int size_cap,
                           const std::function<void(const OutTree&)>& visit)
{
    const int n = d.vertex_count();
    if (n > 20)
        throw PreconditionError("enum_out_trees is limited to 20 vertices");
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (!(mask & (1u << r)) || __builtin_popcount(mask) > size_cap)
            continue;
        std::vector<Vertex> keep;
        for (Vertex v = 0; v < n; ++v)
            if (mask & (1u << v))
                keep.push_back(v);
        const Digraph sub = induced_subgraph(d, keep);
        const Vertex sub_root = static_cast<Vertex>(
            std::find(keep.begin(), keep.end(), r) - keep.begin());
        enum_arborescences(sub, sub_root, [&](const OutBranching& t) {
            OutTree host(n, r);
            for (std::size_t i = 0; i < keep.size(); ++i)
                if (t.parent(static_cast<Vertex>(i)) != kNoVertex)
                    host.set_parent(keep[i], keep[t.parent(static_cast<Vertex>(i))]);
            visit(host);
        });
    }
}

inline std::optional<int> brute_max_internal_outtree(const Digraph& d, Vertex r, int size_cap)
{
    std::optional<int> best;
    enum_out_trees(d, r, size_cap,
                   [&](const OutTree& t) { best = std::max(best.value_or(0), t.internal_count()); });
    return best;
}

/// Longest simple directed path in arcs, by DFS from every vertex.
inline int brute_longest_path(const Digraph& d, std::vector<Vertex>* witness = nullptr)
{
    const int n = d.vertex_count();
    if (n > 16)
        throw PreconditionError("brute_longest_path is limited to 16 vertices");
    if (n == 0)
        return -1;
    std::vector<bool> on_path(n, false);
    std::vector<Vertex> path, best_path;
    int best = 0;
    std::function<void(Vertex)> dfs = [&](Vertex u) {
        on_path[u] = true;
        path.push_back(u);
        if (static_cast<int>(path.size()) - 1 > best || best_path.empty()) {
            best = static_cast<int>(path.size()) - 1;
            best_path = path;
        }
        for (Vertex w : d.out_neighbors(u))
            if (!on_path[w])
                dfs(w);
        path.pop_back();
        on_path[u] = false;
    };
    for (Vertex v = 0; v < n; ++v)
        dfs(v);
    if (witness)
        *witness = best_path;
    return best;
}

} // namespace subexp
