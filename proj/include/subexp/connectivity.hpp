#pragma once

// Rooted reachability and the single-vertex cut structure used by the
// leaf out-branching reduction. Cuts are rooted: a vertex x != r is a cut
// vertex when deleting it leaves some vertex unreachable from r. Detection
// is by repeated reachability, O(n(n+m)), which is plenty for kernels.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "subexp/digraph.hpp"

namespace subexp {

/// Reachability mask from `r`, skipping vertices flagged in `removed_vertex`
/// (may be empty) and the single arc `removed_arc` (if its tail is valid).
inline std::vector<bool> reachable_mask(const Digraph& d, Vertex r,
                                        const std::vector<bool>& removed_vertex = {},
                                        Arc removed_arc = {})
{
    const int n = d.vertex_count();
    std::vector<bool> seen(n, false);
    auto removed = [&](Vertex v) {
        return !removed_vertex.empty() && removed_vertex[v];
    };
    if (removed(r))
        return seen;
    std::vector<Vertex> stack{r};
    seen[r] = true;
    while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : d.out_neighbors(u)) {
            if (seen[w] || removed(w))
                continue;
            if (u == removed_arc.tail && w == removed_arc.head)
                continue;
            seen[w] = true;
            stack.push_back(w);
        }
    }
    return seen;
}

inline std::vector<Vertex> reachable(const Digraph& d, Vertex r,
                                     const std::set<Vertex>& removed_vertices = {},
                                     const std::set<Arc>& removed_arcs = {})
{
    if (!d.contains(r))
        throw PreconditionError("reachable: root out of range");
    if (removed_vertices.count(r))
        throw PreconditionError("reachable: root is removed");
    std::vector<bool> gone(d.vertex_count(), false);
    for (Vertex v : removed_vertices)
        if (d.contains(v))
            gone[v] = true;
    std::vector<bool> seen(d.vertex_count(), false);
    std::vector<Vertex> stack{r};
    seen[r] = true;
    while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : d.out_neighbors(u)) {
            if (seen[w] || gone[w] || removed_arcs.count(Arc{u, w}))
                continue;
            seen[w] = true;
            stack.push_back(w);
        }
    }
    std::vector<Vertex> result;
    for (Vertex v = 0; v < d.vertex_count(); ++v)
        if (seen[v])
            result.push_back(v);
    return result;
}

inline bool all_reachable(const Digraph& d, Vertex r)
{
    const auto seen = reachable_mask(d, r);
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

namespace detail {

inline void require_all_reachable(const Digraph& d, Vertex r, const char* op)
{
    if (!d.contains(r))
        throw PreconditionError(std::string(op) + ": root out of range");
    if (!all_reachable(d, r))
        throw PreconditionError(std::string(op) + ": some vertex is unreachable from the root");
}

/// Vertices that become unreachable from r once x is deleted.
inline std::vector<Vertex> separated_by(const Digraph& d, Vertex r, Vertex x)
{
    std::vector<bool> gone(d.vertex_count(), false);
    gone[x] = true;
    const auto seen = reachable_mask(d, r, gone);
    std::vector<Vertex> result;
    for (Vertex v = 0; v < d.vertex_count(); ++v)
        if (v != x && !seen[v])
            result.push_back(v);
    return result;
}

} // namespace detail

struct CutProfile {
    std::vector<Vertex> cut_vertices;                 ///< sorted
    std::map<Vertex, std::vector<Vertex>> cut_neighborhoods;  ///< x -> C(x)
    std::vector<Vertex> s_geq2;                       ///< |C(x)| >= 2
    std::vector<Vertex> s_eq1;                        ///< |C(x)| == 1
};

inline CutProfile cut_profile(const Digraph& d, Vertex r)
{
    detail::require_all_reachable(d, r, "cut_profile");
    CutProfile profile;
    for (Vertex x = 0; x < d.vertex_count(); ++x) {
        if (x == r)
            continue;
        const auto stranded = detail::separated_by(d, r, x);
        if (stranded.empty())
            continue;
        std::vector<Vertex> cut_nbrs;
        for (Vertex w : d.out_neighbors(x))
            if (std::binary_search(stranded.begin(), stranded.end(), w))
                cut_nbrs.push_back(w);
        profile.cut_vertices.push_back(x);
        (cut_nbrs.size() >= 2 ? profile.s_geq2 : profile.s_eq1).push_back(x);
        profile.cut_neighborhoods.emplace(x, std::move(cut_nbrs));
    }
    return profile;
}

inline bool is_rooted_2connected(const Digraph& d, Vertex r)
{
    detail::require_all_reachable(d, r, "is_rooted_2connected");
    for (Vertex x = 0; x < d.vertex_count(); ++x)
        if (x != r && !detail::separated_by(d, r, x).empty())
            return false;
    return true;
}

/// Vertices with an in-neighbour that is not also an out-neighbour.
inline std::vector<Vertex> nice_vertices(const Digraph& d)
{
    std::vector<Vertex> result;
    for (Vertex v = 0; v < d.vertex_count(); ++v) {
        for (Vertex u : d.in_neighbors(v)) {
            if (!d.has_arc(v, u)) {
                result.push_back(v);
                break;
            }
        }
    }
    return result;
}

inline std::vector<Vertex> high_indegree_vertices(const Digraph& d, int threshold = 3)
{
    std::vector<Vertex> result;
    for (Vertex v = 0; v < d.vertex_count(); ++v)
        if (d.in_degree(v) >= threshold)
            result.push_back(v);
    return result;
}

/// Number of vertices stranded from r when the single arc `a` is removed.
inline int stranded_by_arc(const Digraph& d, Vertex r, const Arc& a)
{
    const auto seen = reachable_mask(d, r, {}, a);
    return static_cast<int>(std::count(seen.begin(), seen.end(), false));
}

/// Arcs whose removal strands at least two vertices from r, sorted.
inline std::vector<Arc> arcs_disconnecting_two(const Digraph& d, Vertex r)
{
    detail::require_all_reachable(d, r, "arcs_disconnecting_two");
    std::vector<Arc> result;
    for (const Arc& a : d.arcs())
        if (stranded_by_arc(d, r, a) >= 2)
            result.push_back(a);
    return result;
}

} // namespace subexp
