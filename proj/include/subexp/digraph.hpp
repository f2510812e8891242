#pragma once

// Core graph containers: simple digraphs with merge bookkeeping, their
// underlying undirected graphs, rooted out-trees, the two vertex-merging
// operations, BFS layering and the plain-text instance format.

#include <algorithm>
#include <cstddef>
#include <compare>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "subexp/error.hpp"

namespace subexp {

using Vertex = int;
inline constexpr Vertex kNoVertex = -1;

struct Arc {
    Vertex tail = kNoVertex;
    Vertex head = kNoVertex;

    auto operator<=>(const Arc&) const = default;
};

inline std::string to_string(const Arc& a)
{
    return "(" + std::to_string(a.tail) + "," + std::to_string(a.head) + ")";
}

namespace detail {

// Sorted-vector set helpers; adjacency lists stay sorted at all times.
inline bool sorted_insert(std::vector<Vertex>& xs, Vertex x)
{
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it != xs.end() && *it == x)
        return false;
    xs.insert(it, x);
    return true;
}

inline bool sorted_erase(std::vector<Vertex>& xs, Vertex x)
{
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.end() || *it != x)
        return false;
    xs.erase(it);
    return true;
}

inline bool sorted_contains(const std::vector<Vertex>& xs, Vertex x)
{
    return std::binary_search(xs.begin(), xs.end(), x);
}

} // namespace detail

/// Simple directed graph on vertices 0..n-1: no loops, no parallel arcs.
///
/// Every vertex carries the sorted list of original vertex ids merged into
/// it. A fresh digraph has origins(v) == {v}; contractions take the union,
/// which is what lets solutions on a reduced digraph be mapped back.
class Digraph {
public:
    Digraph() = default;

    explicit Digraph(int n) : out_(check_size(n)), in_(n), origins_(n)
    {
        for (Vertex v = 0; v < n; ++v)
            origins_[v] = {v};
    }

    int vertex_count() const noexcept { return static_cast<int>(out_.size()); }
    std::size_t arc_count() const noexcept { return arc_count_; }

    bool contains(Vertex v) const noexcept { return v >= 0 && v < vertex_count(); }

    /// Adds u->v; returns false if the arc was already present.
    bool add_arc(Vertex u, Vertex v)
    {
        require_vertex(u);
        require_vertex(v);
        if (u == v)
            throw PreconditionError("self-loop on vertex " + std::to_string(u));
        if (!detail::sorted_insert(out_[u], v))
            return false;
        detail::sorted_insert(in_[v], u);
        ++arc_count_;
        return true;
    }

    bool remove_arc(Vertex u, Vertex v)
    {
        require_vertex(u);
        require_vertex(v);
        if (!detail::sorted_erase(out_[u], v))
            return false;
        detail::sorted_erase(in_[v], u);
        --arc_count_;
        return true;
    }

    bool has_arc(Vertex u, Vertex v) const
    {
        return contains(u) && contains(v) && detail::sorted_contains(out_[u], v);
    }
    bool has_arc(const Arc& a) const { return has_arc(a.tail, a.head); }

    std::span<const Vertex> out_neighbors(Vertex v) const { return out_.at(v); }
    std::span<const Vertex> in_neighbors(Vertex v) const { return in_.at(v); }
    int out_degree(Vertex v) const { return static_cast<int>(out_.at(v).size()); }
    int in_degree(Vertex v) const { return static_cast<int>(in_.at(v).size()); }

    /// All arcs in lexicographic order.
    std::vector<Arc> arcs() const
    {
        std::vector<Arc> result;
        result.reserve(arc_count_);
        for (Vertex u = 0; u < vertex_count(); ++u)
            for (Vertex v : out_[u])
                result.push_back({u, v});
        return result;
    }

    const std::vector<Vertex>& origins(Vertex v) const { return origins_.at(v); }

    void set_origins(Vertex v, std::vector<Vertex> origins)
    {
        std::sort(origins.begin(), origins.end());
        origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
        origins_.at(v) = std::move(origins);
    }

    /// Resets merge bookkeeping so that origins(v) == {v}.
    void rebase_origins()
    {
        for (Vertex v = 0; v < vertex_count(); ++v)
            origins_[v] = {v};
    }

    /// The live vertex whose merge record contains `original`, or kNoVertex.
    Vertex vertex_with_origin(Vertex original) const
    {
        for (Vertex v = 0; v < vertex_count(); ++v)
            if (detail::sorted_contains(origins_[v], original))
                return v;
        return kNoVertex;
    }

    Vertex add_vertex(std::vector<Vertex> origins = {})
    {
        out_.emplace_back();
        in_.emplace_back();
        origins_.emplace_back();
        const Vertex v = vertex_count() - 1;
        set_origins(v, std::move(origins));
        return v;
    }

    /// Structural equality: same vertex count and arc set (origins ignored).
    friend bool operator==(const Digraph& a, const Digraph& b)
    {
        return a.out_ == b.out_;
    }

private:
    static std::size_t check_size(int n)
    {
        if (n < 0)
            throw PreconditionError("negative vertex count");
        return static_cast<std::size_t>(n);
    }

    void require_vertex(Vertex v) const
    {
        if (!contains(v))
            throw PreconditionError("vertex " + std::to_string(v) + " out of range");
    }

    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
    std::vector<std::vector<Vertex>> origins_;
    std::size_t arc_count_ = 0;
};

/// Simple undirected graph on vertices 0..n-1.
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    explicit UndirectedGraph(int n) : adj_(n) {}

    int vertex_count() const noexcept { return static_cast<int>(adj_.size()); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    bool add_edge(Vertex u, Vertex v)
    {
        if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
            throw PreconditionError("edge endpoint out of range");
        if (u == v)
            throw PreconditionError("loop on vertex " + std::to_string(u));
        if (!detail::sorted_insert(adj_[u], v))
            return false;
        detail::sorted_insert(adj_[v], u);
        ++edge_count_;
        return true;
    }

    bool has_edge(Vertex u, Vertex v) const
    {
        return u >= 0 && u < vertex_count() && detail::sorted_contains(adj_[u], v);
    }

    std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(v); }
    int degree(Vertex v) const { return static_cast<int>(adj_.at(v).size()); }

    /// Edges as (smaller, larger) pairs in lexicographic order.
    std::vector<std::pair<Vertex, Vertex>> edges() const
    {
        std::vector<std::pair<Vertex, Vertex>> result;
        for (Vertex u = 0; u < vertex_count(); ++u)
            for (Vertex v : adj_[u])
                if (u < v)
                    result.emplace_back(u, v);
        return result;
    }

    friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

private:
    std::vector<std::vector<Vertex>> adj_;
    std::size_t edge_count_ = 0;
};

/// Out-tree of a host digraph on n vertices, stored as a parent map.
///
/// A vertex belongs to the tree iff it is the root or has a parent. Leaves
/// are tree vertices without children, so a single-vertex tree has one leaf
/// (its root). An out-branching is an out-tree that contains every vertex.
class OutTree {
public:
    OutTree() = default;
    OutTree(int host_size, Vertex root) : root_(root), parent_(host_size, kNoVertex)
    {
        if (root < 0 || root >= host_size)
            throw PreconditionError("root out of range");
    }

    Vertex root() const noexcept { return root_; }
    int host_size() const noexcept { return static_cast<int>(parent_.size()); }

    Vertex parent(Vertex v) const { return parent_.at(v); }
    void set_parent(Vertex v, Vertex p)
    {
        if (v == root_)
            throw PreconditionError("the root has no parent");
        parent_.at(v) = p;
    }
    void remove(Vertex v) { parent_.at(v) = kNoVertex; }

    bool contains(Vertex v) const { return v == root_ || parent_.at(v) != kNoVertex; }

    int size() const
    {
        int count = 0;
        for (Vertex v = 0; v < host_size(); ++v)
            count += contains(v) ? 1 : 0;
        return count;
    }

    bool spans() const { return size() == host_size(); }

    std::vector<int> child_counts() const
    {
        std::vector<int> counts(parent_.size(), 0);
        for (Vertex v = 0; v < host_size(); ++v)
            if (parent_[v] != kNoVertex)
                ++counts.at(parent_[v]);
        return counts;
    }

    std::vector<Vertex> children(Vertex v) const
    {
        std::vector<Vertex> result;
        for (Vertex w = 0; w < host_size(); ++w)
            if (parent_[w] == v)
                result.push_back(w);
        return result;
    }

    std::vector<Vertex> vertices() const
    {
        std::vector<Vertex> result;
        for (Vertex v = 0; v < host_size(); ++v)
            if (contains(v))
                result.push_back(v);
        return result;
    }

    std::vector<Vertex> leaves() const
    {
        const auto counts = child_counts();
        std::vector<Vertex> result;
        for (Vertex v = 0; v < host_size(); ++v)
            if (contains(v) && counts[v] == 0)
                result.push_back(v);
        return result;
    }

    int leaf_count() const { return static_cast<int>(leaves().size()); }
    int internal_count() const { return size() - leaf_count(); }

    std::vector<Arc> arcs() const
    {
        std::vector<Arc> result;
        for (Vertex v = 0; v < host_size(); ++v)
            if (parent_[v] != kNoVertex)
                result.push_back({parent_[v], v});
        std::sort(result.begin(), result.end());
        return result;
    }

    /// First violated invariant with respect to `host`, if any.
    std::optional<std::string> check(const Digraph& host) const
    {
        if (host_size() != host.vertex_count())
            return "tree host size differs from digraph";
        if (parent_.at(root_) != kNoVertex)
            return "root has a parent";
        for (Vertex v = 0; v < host_size(); ++v) {
            const Vertex p = parent_[v];
            if (p == kNoVertex)
                continue;
            if (!contains(p))
                return "parent of " + std::to_string(v) + " is not a tree vertex";
            if (!host.has_arc(p, v))
                return "tree arc " + to_string(Arc{p, v}) + " missing from digraph";
        }
        // Every tree vertex must reach the root within host_size() steps.
        for (Vertex v = 0; v < host_size(); ++v) {
            if (!contains(v))
                continue;
            Vertex cur = v;
            int steps = 0;
            while (cur != root_) {
                cur = parent_[cur];
                if (++steps > host_size())
                    return "parent cycle through " + std::to_string(v);
            }
        }
        return std::nullopt;
    }

    friend bool operator==(const OutTree&, const OutTree&) = default;

private:
    Vertex root_ = kNoVertex;
    std::vector<Vertex> parent_;
};

using OutBranching = OutTree;

/// Digraph with a designated root and parameter.
struct RootedInstance {
    Digraph digraph;
    Vertex root = 0;
    int k = 1;

    void validate() const
    {
        if (!digraph.contains(root))
            throw PreconditionError("root " + std::to_string(root) + " is not a vertex");
        if (k < 1)
            throw PreconditionError("parameter k must be positive");
    }
};

inline UndirectedGraph underlying_graph(const Digraph& d)
{
    UndirectedGraph g(d.vertex_count());
    for (const Arc& a : d.arcs())
        g.add_edge(a.tail, a.head);
    return g;
}

/// Index that vertex `w` gets after `u` and `v` are merged: the merged
/// vertex takes min(u, v), max(u, v) disappears and later indices shift down.
inline Vertex index_after_merge(Vertex w, Vertex u, Vertex v)
{
    const Vertex lo = std::min(u, v);
    const Vertex hi = std::max(u, v);
    if (w == hi || w == lo)
        return lo;
    return w > hi ? w - 1 : w;
}

namespace detail {

inline Digraph merge_vertices(const Digraph& d, Vertex u, Vertex v)
{
    const int n = d.vertex_count();
    Digraph result(n - 1);
    for (Vertex w = 0; w < n; ++w) {
        if (w == std::max(u, v))
            continue;
        result.set_origins(index_after_merge(w, u, v), d.origins(w));
    }
    auto merged = d.origins(u);
    merged.insert(merged.end(), d.origins(v).begin(), d.origins(v).end());
    result.set_origins(index_after_merge(u, u, v), std::move(merged));

    for (const Arc& a : d.arcs()) {
        const Vertex t = index_after_merge(a.tail, u, v);
        const Vertex h = index_after_merge(a.head, u, v);
        if (t != h)
            result.add_arc(t, h);
    }
    return result;
}

inline void require_arc(const Digraph& d, const Arc& a, const char* op)
{
    if (!d.has_arc(a))
        throw PreconditionError(std::string(op) + ": arc " + to_string(a) + " not in digraph");
}

} // namespace detail

/// Contraction of the arc u->v: u and v are replaced by one vertex that
/// receives every arc entering u or v and emits every arc leaving u or v.
/// Loops and duplicates vanish. See index_after_merge for numbering.
inline Digraph contract_arc_directed(const Digraph& d, const Arc& arc)
{
    detail::require_arc(d, arc, "contract_arc_directed");
    return detail::merge_vertices(d, arc.tail, arc.head);
}

/// Identification of the endpoints of u->v into a single vertex "uv"
/// carrying the union of their in- and out-arcs. On arc sets this coincides
/// with contract_arc_directed; the two are kept apart because the reduction
/// uses them at different steps with different proof obligations.
inline Digraph identify_arc_endpoints(const Digraph& d, const Arc& arc)
{
    detail::require_arc(d, arc, "identify_arc_endpoints");
    return detail::merge_vertices(d, arc.tail, arc.head);
}

/// Subdigraph induced by `keep`. The i-th smallest kept vertex becomes
/// vertex i and inherits its merge record.
inline Digraph induced_subgraph(const Digraph& d, std::vector<Vertex> keep)
{
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<Vertex> index(d.vertex_count(), kNoVertex);
    for (std::size_t i = 0; i < keep.size(); ++i)
        index.at(keep[i]) = static_cast<Vertex>(i);
    Digraph result(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        result.set_origins(static_cast<Vertex>(i), d.origins(keep[i]));
        for (Vertex w : d.out_neighbors(keep[i]))
            if (index[w] != kNoVertex)
                result.add_arc(static_cast<Vertex>(i), index[w]);
    }
    return result;
}

/// Copy of `d` without the arcs entering `r`. Out-trees rooted at r never
/// use them.
inline Digraph without_arcs_into(const Digraph& d, Vertex r)
{
    Digraph result = d;
    const std::vector<Vertex> sources(d.in_neighbors(r).begin(), d.in_neighbors(r).end());
    for (Vertex u : sources)
        result.remove_arc(u, r);
    return result;
}

struct BfsLayers {
    std::vector<std::vector<Vertex>> layers;  ///< layers[i]: vertices at distance i
    std::vector<Vertex> unreachable;
};

inline std::vector<int> bfs_distances(const UndirectedGraph& g, Vertex source)
{
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<Vertex> queue{source};
    dist.at(source) = 0;
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbors(u)) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

inline BfsLayers bfs_layers(const UndirectedGraph& g, Vertex r)
{
    const auto dist = bfs_distances(g, r);
    BfsLayers result;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (dist[v] < 0) {
            result.unreachable.push_back(v);
            continue;
        }
        if (static_cast<std::size_t>(dist[v]) >= result.layers.size())
            result.layers.resize(dist[v] + 1);
        result.layers[dist[v]].push_back(v);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Instance files.
//
//   # comment
//   n m
//   u v        (m lines, 0-based, arc u->v)
//   root r     (optional)

struct ParsedInstance {
    Digraph digraph;
    std::optional<Vertex> root;
};

inline ParsedInstance parse_instance(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    bool have_header = false;
    int n = 0;
    long long declared_arcs = 0;
    long long arc_lines = 0;
    ParsedInstance result;

    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError(what + " at line " + std::to_string(line_no));
    };

    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream fields(raw);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;)
            tokens.push_back(tok);
        if (tokens.empty())
            continue;

        auto to_int = [&](const std::string& s) -> long long {
            std::size_t used = 0;
            long long value = 0;
            try {
                value = std::stoll(s, &used);
            } catch (const std::exception&) {
                throw fail("malformed line");
            }
            if (used != s.size())
                throw fail("malformed line");
            return value;
        };

        if (!have_header) {
            if (tokens.size() != 2)
                throw fail("malformed header");
            const long long nn = to_int(tokens[0]);
            declared_arcs = to_int(tokens[1]);
            if (nn < 0 || declared_arcs < 0 || nn > 100'000'000)
                throw fail("malformed header");
            n = static_cast<int>(nn);
            result.digraph = Digraph(n);
            have_header = true;
            continue;
        }
        if (tokens[0] == "root") {
            if (tokens.size() != 2 || result.root)
                throw fail("malformed root line");
            const long long r = to_int(tokens[1]);
            if (r < 0 || r >= n)
                throw fail("vertex index out of range");
            result.root = static_cast<Vertex>(r);
            continue;
        }
        if (tokens.size() != 2)
            throw fail("malformed line");
        const long long u = to_int(tokens[0]);
        const long long v = to_int(tokens[1]);
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw fail("vertex index out of range");
        if (u == v)
            throw fail("self-loop");
        result.digraph.add_arc(static_cast<Vertex>(u), static_cast<Vertex>(v));
        ++arc_lines;
    }
    if (!have_header)
        throw ParseError("missing header line");
    if (arc_lines != declared_arcs)
        throw ParseError("header declares " + std::to_string(declared_arcs) + " arcs but " +
                         std::to_string(arc_lines) + " arc lines follow");
    return result;
}

inline Digraph parse_digraph(std::string_view text) { return parse_instance(text).digraph; }

inline std::string serialize_digraph(const Digraph& d, std::optional<Vertex> root = std::nullopt)
{
    std::ostringstream out;
    out << d.vertex_count() << ' ' << d.arc_count() << '\n';
    for (const Arc& a : d.arcs())
        out << a.tail << ' ' << a.head << '\n';
    if (root)
        out << "root " << *root << '\n';
    return out.str();
}

} // namespace subexp
