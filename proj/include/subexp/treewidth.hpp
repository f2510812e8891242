#pragma once

// Tree decompositions: greedy elimination heuristics, an exact subset DP for
// small graphs, axiom validation, nice-form conversion and text export.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "subexp/digraph.hpp"

namespace subexp {

struct TreeDecomposition {
    std::vector<std::vector<Vertex>> bags;        ///< each sorted
    std::vector<std::pair<int, int>> edges;       ///< tree edges between bag indices

    int node_count() const { return static_cast<int>(bags.size()); }

    /// Largest bag size minus one; -1 when every bag is empty.
    int width() const
    {
        int w = -1;
        for (const auto& bag : bags)
            w = std::max(w, static_cast<int>(bag.size()) - 1);
        return w;
    }
};

enum class EliminationStrategy { min_degree, min_fill };

namespace detail {

class FillGraph {
public:
    explicit FillGraph(const UndirectedGraph& g)
        : adj_(g.vertex_count()), alive_(g.vertex_count(), true)
    {
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            adj_[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    }

    const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
    bool alive(Vertex v) const { return alive_[v]; }

    long long fill_in(Vertex v) const
    {
        const auto& nb = adj_[v];
        long long missing = 0;
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
                if (!sorted_contains(adj_[nb[i]], nb[j]))
                    ++missing;
        return missing;
    }

    /// Turns N(v) into a clique and removes v.
    void eliminate(Vertex v)
    {
        const auto nb = adj_[v];
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                sorted_insert(adj_[nb[i]], nb[j]);
                sorted_insert(adj_[nb[j]], nb[i]);
            }
        }
        for (Vertex w : nb)
            sorted_erase(adj_[w], v);
        adj_[v].clear();
        alive_[v] = false;
    }

private:
    std::vector<std::vector<Vertex>> adj_;
    std::vector<bool> alive_;
};

} // namespace detail

/// Greedy elimination order; ties go to the lowest vertex id.
inline std::vector<Vertex> elimination_ordering(const UndirectedGraph& g,
                                                EliminationStrategy strategy)
{
    const int n = g.vertex_count();
    detail::FillGraph fill(g);
    std::vector<Vertex> order;
    order.reserve(n);
    for (int step = 0; step < n; ++step) {
        Vertex best = kNoVertex;
        long long best_score = std::numeric_limits<long long>::max();
        for (Vertex v = 0; v < n; ++v) {
            if (!fill.alive(v))
                continue;
            const long long score = strategy == EliminationStrategy::min_degree
                                        ? static_cast<long long>(fill.neighbors(v).size())
                                        : fill.fill_in(v);
            if (score < best_score) {
                best_score = score;
                best = v;
            }
        }
        order.push_back(best);
        fill.eliminate(best);
    }
    return order;
}

/// Decomposition induced by an elimination order: one bag per vertex holding
/// it and its not-yet-eliminated fill neighbours, hung below the bag of the
/// earliest-eliminated such neighbour. Separate trees are chained together.
inline TreeDecomposition decomposition_from_ordering(const UndirectedGraph& g,
                                                     std::span<const Vertex> order)
{
    const int n = g.vertex_count();
    if (static_cast<int>(order.size()) != n)
        throw PreconditionError("elimination order must list every vertex once");
    std::vector<int> position(n, -1);
    for (int i = 0; i < n; ++i) {
        if (order[i] < 0 || order[i] >= n || position[order[i]] != -1)
            throw PreconditionError("elimination order must list every vertex once");
        position[order[i]] = i;
    }

    TreeDecomposition td;
    if (n == 0) {
        td.bags.emplace_back();
        return td;
    }
    detail::FillGraph fill(g);
    td.bags.resize(n);
    std::vector<int> parent(n, -1);
    for (int i = 0; i < n; ++i) {
        const Vertex v = order[i];
        auto bag = fill.neighbors(v);
        int first = -1;
        for (Vertex w : bag)
            if (first == -1 || position[w] < first)
                first = position[w];
        parent[i] = first;
        bag.push_back(v);
        std::sort(bag.begin(), bag.end());
        td.bags[i] = std::move(bag);
        fill.eliminate(v);
    }
    int previous_root = -1;
    for (int i = 0; i < n; ++i) {
        if (parent[i] != -1) {
            td.edges.emplace_back(i, parent[i]);
        } else {
            if (previous_root != -1)
                td.edges.emplace_back(previous_root, i);
            previous_root = i;
        }
    }
    return td;
}

inline TreeDecomposition greedy_decomposition(const UndirectedGraph& g,
                                              EliminationStrategy strategy = EliminationStrategy::min_fill)
{
    const auto order = elimination_ordering(g, strategy);
    return decomposition_from_ordering(g, order);
}

struct ExactTreewidth {
    int width = -1;
    std::vector<Vertex> ordering;
    TreeDecomposition decomposition;
};

inline constexpr int kExactTreewidthLimit = 14;

/// Exact treewidth by dynamic programming over vertex subsets S, where
/// TW(S) is the best width of eliminating S first:
///   TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)
/// and Q(S, v) are the vertices outside S + v reachable from v through S.
inline ExactTreewidth exact_treewidth_small(const UndirectedGraph& g)
{
    const int n = g.vertex_count();
    if (n > kExactTreewidthLimit)
        throw PreconditionError("exact_treewidth_small supports at most " +
                                std::to_string(kExactTreewidthLimit) + " vertices, got " +
                                std::to_string(n));
    ExactTreewidth result;
    if (n == 0) {
        result.decomposition.bags.emplace_back();
        return result;
    }
    std::vector<std::uint32_t> nbr(n, 0);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : g.neighbors(v))
            nbr[v] |= 1u << w;

    auto q_size = [&](std::uint32_t s, Vertex v) {
        // BFS from v inside s; count frontier vertices outside s + v.
        std::uint32_t visited = 1u << v;
        std::uint32_t frontier = 1u << v;
        std::uint32_t outside = 0;
        while (frontier) {
            std::uint32_t next = 0;
            for (std::uint32_t f = frontier; f; f &= f - 1) {
                const int u = __builtin_ctz(f);
                next |= nbr[u];
            }
            next &= ~visited;
            visited |= next;
            outside |= next & ~s;
            frontier = next & s;
        }
        return __builtin_popcount(outside);
    };

    const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
    std::vector<int> tw(std::size_t{1} << n, std::numeric_limits<int>::max());
    std::vector<std::int8_t> last(std::size_t{1} << n, -1);
    tw[0] = -1;
    for (std::uint32_t s = 1; s <= full; ++s) {
        for (std::uint32_t rest = s; rest; rest &= rest - 1) {
            const int v = __builtin_ctz(rest);
            const std::uint32_t prev = s & ~(1u << v);
            const int value = std::max(tw[prev], q_size(prev, v));
            if (value < tw[s]) {
                tw[s] = value;
                last[s] = static_cast<std::int8_t>(v);
            }
        }
    }
    result.width = tw[full];
    std::vector<Vertex> reversed;
    for (std::uint32_t s = full; s; s &= ~(1u << last[s]))
        reversed.push_back(last[s]);
    result.ordering.assign(reversed.rbegin(), reversed.rend());
    result.decomposition = decomposition_from_ordering(g, result.ordering);
    return result;
}

struct Violation {
    enum class Kind { bad_vertex, not_a_tree, vertex_coverage, edge_coverage, coherence };
    Kind kind;
    std::string message;
};

/// Checks the three decomposition axioms plus that the node graph is a tree.
inline std::vector<Violation> validate_decomposition(const UndirectedGraph& g,
                                                     const TreeDecomposition& td)
{
    std::vector<Violation> out;
    const int nodes = td.node_count();
    const int n = g.vertex_count();

    for (int i = 0; i < nodes; ++i)
        for (Vertex v : td.bags[i])
            if (v < 0 || v >= n)
                out.push_back({Violation::Kind::bad_vertex,
                               "bag " + std::to_string(i) + " holds unknown vertex " + std::to_string(v)});
    if (!out.empty())
        return out;

    // Tree shape: nodes-1 edges and connected.
    std::vector<std::vector<int>> tree(nodes);
    bool edges_ok = true;
    for (auto [a, b] : td.edges) {
        if (a < 0 || b < 0 || a >= nodes || b >= nodes || a == b) {
            edges_ok = false;
            continue;
        }
        tree[a].push_back(b);
        tree[b].push_back(a);
    }
    if (nodes == 0 || !edges_ok || static_cast<int>(td.edges.size()) != nodes - 1) {
        out.push_back({Violation::Kind::not_a_tree, "decomposition nodes do not form a tree"});
    } else {
        std::vector<bool> seen(nodes, false);
        std::vector<int> stack{0};
        seen[0] = true;
        int count = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w : tree[u])
                if (!seen[w]) {
                    seen[w] = true;
                    ++count;
                    stack.push_back(w);
                }
        }
        if (count != nodes)
            out.push_back({Violation::Kind::not_a_tree, "decomposition tree is disconnected"});
    }

    std::vector<std::vector<int>> holders(n);
    for (int i = 0; i < nodes; ++i)
        for (Vertex v : td.bags[i])
            holders[v].push_back(i);

    for (Vertex v = 0; v < n; ++v)
        if (holders[v].empty())
            out.push_back({Violation::Kind::vertex_coverage,
                           "vertex " + std::to_string(v) + " is in no bag"});

    for (auto [u, v] : g.edges()) {
        bool covered = false;
        for (int i : holders[u])
            if (std::binary_search(td.bags[i].begin(), td.bags[i].end(), v)) {
                covered = true;
                break;
            }
        if (!covered)
            out.push_back({Violation::Kind::edge_coverage,
                           "edge {" + std::to_string(u) + "," + std::to_string(v) + "} is in no bag"});
    }

    // Coherence: the nodes holding v induce a connected subgraph of the tree.
    for (Vertex v = 0; v < n; ++v) {
        if (holders[v].size() <= 1)
            continue;
        std::vector<bool> holds(nodes, false);
        for (int i : holders[v])
            holds[i] = true;
        std::vector<bool> seen(nodes, false);
        std::vector<int> stack{holders[v][0]};
        seen[holders[v][0]] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w : tree[u])
                if (holds[w] && !seen[w]) {
                    seen[w] = true;
                    ++count;
                    stack.push_back(w);
                }
        }
        if (count != holders[v].size())
            out.push_back({Violation::Kind::coherence,
                           "bags holding vertex " + std::to_string(v) + " are not contiguous"});
    }
    return out;
}

inline void require_valid(const UndirectedGraph& g, const TreeDecomposition& td)
{
    const auto violations = validate_decomposition(g, td);
    if (!violations.empty())
        throw ValidationError("invalid tree decomposition: " + violations.front().message);
}

struct NiceNode {
    enum class Kind { leaf, introduce, forget, join };
    Kind kind = Kind::leaf;
    std::vector<Vertex> bag;   ///< sorted
    Vertex vertex = kNoVertex; ///< introduced/forgotten vertex
    std::vector<int> children;
};

/// Rooted nice decomposition. Leaves and the root have empty bags, so every
/// vertex is introduced at least once and forgotten exactly once.
struct NiceDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;

    int width() const
    {
        int w = -1;
        for (const auto& node : nodes)
            w = std::max(w, static_cast<int>(node.bag.size()) - 1);
        return w;
    }

    TreeDecomposition as_tree_decomposition() const
    {
        TreeDecomposition td;
        for (const auto& node : nodes)
            td.bags.push_back(node.bag);
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
            for (int c : nodes[i].children)
                td.edges.emplace_back(i, c);
        return td;
    }
};

inline NiceDecomposition make_nice(const UndirectedGraph& g, const TreeDecomposition& td)
{
    require_valid(g, td);
    NiceDecomposition nice;
    auto add = [&](NiceNode node) {
        nice.nodes.push_back(std::move(node));
        return static_cast<int>(nice.nodes.size()) - 1;
    };
    auto add_leaf = [&]() { return add({NiceNode::Kind::leaf, {}, kNoVertex, {}}); };

    // Walks from a node with bag `from` up to bag `to`: forgets, then introduces.
    auto transition = [&](int node, std::vector<Vertex> from, const std::vector<Vertex>& to) {
        for (Vertex v : std::vector<Vertex>(from)) {
            if (std::binary_search(to.begin(), to.end(), v))
                continue;
            detail::sorted_erase(from, v);
            node = add({NiceNode::Kind::forget, from, v, {node}});
        }
        for (Vertex v : to) {
            if (std::binary_search(from.begin(), from.end(), v))
                continue;
            detail::sorted_insert(from, v);
            node = add({NiceNode::Kind::introduce, from, v, {node}});
        }
        return node;
    };

    const int nodes = td.node_count();
    std::vector<std::vector<int>> tree(nodes);
    for (auto [a, b] : td.edges) {
        tree[a].push_back(b);
        tree[b].push_back(a);
    }
    std::vector<std::vector<Vertex>> bags = td.bags;
    for (auto& bag : bags) {
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    }

    // Iterative post-order from node 0.
    std::vector<int> parent(nodes, -1), order;
    std::vector<int> stack{0};
    std::vector<bool> seen(nodes, false);
    seen[0] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (int w : tree[u])
            if (!seen[w]) {
                seen[w] = true;
                parent[w] = u;
                stack.push_back(w);
            }
    }
    std::vector<int> top(nodes, -1);  // nice node whose bag equals bags[u]
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int u = *it;
        std::vector<int> branches;
        for (int w : tree[u]) {
            if (w == parent[u])
                continue;
            branches.push_back(transition(top[w], bags[w], bags[u]));
        }
        if (branches.empty()) {
            branches.push_back(transition(add_leaf(), {}, bags[u]));
        }
        int current = branches[0];
        for (std::size_t i = 1; i < branches.size(); ++i)
            current = add({NiceNode::Kind::join, bags[u], kNoVertex, {current, branches[i]}});
        top[u] = current;
    }
    nice.root = transition(top[0], bags[0], {});
    return nice;
}

/// Text export: "node: v1 v2 ..." per bag, then "edge a b" per tree edge.
inline void write_decomposition(std::ostream& out, const TreeDecomposition& td)
{
    for (int i = 0; i < td.node_count(); ++i) {
        out << i << ':';
        for (Vertex v : td.bags[i])
            out << ' ' << v;
        out << '\n';
    }
    for (auto [a, b] : td.edges)
        out << "edge " << a << ' ' << b << '\n';
}

} // namespace subexp
