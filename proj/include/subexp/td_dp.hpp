#pragma once

// Exact dynamic programming over nice tree decompositions of UG(D) for
// out-forest shaped solutions: spanning out-branchings with many leaves,
// small out-trees with many internal vertices, and long directed paths.
//
// All three run one engine. A partial solution is an out-forest on the
// processed vertices; per bag vertex the state records membership, whether
// a parent / a child has been chosen and which fragment (component) it is
// in. Arcs between v and the bag are chosen when v is forgotten, which is the
// unique node where every neighbour of v is either in the bag or already
// decided. Fragments are tracked as set partitions of the bag, so tables
// are bounded by Bell(w+1) * 8^(w+1) per node.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subexp/digraph.hpp"
#include "subexp/treewidth.hpp"

namespace subexp {

struct DpLimits {
    std::size_t max_states_per_node = 4'000'000;
};

struct DpTelemetry {
    int width = -1;
    std::size_t nice_nodes = 0;
    std::size_t max_table_size = 0;
    std::size_t total_states = 0;
};

struct MaxLeavesResult {
    std::optional<int> max_leaves;   ///< none if no r-out-branching exists
    std::optional<OutBranching> witness;
    DpTelemetry telemetry;
};

struct MaxInternalResult {
    std::optional<int> internal_count;  ///< best over r-out-trees with size <= cap
    int tree_size = 0;                  ///< smallest size achieving it
    std::optional<OutTree> witness;
    DpTelemetry telemetry;
};

struct LongestPathResult {
    int length = -1;            ///< arcs on the longest simple directed path
    std::vector<Vertex> path;   ///< its vertices in order
    DpTelemetry telemetry;
};

namespace detail {

enum class Objective { leaves, internal, vertices };

struct ForestPolicy {
    Vertex root = kNoVertex;   ///< fixed root; kNoVertex lets every fragment pick its own
    bool spanning = false;     ///< every vertex must be in the forest
    bool single_child = false; ///< out-degree at most one (paths)
    int size_cap = -1;         ///< -1: unbounded
    Objective objective = Objective::leaves;
};

struct Slot {
    bool in = false;
    bool has_parent = false;
    bool has_child = false;
    int comp = 0;
};

struct DpState {
    std::vector<Slot> slots;   ///< aligned with the sorted bag
    bool sealed = false;       ///< the whole tree is complete and forgotten
    bool any_tree = false;     ///< some processed vertex is in the tree
    int size = 0;              ///< forgotten tree vertices
};

inline std::string encode(const DpState& s)
{
    std::string key;
    key.reserve(2 * s.slots.size() + 4);
    std::vector<int> relabel;
    for (const Slot& slot : s.slots) {
        key.push_back(static_cast<char>((slot.in ? 1 : 0) | (slot.has_parent ? 2 : 0) |
                                        (slot.has_child ? 4 : 0)));
        int label = 0;
        if (slot.in) {
            auto it = std::find(relabel.begin(), relabel.end(), slot.comp);
            if (it == relabel.end()) {
                relabel.push_back(slot.comp);
                label = static_cast<int>(relabel.size());
            } else {
                label = static_cast<int>(it - relabel.begin()) + 1;
            }
        }
        key.push_back(static_cast<char>(label));
    }
    key.push_back(static_cast<char>((s.sealed ? 1 : 0) | (s.any_tree ? 2 : 0)));
    key.push_back(static_cast<char>(s.size & 0xff));
    key.push_back(static_cast<char>((s.size >> 8) & 0xff));
    return key;
}

inline DpState decode(const std::string& key)
{
    DpState s;
    const std::size_t slots = (key.size() - 3) / 2;
    s.slots.resize(slots);
    for (std::size_t i = 0; i < slots; ++i) {
        const auto flags = static_cast<unsigned char>(key[2 * i]);
        s.slots[i].in = flags & 1;
        s.slots[i].has_parent = flags & 2;
        s.slots[i].has_child = flags & 4;
        s.slots[i].comp = static_cast<unsigned char>(key[2 * i + 1]);
    }
    const auto tail = static_cast<unsigned char>(key[2 * slots]);
    s.sealed = tail & 1;
    s.any_tree = tail & 2;
    s.size = static_cast<unsigned char>(key[2 * slots + 1]) |
             (static_cast<unsigned char>(key[2 * slots + 2]) << 8);
    return s;
}

struct Entry {
    int value = 0;
    const std::string* from[2] = {nullptr, nullptr};
    std::vector<Arc> arcs;         ///< arcs chosen at this forget node
    Vertex member = kNoVertex;     ///< vertex forgotten here as a tree vertex
};

using Table = std::map<std::string, Entry>;

inline int tree_slots(const DpState& s)
{
    int c = 0;
    for (const Slot& slot : s.slots)
        c += slot.in ? 1 : 0;
    return c;
}

inline void merge_labels(DpState& s, int keep, int drop)
{
    for (Slot& slot : s.slots)
        if (slot.in && slot.comp == drop)
            slot.comp = keep;
}

class OutForestDp {
public:
    OutForestDp(const Digraph& d, const ForestPolicy& policy, const TreeDecomposition& td,
                const DpLimits& limits)
        : d_(d), policy_(policy), limits_(limits)
    {
        const UndirectedGraph g = underlying_graph(d);
        nice_ = make_nice(g, td);
        telemetry_.width = nice_.width();
        telemetry_.nice_nodes = nice_.nodes.size();
        if (policy_.size_cap >= 0xffff)
            policy_.size_cap = -1;
        run();
    }

    const DpTelemetry& telemetry() const { return telemetry_; }

    /// Key of the best sealed root state, or nullptr if there is none.
    const std::string* best() const
    {
        const Table& root = tables_[nice_.root];
        const std::string* best = nullptr;
        int best_value = 0;
        int best_size = 0;
        for (const auto& [key, entry] : root) {
            const DpState s = decode(key);
            if (!s.sealed)
                continue;
            const bool better = best == nullptr || entry.value > best_value ||
                                (entry.value == best_value && s.size < best_size);
            if (better) {
                best = &key;
                best_value = entry.value;
                best_size = s.size;
            }
        }
        return best;
    }

    int value_of(const std::string* key) const { return tables_[nice_.root].at(*key).value; }

    /// Chosen arcs and tree vertices of the solution ending in `key`.
    void reconstruct(const std::string* key, std::vector<Arc>& arcs,
                     std::vector<Vertex>& members) const
    {
        std::vector<std::pair<int, const std::string*>> stack{{nice_.root, key}};
        while (!stack.empty()) {
            auto [node, k] = stack.back();
            stack.pop_back();
            const Entry& e = tables_[node].at(*k);
            arcs.insert(arcs.end(), e.arcs.begin(), e.arcs.end());
            if (e.member != kNoVertex)
                members.push_back(e.member);
            const auto& children = nice_.nodes[node].children;
            for (std::size_t i = 0; i < children.size(); ++i)
                stack.emplace_back(children[i], e.from[i]);
        }
    }

private:
    void relax(Table& table, DpState& s, int value, Entry&& proto)
    {
        auto key = encode(s);
        auto [it, inserted] = table.try_emplace(std::move(key));
        if (inserted || value > it->second.value) {
            proto.value = value;
            it->second = std::move(proto);
        }
    }

    int gain(const Slot& v) const
    {
        switch (policy_.objective) {
        case Objective::leaves: return v.has_child ? 0 : 1;
        case Objective::internal: return v.has_child ? 1 : 0;
        case Objective::vertices: return 1;
        }
        return 0;
    }

    bool within_cap(int size, int bag_tree) const
    {
        return policy_.size_cap < 0 || size + bag_tree <= policy_.size_cap;
    }

    void run()
    {
        tables_.resize(nice_.nodes.size());
        for (std::size_t i = 0; i < nice_.nodes.size(); ++i) {
            const NiceNode& node = nice_.nodes[i];
            Table& out = tables_[i];
            switch (node.kind) {
            case NiceNode::Kind::leaf: {
                DpState s;
                relax(out, s, 0, Entry{});
                break;
            }
            case NiceNode::Kind::introduce:
                introduce(node, tables_[node.children[0]], out);
                break;
            case NiceNode::Kind::forget:
                forget(node, tables_[node.children[0]], out);
                break;
            case NiceNode::Kind::join:
                join(tables_[node.children[0]], tables_[node.children[1]], out);
                break;
            }
            telemetry_.max_table_size = std::max(telemetry_.max_table_size, out.size());
            telemetry_.total_states += out.size();
            if (out.size() > limits_.max_states_per_node)
                throw BudgetExceeded("DP table exceeds " +
                                     std::to_string(limits_.max_states_per_node) + " states");
        }
    }

    void introduce(const NiceNode& node, const Table& child, Table& out)
    {
        const Vertex v = node.vertex;
        const auto pos = std::lower_bound(node.bag.begin(), node.bag.end(), v) - node.bag.begin();
        const bool must_join = policy_.spanning || v == policy_.root;
        for (const auto& [key, entry] : child) {
            DpState s = decode(key);
            if (!must_join) {
                DpState t = s;
                t.slots.insert(t.slots.begin() + pos, Slot{});
                Entry e;
                e.from[0] = &key;
                relax(out, t, entry.value, std::move(e));
            }
            if (s.sealed || !within_cap(s.size, tree_slots(s) + 1))
                continue;
            int fresh = 1;
            for (const Slot& slot : s.slots)
                fresh = std::max(fresh, slot.comp + 1);
            s.slots.insert(s.slots.begin() + pos, Slot{true, false, false, fresh});
            s.any_tree = true;
            Entry e;
            e.from[0] = &key;
            relax(out, s, entry.value, std::move(e));
        }
    }

    void forget(const NiceNode& node, const Table& child, Table& out)
    {
        const Vertex v = node.vertex;
        // Child bag is node.bag plus v.
        std::vector<Vertex> child_bag = node.bag;
        detail::sorted_insert(child_bag, v);
        const auto pos = std::lower_bound(child_bag.begin(), child_bag.end(), v) - child_bag.begin();

        for (const auto& [key, entry] : child) {
            DpState s = decode(key);
            if (!s.slots[pos].in) {
                DpState t = s;
                t.slots.erase(t.slots.begin() + pos);
                Entry e;
                e.from[0] = &key;
                relax(out, t, entry.value, std::move(e));
                continue;
            }
            std::vector<std::size_t> candidates;
            for (std::size_t j = 0; j < child_bag.size(); ++j) {
                if (static_cast<std::ptrdiff_t>(j) == pos || !s.slots[j].in)
                    continue;
                if (d_.has_arc(v, child_bag[j]) || d_.has_arc(child_bag[j], v))
                    candidates.push_back(j);
            }
            std::vector<Arc> chosen;
            choose(s, key, entry.value, child_bag, static_cast<std::size_t>(pos), candidates, 0,
                   chosen, out);
        }
    }

    void choose(DpState& s, const std::string& key, int value, const std::vector<Vertex>& bag,
                std::size_t pos, const std::vector<std::size_t>& candidates, std::size_t next,
                std::vector<Arc>& chosen, Table& out)
    {
        if (next == candidates.size()) {
            finish_forget(s, key, value, bag, pos, chosen, out);
            return;
        }
        const std::size_t j = candidates[next];
        const Vertex v = bag[pos];
        const Vertex w = bag[j];

        choose(s, key, value, bag, pos, candidates, next + 1, chosen, out);

        Slot& sv = s.slots[pos];
        Slot& sw = s.slots[j];
        if (sv.comp == sw.comp)
            return;  // either arc would close a cycle

        if (d_.has_arc(v, w) && !sw.has_parent && w != policy_.root &&
            !(policy_.single_child && sv.has_child)) {
            DpState t = s;
            t.slots[j].has_parent = true;
            t.slots[pos].has_child = true;
            merge_labels(t, t.slots[pos].comp, t.slots[j].comp);
            chosen.push_back({v, w});
            choose(t, key, value, bag, pos, candidates, next + 1, chosen, out);
            chosen.pop_back();
        }
        if (d_.has_arc(w, v) && !sv.has_parent && v != policy_.root &&
            !(policy_.single_child && sw.has_child)) {
            DpState t = s;
            t.slots[pos].has_parent = true;
            t.slots[j].has_child = true;
            merge_labels(t, t.slots[pos].comp, t.slots[j].comp);
            chosen.push_back({w, v});
            choose(t, key, value, bag, pos, candidates, next + 1, chosen, out);
            chosen.pop_back();
        }
    }

    void finish_forget(const DpState& s, const std::string& key, int value,
                       const std::vector<Vertex>& bag, std::size_t pos,
                       const std::vector<Arc>& chosen, Table& out)
    {
        const Vertex v = bag[pos];
        const Slot sv = s.slots[pos];
        if (policy_.root != kNoVertex && v != policy_.root && !sv.has_parent)
            return;
        DpState t = s;
        t.slots.erase(t.slots.begin() + pos);
        bool linked = false;
        bool others = false;
        for (const Slot& slot : t.slots) {
            if (!slot.in)
                continue;
            others = true;
            linked = linked || slot.comp == sv.comp;
        }
        if (!linked) {
            // v closes its fragment for good: it must be the whole tree.
            if (others || t.sealed)
                return;
            t.sealed = true;
        }
        t.size += 1;
        Entry e;
        e.from[0] = &key;
        e.arcs = chosen;
        e.member = v;
        relax(out, t, value + gain(sv), std::move(e));
    }

    void join(const Table& left, const Table& right, Table& out)
    {
        // Only states with identical membership can be combined.
        std::map<std::string, std::vector<const std::string*>> by_mask;
        auto mask_of = [](const std::string& key) {
            std::string mask;
            for (std::size_t i = 0; i + 3 < key.size(); i += 2)
                mask.push_back(static_cast<char>(key[i] & 1));
            return mask;
        };
        for (const auto& [key, entry] : right)
            by_mask[mask_of(key)].push_back(&key);

        for (const auto& [lkey, lentry] : left) {
            auto bucket = by_mask.find(mask_of(lkey));
            if (bucket == by_mask.end())
                continue;
            const DpState a = decode(lkey);
            for (const std::string* rkey : bucket->second) {
                const DpState b = decode(*rkey);
                if ((a.sealed && b.any_tree) || (b.sealed && a.any_tree))
                    continue;
                DpState t;
                if (!combine(a, b, t))
                    continue;
                if (!within_cap(t.size, tree_slots(t)))
                    continue;
                Entry e;
                e.from[0] = &lkey;
                e.from[1] = rkey;
                relax(out, t, lentry.value + right.at(*rkey).value, std::move(e));
            }
        }
    }

    bool combine(const DpState& a, const DpState& b, DpState& t) const
    {
        const std::size_t k = a.slots.size();
        t.slots = a.slots;
        t.sealed = a.sealed || b.sealed;
        t.any_tree = a.any_tree || b.any_tree;
        t.size = a.size + b.size;
        // Union-find over bag positions: left fragments first, then right
        // fragments as chains; a union inside one set means a cycle.
        std::vector<std::size_t> uf(k);
        for (std::size_t i = 0; i < k; ++i)
            uf[i] = i;
        auto find = [&](std::size_t x) {
            while (uf[x] != x)
                x = uf[x] = uf[uf[x]];
            return x;
        };
        for (std::size_t i = 0; i < k; ++i) {
            if (!a.slots[i].in)
                continue;
            const Slot& x = a.slots[i];
            const Slot& y = b.slots[i];
            if (x.has_parent && y.has_parent)
                return false;
            if (policy_.single_child && x.has_child && y.has_child)
                return false;
            t.slots[i].has_parent = x.has_parent || y.has_parent;
            t.slots[i].has_child = x.has_child || y.has_child;
            for (std::size_t j = 0; j < i; ++j)
                if (a.slots[j].in && a.slots[j].comp == x.comp) {
                    uf[find(i)] = find(j);
                    break;
                }
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (!b.slots[i].in)
                continue;
            for (std::size_t j = 0; j < i; ++j) {
                if (b.slots[j].in && b.slots[j].comp == b.slots[i].comp) {
                    const auto ri = find(i);
                    const auto rj = find(j);
                    if (ri == rj)
                        return false;
                    uf[ri] = rj;
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < k; ++i)
            if (t.slots[i].in)
                t.slots[i].comp = static_cast<int>(find(i)) + 1;
        return true;
    }

    const Digraph& d_;
    ForestPolicy policy_;
    DpLimits limits_;
    NiceDecomposition nice_;
    std::vector<Table> tables_;
    DpTelemetry telemetry_;
};

inline void require_root(const Digraph& d, Vertex r)
{
    if (!d.contains(r))
        throw PreconditionError("root " + std::to_string(r) + " is not a vertex");
}

} // namespace detail

/// Maximum number of leaves over all spanning r-out-branchings of `d`.
inline MaxLeavesResult dp_max_leaves(const Digraph& d, Vertex r, const TreeDecomposition& td,
                                     const DpLimits& limits = {})
{
    detail::require_root(d, r);
    detail::ForestPolicy policy;
    policy.root = r;
    policy.spanning = true;
    policy.objective = detail::Objective::leaves;
    detail::OutForestDp dp(d, policy, td, limits);

    MaxLeavesResult result;
    result.telemetry = dp.telemetry();
    const std::string* best = dp.best();
    if (!best)
        return result;
    std::vector<Arc> arcs;
    std::vector<Vertex> members;
    dp.reconstruct(best, arcs, members);
    OutTree tree(d.vertex_count(), r);
    for (const Arc& a : arcs)
        tree.set_parent(a.head, a.tail);
    result.max_leaves = dp.value_of(best);
    result.witness = std::move(tree);
    return result;
}

/// Maximum internal-vertex count over r-out-trees with at most `size_cap`
/// vertices; among optimal trees the smallest is reported.
inline MaxInternalResult dp_max_internal_outtree(const Digraph& d, Vertex r,
                                                 const TreeDecomposition& td, int size_cap,
                                                 const DpLimits& limits = {})
{
    detail::require_root(d, r);
    if (size_cap < 1)
        throw PreconditionError("size_cap must be at least 1");
    detail::ForestPolicy policy;
    policy.root = r;
    policy.size_cap = std::min(size_cap, d.vertex_count());
    policy.objective = detail::Objective::internal;
    detail::OutForestDp dp(d, policy, td, limits);

    MaxInternalResult result;
    result.telemetry = dp.telemetry();
    const std::string* best = dp.best();
    if (!best)
        return result;
    std::vector<Arc> arcs;
    std::vector<Vertex> members;
    dp.reconstruct(best, arcs, members);
    OutTree tree(d.vertex_count(), r);
    for (const Arc& a : arcs)
        tree.set_parent(a.head, a.tail);
    result.internal_count = dp.value_of(best);
    result.tree_size = static_cast<int>(members.size());
    result.witness = std::move(tree);
    return result;
}

/// Longest simple directed path, measured in arcs.
inline LongestPathResult dp_longest_path(const Digraph& d, const TreeDecomposition& td,
                                         const DpLimits& limits = {})
{
    LongestPathResult result;
    if (d.vertex_count() == 0)
        return result;
    detail::ForestPolicy policy;
    policy.single_child = true;
    policy.objective = detail::Objective::vertices;
    detail::OutForestDp dp(d, policy, td, limits);
    result.telemetry = dp.telemetry();
    const std::string* best = dp.best();
    if (!best)
        return result;  // unreachable for non-empty graphs
    std::vector<Arc> arcs;
    std::vector<Vertex> members;
    dp.reconstruct(best, arcs, members);
    std::vector<Vertex> next(d.vertex_count(), kNoVertex);
    std::vector<bool> has_parent(d.vertex_count(), false);
    for (const Arc& a : arcs) {
        next[a.tail] = a.head;
        has_parent[a.head] = true;
    }
    Vertex start = kNoVertex;
    for (Vertex v : members)
        if (!has_parent[v] && (start == kNoVertex || v < start))
            start = v;
    for (Vertex v = start; v != kNoVertex; v = next[v])
        result.path.push_back(v);
    result.length = dp.value_of(best) - 1;
    return result;
}

} // namespace subexp
