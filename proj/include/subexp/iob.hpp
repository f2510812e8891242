#pragma once

// k-Internal Out-Branching by BFS layering.
//
// A yes instance has a minimal r-out-tree with k internal vertices and at
// most 2k-1 vertices. BFS layers from r are grouped into s+1 classes
// (s = ceil(sqrt k)) by layer index modulo s+1; one class meets the tree in
// at most ceil(2 sqrt k) vertices. For every class P_a and every small
// Z of P_a we search D[V \ P_a + Z] for such a tree: deleting the rest of
// P_a cuts the layer sequence into slabs of depth <= s, which keeps the
// width small on planar inputs.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "subexp/connectivity.hpp"
#include "subexp/digraph.hpp"
#include "subexp/td_dp.hpp"
#include "subexp/treewidth.hpp"

namespace subexp {

/// Smallest s with s*s >= k.
inline int ceil_sqrt(int k)
{
    int s = 0;
    while (s * s < k)
        ++s;
    return s;
}

/// Smallest z with z >= 2 sqrt(k).
inline int ceil_two_sqrt(int k)
{
    int z = 0;
    while (z * z < 4 * k)
        ++z;
    return z;
}

/// Vertex cap for a minimal out-tree with k internal vertices. For k = 1 the
/// tree is an arc, so the cap is 2.
inline int minimal_tree_size_cap(int k)
{
    return std::max(2 * k - 1, 2);
}

// ---------------------------------------------------------------------------
// Kernel hook.

inline std::int64_t iob_kernel_bound(int k)
{
    return 8LL * k * k + 6LL * k;
}

struct KernelResult {
    std::vector<Vertex> kept;
    int k = 0;
};

using KernelStrategy = std::function<KernelResult(const Digraph&, int)>;

struct KernelOutput {
    Digraph digraph;
    int k = 0;
    std::vector<Vertex> kept;  ///< kept[i] is the input index of kernel vertex i
};

/// Applies `strategy` (identity if empty). The strategy only names the
/// vertices to keep; the kernel is the induced subdigraph on them.
inline KernelOutput kernel_stage(const Digraph& d, int k, const KernelStrategy& strategy = {})
{
    if (k < 1)
        throw PreconditionError("kernel_stage: k must be positive");
    KernelOutput out;
    if (!strategy) {
        out.digraph = d;
        out.k = k;
        out.kept.resize(d.vertex_count());
        for (Vertex v = 0; v < d.vertex_count(); ++v)
            out.kept[v] = v;
        return out;
    }
    KernelResult res = strategy(d, k);
    std::sort(res.kept.begin(), res.kept.end());
    if (std::adjacent_find(res.kept.begin(), res.kept.end()) != res.kept.end())
        throw ContractError("kernel strategy kept a vertex twice");
    for (Vertex v : res.kept)
        if (!d.contains(v))
            throw ContractError("kernel strategy kept an unknown vertex");
    if (res.k < 1 || res.k > k)
        throw ContractError("kernel strategy returned k' outside [1, k]");
    if (static_cast<std::int64_t>(res.kept.size()) > iob_kernel_bound(k))
        throw ContractError("kernel has " + std::to_string(res.kept.size()) +
                            " vertices, more than 8k^2+6k = " + std::to_string(iob_kernel_bound(k)));
    out.digraph = induced_subgraph(d, res.kept);
    out.k = res.k;
    out.kept = std::move(res.kept);
    return out;
}

// ---------------------------------------------------------------------------
// Layering.

struct LayerPartition {
    std::vector<std::vector<Vertex>> layers;
    int depth = 0;                         ///< t, index of the last layer
    int s = 0;                             ///< ceil(sqrt k)
    int spacing = 0;                       ///< s + 1
    bool single_instance = false;          ///< depth <= s: no split needed
    std::vector<std::vector<Vertex>> parts;  ///< empty when single_instance
};

inline LayerPartition build_partitions(const UndirectedGraph& g, Vertex r, int k)
{
    if (k < 1)
        throw PreconditionError("build_partitions: k must be positive");
    if (r < 0 || r >= g.vertex_count())
        throw PreconditionError("build_partitions: root out of range");
    const BfsLayers bfs = bfs_layers(g, r);
    if (!bfs.unreachable.empty())
        throw PreconditionError("build_partitions: some vertex is unreachable from the root");

    LayerPartition p;
    p.layers = bfs.layers;
    p.depth = static_cast<int>(p.layers.size()) - 1;
    p.s = ceil_sqrt(k);
    p.spacing = p.s + 1;
    if (p.depth <= p.s) {
        p.single_instance = true;
        return p;
    }
    p.parts.resize(p.spacing);
    for (int i = 0; i <= p.depth; ++i)
        for (Vertex v : p.layers[i])
            p.parts[i % p.spacing].push_back(v);
    for (auto& part : p.parts)
        std::sort(part.begin(), part.end());
    return p;
}

// ---------------------------------------------------------------------------
// Sub-instances.

struct SubInstance {
    Digraph digraph;               ///< induced on `vertices`
    std::vector<Vertex> vertices;  ///< sorted, indices of the parent digraph
    Vertex root = kNoVertex;       ///< root inside `digraph`
    int k = 0;
    int part = -1;                 ///< a, or -1 for the single instance
    std::vector<Vertex> z;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r)
{
    if (r > n)
        return 0;
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(acc);
}

inline constexpr std::uint64_t kDefaultCollectionBudget = 1'000'000;

/// Lazily yields the collection for one root in (a, |Z|, Z) lexicographic order.
class SubInstanceGenerator {
public:
    SubInstanceGenerator(const Digraph& d, int k, Vertex r,
                         std::uint64_t budget = kDefaultCollectionBudget)
        : d_(d), k_(k), r_(r)
    {
        detail::require_all_reachable(d, r, "generate_collection");
        partition_ = build_partitions(underlying_graph(d), r, k);
        z_bound_ = ceil_two_sqrt(k);
        total_ = 0;
        if (partition_.single_instance) {
            total_ = 1;
        } else {
            for (const auto& part : partition_.parts) {
                const bool forced = std::binary_search(part.begin(), part.end(), r);
                const std::uint64_t free = part.size() - (forced ? 1 : 0);
                const int max_free = z_bound_ - (forced ? 1 : 0);
                for (int j = 0; j <= max_free; ++j)
                    total_ = saturating_add(total_, binomial(free, j));
            }
        }
        if (total_ > budget)
            throw BudgetExceeded("collection has " + std::to_string(total_) +
                                 " sub-instances, budget is " + std::to_string(budget));
        if (!partition_.single_instance)
            start_part(0);
    }

    const LayerPartition& partition() const { return partition_; }
    int subset_bound() const { return z_bound_; }
    /// Closed-form size: sum over parts of sum_j C(|P_a| - [r in P_a], j).
    std::uint64_t total() const { return total_; }

    std::optional<SubInstance> next()
    {
        if (partition_.single_instance) {
            if (done_)
                return std::nullopt;
            done_ = true;
            SubInstance inst;
            inst.digraph = d_;
            inst.vertices.resize(d_.vertex_count());
            for (Vertex v = 0; v < d_.vertex_count(); ++v)
                inst.vertices[v] = v;
            inst.root = r_;
            inst.k = k_;
            return inst;
        }
        while (part_ < static_cast<int>(partition_.parts.size())) {
            if (size_ <= max_free_) {
                SubInstance inst = emit();
                advance();
                return inst;
            }
            start_part(part_ + 1);
        }
        return std::nullopt;
    }

private:
    static std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b)
    {
        return a > std::numeric_limits<std::uint64_t>::max() - b
                   ? std::numeric_limits<std::uint64_t>::max()
                   : a + b;
    }

    void start_part(int a)
    {
        part_ = a;
        if (a >= static_cast<int>(partition_.parts.size()))
            return;
        const auto& part = partition_.parts[a];
        forced_ = std::binary_search(part.begin(), part.end(), r_);
        candidates_.clear();
        for (Vertex v : part)
            if (v != r_)
                candidates_.push_back(v);
        max_free_ = std::min<int>(z_bound_ - (forced_ ? 1 : 0), static_cast<int>(candidates_.size()));
        size_ = 0;
        combo_.clear();
    }

    void advance()
    {
        // Next combination of size_ from candidates_, else grow the size.
        const int n = static_cast<int>(candidates_.size());
        int i = size_ - 1;
        while (i >= 0 && combo_[i] == n - size_ + i)
            --i;
        if (i >= 0) {
            ++combo_[i];
            for (int j = i + 1; j < size_; ++j)
                combo_[j] = combo_[j - 1] + 1;
            return;
        }
        ++size_;
        combo_.resize(size_);
        for (int j = 0; j < size_; ++j)
            combo_[j] = j;
    }

    SubInstance emit() const
    {
        SubInstance inst;
        inst.part = part_;
        inst.k = k_;
        for (int idx : combo_)
            inst.z.push_back(candidates_[idx]);
        if (forced_)
            detail::sorted_insert(inst.z, r_);
        const auto& part = partition_.parts[part_];
        for (Vertex v = 0; v < d_.vertex_count(); ++v)
            if (!std::binary_search(part.begin(), part.end(), v) ||
                std::binary_search(inst.z.begin(), inst.z.end(), v))
                inst.vertices.push_back(v);
        inst.digraph = induced_subgraph(d_, inst.vertices);
        inst.root = static_cast<Vertex>(
            std::lower_bound(inst.vertices.begin(), inst.vertices.end(), r_) - inst.vertices.begin());
        return inst;
    }

    const Digraph& d_;
    int k_;
    Vertex r_;
    LayerPartition partition_;
    int z_bound_ = 0;
    std::uint64_t total_ = 0;
    bool done_ = false;
    int part_ = 0;
    bool forced_ = false;
    std::vector<Vertex> candidates_;
    int max_free_ = 0;
    int size_ = 0;
    std::vector<int> combo_;
};

inline SubInstanceGenerator generate_collection(const Digraph& d, int k, Vertex r,
                                                std::uint64_t budget = kDefaultCollectionBudget)
{
    return SubInstanceGenerator(d, k, r, budget);
}

// ---------------------------------------------------------------------------
// Expansion of an out-tree to a spanning out-branching.

/// Grows `t` by BFS, hanging each new vertex under the covered vertex that
/// first reaches it. Existing tree arcs are kept, so no internal vertex is lost.
inline OutBranching expand_minimal_tree(const Digraph& d, Vertex r, const OutTree& t)
{
    detail::require_all_reachable(d, r, "expand_minimal_tree");
    if (t.root() != r)
        throw PreconditionError("expand_minimal_tree: tree is not rooted at r");
    if (auto bad = t.check(d))
        throw PreconditionError("expand_minimal_tree: " + *bad);
    OutBranching result = t;
    std::vector<Vertex> queue = t.vertices();
    std::vector<bool> covered(d.vertex_count(), false);
    for (Vertex v : queue)
        covered[v] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex u = queue[head];
        for (Vertex w : d.out_neighbors(u)) {
            if (covered[w])
                continue;
            covered[w] = true;
            result.set_parent(w, u);
            queue.push_back(w);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Solver.

struct IobOptions {
    std::optional<Vertex> root;
    std::uint64_t budget = kDefaultCollectionBudget;  ///< per-root collection size cap
    int threads = 1;
    /// With several threads, report the yes of smallest (a, Z) rather than the
    /// first one found.
    bool deterministic = true;
    KernelStrategy kernel;
    DpLimits dp_limits;
};

struct IobStats {
    int roots_tried = 0;
    std::uint64_t collection_size = 0;     ///< closed-form total over tried roots
    std::uint64_t instances_examined = 0;
    int max_width = -1;
    int kernel_vertices = 0;
    int kernel_k = 0;
};

struct IobResult {
    bool answer = false;
    std::optional<Vertex> root;            ///< input index
    std::optional<OutBranching> witness;   ///< over the kernel digraph
    std::vector<Vertex> kernel_vertices;   ///< kernel index -> input index
    std::optional<int> witness_internal;
    std::optional<int> found_part;
    std::vector<Vertex> found_z;           ///< input indices
    IobStats stats;
};

namespace detail {

struct SubInstanceOutcome {
    bool yes = false;
    int width = -1;
    std::optional<OutTree> tree;  ///< in sub-instance indices
};

inline SubInstanceOutcome evaluate_subinstance(const SubInstance& inst, const DpLimits& limits)
{
    SubInstanceOutcome out;
    const TreeDecomposition td = greedy_decomposition(underlying_graph(inst.digraph));
    out.width = td.width();
    const auto res = dp_max_internal_outtree(inst.digraph, inst.root, td,
                                             minimal_tree_size_cap(inst.k), limits);
    if (res.internal_count && *res.internal_count >= inst.k) {
        out.yes = true;
        out.tree = res.witness;
    }
    return out;
}

} // namespace detail

inline IobResult solve_iob(const Digraph& d, int k, const IobOptions& options = {})
{
    if (k < 1)
        throw PreconditionError("solve_iob: k must be positive");
    IobResult result;
    const KernelOutput kernel = kernel_stage(d, k, options.kernel);
    const Digraph& dk = kernel.digraph;
    const int kk = kernel.k;
    result.kernel_vertices = kernel.kept;
    result.stats.kernel_vertices = dk.vertex_count();
    result.stats.kernel_k = kk;

    std::vector<Vertex> roots;
    if (options.root) {
        if (!d.contains(*options.root))
            throw PreconditionError("solve_iob: root out of range");
        auto it = std::lower_bound(kernel.kept.begin(), kernel.kept.end(), *options.root);
        if (it == kernel.kept.end() || *it != *options.root)
            throw ContractError("kernel dropped the requested root");
        roots.push_back(static_cast<Vertex>(it - kernel.kept.begin()));
    } else {
        for (Vertex v = 0; v < dk.vertex_count(); ++v)
            roots.push_back(v);
    }
    const int threads = std::max(1, options.threads);

    for (Vertex r : roots) {
        // A root that misses a vertex has no spanning out-branching at all.
        if (!all_reachable(dk, r))
            continue;
        ++result.stats.roots_tried;
        SubInstanceGenerator gen(dk, kk, r, options.budget);
        result.stats.collection_size += gen.total();

        std::vector<SubInstance> chunk;
        const std::size_t chunk_size = threads == 1 ? 1 : 16 * static_cast<std::size_t>(threads);
        while (true) {
            chunk.clear();
            while (chunk.size() < chunk_size) {
                auto inst = gen.next();
                if (!inst)
                    break;
                chunk.push_back(std::move(*inst));
            }
            if (chunk.empty())
                break;

            std::vector<detail::SubInstanceOutcome> outcomes(chunk.size());
            std::vector<std::size_t> finish_order;
            if (threads == 1) {
                for (std::size_t i = 0; i < chunk.size(); ++i) {
                    outcomes[i] = detail::evaluate_subinstance(chunk[i], options.dp_limits);
                    finish_order.push_back(i);
                    if (outcomes[i].yes)
                        break;
                }
            } else {
                std::atomic<std::size_t> next{0};
                std::atomic<bool> found{false};
                std::mutex mu;
                std::exception_ptr failure;
                {
                    std::vector<std::jthread> pool;
                    for (int t = 0; t < threads; ++t) {
                        pool.emplace_back([&] {
                            for (std::size_t i = next++; i < chunk.size(); i = next++) {
                                if (found && !options.deterministic)
                                    return;
                                try {
                                    auto o = detail::evaluate_subinstance(chunk[i], options.dp_limits);
                                    std::lock_guard lock(mu);
                                    outcomes[i] = std::move(o);
                                    finish_order.push_back(i);
                                    if (outcomes[i].yes)
                                        found = true;
                                } catch (...) {
                                    std::lock_guard lock(mu);
                                    if (!failure)
                                        failure = std::current_exception();
                                    return;
                                }
                            }
                        });
                    }
                }
                if (failure)
                    std::rethrow_exception(failure);
                if (options.deterministic)
                    std::sort(finish_order.begin(), finish_order.end());
            }

            std::optional<std::size_t> winner;
            for (std::size_t i : finish_order) {
                ++result.stats.instances_examined;
                result.stats.max_width = std::max(result.stats.max_width, outcomes[i].width);
                if (outcomes[i].yes && !winner)
                    winner = i;
            }
            if (!winner)
                continue;

            const SubInstance& inst = chunk[*winner];
            const OutTree& sub_tree = *outcomes[*winner].tree;
            OutTree tree(dk.vertex_count(), r);
            for (Vertex v : sub_tree.vertices())
                if (sub_tree.parent(v) != kNoVertex)
                    tree.set_parent(inst.vertices[v], inst.vertices[sub_tree.parent(v)]);
            result.answer = true;
            result.root = kernel.kept[r];
            result.witness = expand_minimal_tree(dk, r, tree);
            result.witness_internal = result.witness->internal_count();
            if (inst.part >= 0)
                result.found_part = inst.part;
            for (Vertex z : inst.z)
                result.found_z.push_back(kernel.kept[z]);
            return result;
        }
    }
    return result;
}

} // namespace subexp
