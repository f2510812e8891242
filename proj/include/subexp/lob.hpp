#pragma once

// k-Leaf Out-Branching.
//
// The rooted reduction either certifies a yes answer from structural counts
// or produces an equivalent digraph D' together with a deletion set S of
// size O(k) such that UG(D' - S) has treewidth at most 3; the solver then
// runs the exact leaf DP on a tree decomposition of UG(D').
//
// Reduction steps for root r:
//   1. contract arcs whose removal strands >= 2 vertices until none is left;
//   2. classify cut vertices x by |C(x)|, where C(x) are the out-neighbours
//      stranded when x is deleted. If at least k have |C(x)| >= 2 we are done;
//   3. give every x with |C(x)| >= 2 an imaginary twin x^i (same in- and
//      out-arcs, none between twins) which shifts the optimum by exactly ell;
//   4. identify x with its single cut-neighbour when |C(x)| == 1;
//   5. on the now rooted 2-connected digraph, many vertices of in-degree >= 3
//      (>= 6k) or many nice vertices (>= 24k) certify yes; otherwise those
//      vertices form S', and D - S' is a union of bidirected paths, or a
//      bidirected cycle through r (treewidth 2);
//   6. S = vertices of D' merged into S'.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "subexp/connectivity.hpp"
#include "subexp/digraph.hpp"
#include "subexp/td_dp.hpp"
#include "subexp/treewidth.hpp"

namespace subexp {

enum class Guarantee { none, alpha_rule, beta_rule, s_geq2_rule };

inline std::string to_string(Guarantee g)
{
    switch (g) {
    case Guarantee::none: return "none";
    case Guarantee::alpha_rule: return "alpha_rule";
    case Guarantee::beta_rule: return "beta_rule";
    case Guarantee::s_geq2_rule: return "s_geq2_rule";
    }
    return "?";
}

/// Ledger of one rooted reduction. Vertex and arc ids refer to D'.
/// alpha and beta are measured on the 2-connected digraph the final test
/// runs on, against k_effective = k + ell.
struct StructureReport {
    Vertex root = kNoVertex;      ///< root in the input digraph
    int k = 0;
    int k_effective = 0;
    int alpha = 0;
    int beta = 0;
    int s_geq2_size = 0;          ///< ell
    int s_eq1_size = 0;
    int contractions_applied = 0;
    int reduced_vertices = 0;     ///< |V(D')|
    std::vector<Arc> a_c;
    std::vector<Arc> a_p;
    std::vector<Vertex> extracted_s;
    Guarantee guarantee = Guarantee::none;
};

// ---------------------------------------------------------------------------
// Contraction of arcs that strand two or more vertices.

struct ContractionResult {
    Digraph reduced;
    Vertex root = kNoVertex;
    std::vector<Arc> contractions;  ///< each in the indices of the digraph it was applied to
};

namespace detail {

inline std::optional<Arc> first_disconnecting_arc(const Digraph& d, Vertex r)
{
    for (const Arc& a : d.arcs())
        if (stranded_by_arc(d, r, a) >= 2)
            return a;
    return std::nullopt;
}

} // namespace detail

inline ContractionResult exhaust_case2a(const Digraph& d, Vertex r)
{
    detail::require_all_reachable(d, r, "exhaust_case2a");
    ContractionResult result{d, r, {}};
    while (auto arc = detail::first_disconnecting_arc(result.reduced, result.root)) {
        result.reduced = contract_arc_directed(result.reduced, *arc);
        result.root = index_after_merge(result.root, arc->tail, arc->head);
        result.contractions.push_back(*arc);
    }
    return result;
}

/// Undoes one contraction of x->y on an out-branching of the contracted
/// digraph: the merged vertex becomes x with child y, and each of its
/// children is re-hung under y when y has the arc, else under x.
inline OutTree expand_contraction(const Digraph& before, const Arc& arc, const OutTree& t)
{
    const int n = before.vertex_count();
    const Vertex x = arc.tail;
    const Vertex y = arc.head;
    const Vertex merged = std::min(x, y);
    std::vector<Vertex> inverse(n - 1, kNoVertex);
    for (Vertex w = 0; w < n; ++w)
        if (w != x && w != y)
            inverse[index_after_merge(w, x, y)] = w;

    const Vertex root = t.root() == merged ? x : inverse[t.root()];
    OutTree result(n, root);
    for (Vertex w = 0; w < n - 1; ++w) {
        const Vertex p = t.parent(w);
        if (p == kNoVertex)
            continue;
        if (w == merged) {
            if (!before.has_arc(inverse[p], x))
                throw InternalError("contracted vertex entered through its head");
            result.set_parent(x, inverse[p]);
            continue;
        }
        const Vertex child = inverse[w];
        if (p == merged)
            result.set_parent(child, before.has_arc(y, child) ? y : x);
        else
            result.set_parent(child, inverse[p]);
    }
    result.set_parent(y, x);
    return result;
}

/// Maps an out-branching of the contraction fixed point back to `original`.
inline OutTree expand_contractions(const Digraph& original, const std::vector<Arc>& contractions,
                             const OutTree& t)
{
    std::vector<Digraph> steps{original};
    for (const Arc& a : contractions)
        steps.push_back(contract_arc_directed(steps.back(), a));
    OutTree current = t;
    for (std::size_t i = contractions.size(); i-- > 0;)
        current = expand_contraction(steps[i], contractions[i], current);
    return current;
}

// ---------------------------------------------------------------------------
// Rooted 2-connected digraphs.

struct TwoConnectedResult {
    Guarantee guarantee = Guarantee::none;
    int alpha = 0;
    int beta = 0;
    std::vector<Vertex> s;  ///< empty unless guarantee == none
};

inline TwoConnectedResult two_connected_analysis(const Digraph& d, Vertex r, int k)
{
    if (!is_rooted_2connected(d, r))
        throw PreconditionError("two_connected_analysis: digraph is not rooted 2-connected");
    const auto high = high_indegree_vertices(d, 3);
    const auto nice = nice_vertices(d);
    TwoConnectedResult result;
    result.alpha = static_cast<int>(high.size());
    result.beta = static_cast<int>(nice.size());
    if (result.alpha >= 6 * k) {
        result.guarantee = Guarantee::alpha_rule;
    } else if (result.beta >= 24 * k) {
        result.guarantee = Guarantee::beta_rule;
    } else {
        std::set_union(high.begin(), high.end(), nice.begin(), nice.end(),
                       std::back_inserter(result.s));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Cut arcs of vertices with two or more cut-neighbours.

/// Exchanges parent arcs until every arc of `a_c` is in the branching:
/// for x->y missing, y's parent arc is replaced by x->y. Leaves never drop
/// because x is a cut vertex and therefore already internal.
inline OutBranching force_cut_arcs(const Digraph& d, Vertex r, OutBranching t,
                                   const std::vector<Arc>& a_c)
{
    if (t.root() != r || !t.spans())
        throw PreconditionError("force_cut_arcs: not a spanning out-branching rooted at r");
    if (auto bad = t.check(d))
        throw PreconditionError("force_cut_arcs: " + *bad);
    std::vector<Vertex> heads;
    for (const Arc& a : a_c) {
        detail::require_arc(d, a, "force_cut_arcs");
        heads.push_back(a.head);
    }
    std::sort(heads.begin(), heads.end());
    if (std::adjacent_find(heads.begin(), heads.end()) != heads.end())
        throw PreconditionError("force_cut_arcs: two arcs share a head");

    for (const Arc& a : a_c) {
        if (t.parent(a.head) == a.tail)
            continue;
        t.set_parent(a.head, a.tail);
        if (auto bad = t.check(d))
            throw InternalError("force_cut_arcs exchange broke the branching: " + *bad);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Duplication of cut vertices with >= 2 cut-neighbours.

struct DupGraph {
    Digraph graph;               ///< D' plus the imaginary twins; origins are indices of graph
    std::vector<Vertex> twin;    ///< twin[x] for x in D', kNoVertex if not duplicated
    int base_vertices = 0;       ///< |V(D')|; twins are numbered from here
    int ell = 0;
};

/// Adds, for every x in `s_geq2`, a vertex x^i with an arc u->x^i per arc
/// u->x and x^i->v per arc x->v. No arc joins x to x^i and no arc joins two
/// twins.
inline DupGraph build_dup(const Digraph& d, Vertex r, const std::vector<Vertex>& s_geq2)
{
    if (!d.contains(r))
        throw PreconditionError("build_dup: root out of range");
    DupGraph dup;
    dup.graph = d;
    dup.graph.rebase_origins();
    dup.base_vertices = d.vertex_count();
    dup.twin.assign(d.vertex_count(), kNoVertex);
    std::vector<Vertex> xs = s_geq2;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (Vertex x : xs) {
        if (x == r)
            throw PreconditionError("build_dup: the root cannot be duplicated");
        const Vertex xi = dup.graph.add_vertex({dup.graph.vertex_count()});
        dup.twin.at(x) = xi;
    }
    for (Vertex x : xs) {
        const Vertex xi = dup.twin[x];
        for (Vertex u : d.in_neighbors(x))
            dup.graph.add_arc(u, xi);
        for (Vertex v : d.out_neighbors(x))
            dup.graph.add_arc(xi, v);
    }
    dup.ell = static_cast<int>(xs.size());
    return dup;
}

/// Forward map: every twin becomes a leaf under its original's parent.
inline OutBranching lift_to_dup(const DupGraph& dup, const OutBranching& t)
{
    OutBranching lifted(dup.graph.vertex_count(), t.root());
    for (Vertex v = 0; v < dup.base_vertices; ++v)
        if (t.parent(v) != kNoVertex)
            lifted.set_parent(v, t.parent(v));
    for (Vertex x = 0; x < dup.base_vertices; ++x)
        if (dup.twin[x] != kNoVertex)
            lifted.set_parent(dup.twin[x], t.parent(x));
    return lifted;
}

/// Backward map: removes every twin, losing at most one leaf per twin.
/// An internal twin hands its children to the original; when the twin is an
/// ancestor of the original, the original takes the twin's place instead.
inline OutBranching collapse_duplicates(const DupGraph& dup, const OutBranching& t)
{
    OutBranching cur = t;
    auto is_ancestor = [&](Vertex a, Vertex v) {
        for (Vertex c = cur.parent(v); c != kNoVertex; c = cur.parent(c))
            if (c == a)
                return true;
        return false;
    };
    for (Vertex x = 0; x < dup.base_vertices; ++x) {
        const Vertex xi = dup.twin[x];
        if (xi == kNoVertex)
            continue;
        const auto kids = cur.children(xi);
        if (!kids.empty() && is_ancestor(xi, x))
            cur.set_parent(x, cur.parent(xi));
        for (Vertex z : kids)
            cur.set_parent(z, x);
        cur.remove(xi);
    }
    OutBranching result(dup.base_vertices, cur.root());
    for (Vertex v = 0; v < dup.base_vertices; ++v)
        if (cur.parent(v) != kNoVertex)
            result.set_parent(v, cur.parent(v));
    return result;
}

// ---------------------------------------------------------------------------
// Identification of pendant cut arcs.

/// Identifies the endpoints of each arc in `a_p` (indices of `dup`).
inline Digraph contract_pendant_matching(const Digraph& dup, const std::vector<Arc>& a_p)
{
    std::vector<Vertex> seen;
    for (const Arc& a : a_p) {
        detail::require_arc(dup, a, "contract_pendant_matching");
        seen.push_back(a.tail);
        seen.push_back(a.head);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw PreconditionError("contract_pendant_matching: arcs do not form a matching");

    Digraph cur = dup;
    std::vector<Vertex> index(dup.vertex_count());
    for (Vertex v = 0; v < dup.vertex_count(); ++v)
        index[v] = v;
    for (const Arc& a : a_p) {
        const Vertex u = index[a.tail];
        const Vertex v = index[a.head];
        cur = identify_arc_endpoints(cur, {u, v});
        for (Vertex& w : index)
            w = index_after_merge(w, u, v);
    }
    return cur;
}

/// Expansion: each identified vertex uv splits back into u->v, and
/// every tree child is hung under whichever of u, v has the needed arc
/// (u preferred). Leaf count never drops. `contracted` must carry origins
/// in the indices of `dup`.
inline OutBranching expand_pendant_matching(const Digraph& dup, const std::vector<Arc>& a_p,
                                            const Digraph& contracted, const OutBranching& t)
{
    std::vector<Vertex> pair_head(dup.vertex_count(), kNoVertex);
    for (const Arc& a : a_p)
        pair_head.at(a.tail) = a.head;

    // entry: where the tree enters a contracted vertex; members: its parts.
    const int nc = contracted.vertex_count();
    std::vector<Vertex> entry(nc);
    for (Vertex w = 0; w < nc; ++w) {
        const auto& org = contracted.origins(w);
        entry[w] = org.front();
        for (Vertex o : org)
            if (pair_head[o] != kNoVertex)
                entry[w] = o;
    }
    const Vertex root = entry.at(t.root());
    OutBranching result(dup.vertex_count(), root);
    for (Vertex w = 0; w < nc; ++w) {
        const Vertex tail = entry[w];
        if (pair_head[tail] != kNoVertex)
            result.set_parent(pair_head[tail], tail);
        const Vertex p = t.parent(w);
        if (p == kNoVertex)
            continue;
        Vertex chosen = kNoVertex;
        const Vertex pu = entry[p];
        if (dup.has_arc(pu, tail))
            chosen = pu;
        else if (pair_head[pu] != kNoVertex && dup.has_arc(pair_head[pu], tail))
            chosen = pair_head[pu];
        if (chosen == kNoVertex)
            throw InternalError("identified vertex entered through its head");
        result.set_parent(tail, chosen);
    }
    return result;
}

// ---------------------------------------------------------------------------
// The full rooted reduction.

struct ReductionOutcome {
    enum class Kind { guaranteed_yes, reduced, no_branching };
    Kind kind = Kind::no_branching;
    Digraph reduced;                 ///< D'
    Vertex root = kNoVertex;         ///< root of D'
    std::vector<Vertex> s;           ///< deletion set in D' (reduced only)
    std::vector<Arc> contractions;   ///< contraction steps, replayable on the input
    StructureReport report;
};

inline std::string to_string(ReductionOutcome::Kind kind)
{
    switch (kind) {
    case ReductionOutcome::Kind::guaranteed_yes: return "guaranteed_yes";
    case ReductionOutcome::Kind::reduced: return "reduced";
    case ReductionOutcome::Kind::no_branching: return "no_branching";
    }
    return "?";
}

/// Everything reduce_lob builds, for inspection and step-level tests.
struct ReductionStages {
    ContractionResult contracted;
    Digraph d_prime;
    CutProfile profile;
    DupGraph dup;
    std::vector<Arc> a_p;
    Digraph dup_c;
    Vertex dup_c_root = kNoVertex;
};

inline ReductionOutcome reduce_lob(const Digraph& d, Vertex r, int k,
                                   ReductionStages* stages = nullptr)
{
    if (k < 1)
        throw PreconditionError("reduce_lob: k must be positive");
    if (!d.contains(r))
        throw PreconditionError("reduce_lob: root out of range");
    ReductionOutcome out;
    out.report.root = r;
    out.report.k = k;
    out.report.k_effective = k;
    if (!all_reachable(d, r))
        return out;

    ReductionStages local;
    ReductionStages& st = stages ? *stages : local;
    st.contracted = exhaust_case2a(d, r);
    out.contractions = st.contracted.contractions;
    out.root = st.contracted.root;
    st.d_prime = st.contracted.reduced;
    out.reduced = st.d_prime;
    out.report.contractions_applied = static_cast<int>(out.contractions.size());
    out.report.reduced_vertices = out.reduced.vertex_count();

    st.profile = cut_profile(out.reduced, out.root);
    const int ell = static_cast<int>(st.profile.s_geq2.size());
    out.report.s_geq2_size = ell;
    out.report.s_eq1_size = static_cast<int>(st.profile.s_eq1.size());
    for (Vertex x : st.profile.s_geq2)
        for (Vertex y : st.profile.cut_neighborhoods.at(x))
            out.report.a_c.push_back({x, y});
    for (Vertex x : st.profile.s_eq1)
        for (Vertex y : st.profile.cut_neighborhoods.at(x))
            out.report.a_p.push_back({x, y});

    if (ell >= k) {
        out.kind = ReductionOutcome::Kind::guaranteed_yes;
        out.report.guarantee = Guarantee::s_geq2_rule;
        return out;
    }

    st.dup = build_dup(out.reduced, out.root, st.profile.s_geq2);
    st.a_p = out.report.a_p;  // D' indices are kept by build_dup
    st.dup_c = contract_pendant_matching(st.dup.graph, st.a_p);
    st.dup_c_root = st.dup_c.vertex_with_origin(out.root);
    if (!is_rooted_2connected(st.dup_c, st.dup_c_root))
        throw InternalError("reduce_lob: contracted duplicate digraph is not rooted 2-connected");

    out.report.k_effective = k + ell;
    const auto analysis = two_connected_analysis(st.dup_c, st.dup_c_root, k + ell);
    out.report.alpha = analysis.alpha;
    out.report.beta = analysis.beta;
    if (analysis.guarantee != Guarantee::none) {
        out.kind = ReductionOutcome::Kind::guaranteed_yes;
        out.report.guarantee = analysis.guarantee;
        return out;
    }
    // Expand S' through the merge records; keep the part inside D'.
    std::vector<Vertex> s;
    for (Vertex v : analysis.s)
        for (Vertex o : st.dup_c.origins(v))
            if (o < st.dup.base_vertices)
                s.push_back(o);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    out.s = s;
    out.report.extracted_s = s;
    out.kind = ReductionOutcome::Kind::reduced;
    return out;
}

// ---------------------------------------------------------------------------
// Solver.

struct LobOptions {
    std::optional<Vertex> root;
    /// Guaranteed-yes answers get a witness from the exact DP when the greedy
    /// width of UG(D') is at most this; otherwise the answer is certificate-only.
    int witness_width_budget = 10;
    DpLimits dp_limits;
};

struct LobResult {
    bool answer = false;
    std::optional<Vertex> root;            ///< root of the yes answer
    std::optional<OutBranching> witness;   ///< in input indices
    std::optional<int> witness_leaves;
    bool certificate_only = false;
    std::vector<StructureReport> trace;
    int max_decomposition_width = -1;
};

inline LobResult solve_lob(const Digraph& d, int k, const LobOptions& options = {})
{
    if (k < 1)
        throw PreconditionError("solve_lob: k must be positive");
    LobResult result;
    std::vector<Vertex> roots;
    if (options.root) {
        if (!d.contains(*options.root))
            throw PreconditionError("solve_lob: root out of range");
        roots.push_back(*options.root);
    } else {
        for (Vertex v = 0; v < d.vertex_count(); ++v)
            roots.push_back(v);
    }

    for (Vertex r : roots) {
        ReductionOutcome outcome = reduce_lob(d, r, k);
        result.trace.push_back(outcome.report);
        if (outcome.kind == ReductionOutcome::Kind::no_branching)
            continue;

        const UndirectedGraph g = underlying_graph(outcome.reduced);
        const TreeDecomposition td = greedy_decomposition(g);
        const bool guaranteed = outcome.kind == ReductionOutcome::Kind::guaranteed_yes;
        if (guaranteed && td.width() > options.witness_width_budget) {
            result.answer = true;
            result.root = r;
            result.certificate_only = true;
            return result;
        }
        result.max_decomposition_width = std::max(result.max_decomposition_width, td.width());
        const MaxLeavesResult dp = dp_max_leaves(outcome.reduced, outcome.root, td, options.dp_limits);
        if (!dp.max_leaves)
            throw InternalError("solve_lob: reduced digraph has no out-branching");
        if (guaranteed && *dp.max_leaves < k)
            throw InternalError("solve_lob: structural guarantee contradicted by exact DP");
        if (*dp.max_leaves >= k) {
            result.answer = true;
            result.root = r;
            result.witness = expand_contractions(d, outcome.contractions, *dp.witness);
            result.witness_leaves = result.witness->leaf_count();
            return result;
        }
    }
    return result;
}

} // namespace subexp
