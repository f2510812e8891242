#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "subexp/treewidth.hpp"
#include "support.hpp"

using namespace subexp;
using namespace testing_support;

namespace {

UndirectedGraph cycle(int n)
{
    UndirectedGraph g(n);
    for (int i = 0; i < n; ++i)
        g.add_edge(i, (i + 1) % n);
    return g;
}

UndirectedGraph clique(int n)
{
    UndirectedGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j);
    return g;
}

UndirectedGraph random_tree(std::mt19937_64& rng, int n)
{
    UndirectedGraph g(n);
    for (int v = 1; v < n; ++v)
        g.add_edge(v, static_cast<int>(rng() % v));
    return g;
}

bool has_violation(const std::vector<Violation>& vs, Violation::Kind kind, const std::string& needle)
{
    for (const auto& v : vs)
        if (v.kind == kind && v.message.find(needle) != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST(Greedy, Examples)
{
    std::mt19937_64 rng(1);
    EXPECT_EQ(greedy_decomposition(random_tree(rng, 12)).width(), 1);
    EXPECT_EQ(greedy_decomposition(clique(4)).width(), 3);
    const int w = greedy_decomposition(grid_graph(5, 5)).width();
    EXPECT_GE(w, 5);  // 5x5 grid has treewidth 5
    EXPECT_LE(w, 6);
}

TEST(Greedy, ValidAndDeterministic)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const UndirectedGraph g = underlying_graph(random_digraph(rng, 1 + i % 20, 0.15));
        for (auto strategy : {EliminationStrategy::min_degree, EliminationStrategy::min_fill}) {
            const TreeDecomposition td = greedy_decomposition(g, strategy);
            EXPECT_TRUE(validate_decomposition(g, td).empty());
            const TreeDecomposition again = greedy_decomposition(g, strategy);
            EXPECT_EQ(td.bags, again.bags);
            EXPECT_EQ(td.edges, again.edges);
        }
    }
}

TEST(Exact, KnownValues)
{
    EXPECT_EQ(exact_treewidth_small(clique(4)).width, 3);
    EXPECT_EQ(exact_treewidth_small(cycle(5)).width, 2);
    EXPECT_EQ(exact_treewidth_small(grid_graph(3, 3)).width, 3);
    std::mt19937_64 rng(3);
    EXPECT_EQ(exact_treewidth_small(random_tree(rng, 10)).width, 1);
    EXPECT_EQ(exact_treewidth_small(UndirectedGraph(3)).width, 0);
}

TEST(Exact, GridMatchesPermutationSearch)
{
    EXPECT_EQ(treewidth_by_permutations(grid_graph(3, 3)), 3);
}

TEST(Exact, MatchesPermutationSearchOnSmallGraphs)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 40; ++i) {
        const UndirectedGraph g = underlying_graph(random_digraph(rng, 2 + i % 7, 0.25));
        const ExactTreewidth ex = exact_treewidth_small(g);
        EXPECT_EQ(ex.width, treewidth_by_permutations(g));
        EXPECT_TRUE(validate_decomposition(g, ex.decomposition).empty());
        EXPECT_EQ(ex.decomposition.width(), ex.width);
    }
}

TEST(Exact, BelowGreedyAndTooLarge)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        const UndirectedGraph g = underlying_graph(random_digraph(rng, 1 + i % 14, 0.2));
        EXPECT_LE(exact_treewidth_small(g).width, greedy_decomposition(g).width());
    }
    EXPECT_THROW(exact_treewidth_small(UndirectedGraph(kExactTreewidthLimit + 1)), PreconditionError);
}

TEST(Validate, Examples)
{
    UndirectedGraph path(3);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    TreeDecomposition good{{{0, 1}, {1, 2}}, {{0, 1}}};
    EXPECT_TRUE(validate_decomposition(path, good).empty());

    TreeDecomposition missing_edge{{{0, 1}, {2}}, {{0, 1}}};
    EXPECT_TRUE(has_violation(validate_decomposition(path, missing_edge),
                              Violation::Kind::edge_coverage, "{1,2}"));

    TreeDecomposition split{{{0, 1}, {1, 2}, {0}}, {{0, 1}, {1, 2}}};
    EXPECT_TRUE(has_violation(validate_decomposition(path, split), Violation::Kind::coherence,
                              "vertex 0"));

    TreeDecomposition uncovered{{{0, 1}}, {}};
    EXPECT_TRUE(has_violation(validate_decomposition(path, uncovered),
                              Violation::Kind::vertex_coverage, "vertex 2"));

    TreeDecomposition cyclic{{{0, 1}, {1, 2}, {1}}, {{0, 1}, {1, 2}, {2, 0}}};
    EXPECT_TRUE(has_violation(validate_decomposition(path, cyclic), Violation::Kind::not_a_tree, ""));
    EXPECT_THROW(require_valid(path, cyclic), ValidationError);
}

TEST(Nice, SingleBag)
{
    const UndirectedGraph g = clique(3);
    TreeDecomposition one{{{0, 1, 2}}, {}};
    const NiceDecomposition nice = make_nice(g, one);
    EXPECT_EQ(nice.width(), 2);
    // Leaf, three introduces, then forgets down to the empty root.
    ASSERT_FALSE(nice.nodes.empty());
    EXPECT_EQ(nice.nodes.front().kind, NiceNode::Kind::leaf);
    int introduces = 0;
    int joins = 0;
    for (const auto& node : nice.nodes) {
        introduces += node.kind == NiceNode::Kind::introduce;
        joins += node.kind == NiceNode::Kind::join;
    }
    EXPECT_EQ(introduces, 3);
    EXPECT_EQ(joins, 0);
    EXPECT_TRUE(nice.nodes[nice.root].bag.empty());
}

TEST(Nice, ShapeAndWidth)
{
    std::mt19937_64 rng(6);
    for (int i = 0; i < 40; ++i) {
        const UndirectedGraph g = underlying_graph(random_digraph(rng, 1 + i % 16, 0.2));
        const TreeDecomposition td = greedy_decomposition(g);
        const NiceDecomposition nice = make_nice(g, td);
        EXPECT_EQ(nice.width(), td.width());
        EXPECT_TRUE(validate_decomposition(g, nice.as_tree_decomposition()).empty());
        for (std::size_t i2 = 0; i2 < nice.nodes.size(); ++i2) {
            const NiceNode& node = nice.nodes[i2];
            for (std::size_t c : node.children)
                EXPECT_LT(c, i2);
            switch (node.kind) {
            case NiceNode::Kind::leaf:
                EXPECT_TRUE(node.children.empty());
                EXPECT_TRUE(node.bag.empty());
                break;
            case NiceNode::Kind::introduce: {
                ASSERT_EQ(node.children.size(), 1u);
                auto child = nice.nodes[node.children[0]].bag;
                detail::sorted_insert(child, node.vertex);
                EXPECT_EQ(child, node.bag);
                break;
            }
            case NiceNode::Kind::forget: {
                ASSERT_EQ(node.children.size(), 1u);
                auto bag = node.bag;
                detail::sorted_insert(bag, node.vertex);
                EXPECT_EQ(bag, nice.nodes[node.children[0]].bag);
                break;
            }
            case NiceNode::Kind::join:
                ASSERT_EQ(node.children.size(), 2u);
                EXPECT_EQ(nice.nodes[node.children[0]].bag, node.bag);
                EXPECT_EQ(nice.nodes[node.children[1]].bag, node.bag);
                break;
            }
        }
    }
}

TEST(Nice, RejectsInvalidInput)
{
    UndirectedGraph g(2);
    g.add_edge(0, 1);
    EXPECT_THROW(make_nice(g, TreeDecomposition{{{0}, {1}}, {{0, 1}}}), ValidationError);
}

TEST(Export, Format)
{
    TreeDecomposition td{{{0, 1}, {1, 2}}, {{0, 1}}};
    std::ostringstream out;
    write_decomposition(out, td);
    EXPECT_EQ(out.str(), "0: 0 1\n1: 1 2\nedge 0 1\n");
}
