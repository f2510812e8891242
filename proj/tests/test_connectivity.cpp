#include <gtest/gtest.h>

#include <random>

#include "subexp/connectivity.hpp"
#include "subexp/lob.hpp"
#include "support.hpp"

using namespace subexp;
using namespace testing_support;

namespace {

Digraph make(int n, std::initializer_list<Arc> arcs)
{
    Digraph d(n);
    for (const Arc& a : arcs)
        d.add_arc(a.tail, a.head);
    return d;
}

// Brute force: does deleting x strand anything?
bool brute_is_cut(const Digraph& d, Vertex r, Vertex x)
{
    std::vector<bool> seen(d.vertex_count(), false);
    std::vector<Vertex> stack{r};
    seen[r] = true;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex v = 0; v < d.vertex_count(); ++v)
            if (v != x && !seen[v] && d.has_arc(u, v)) {
                seen[v] = true;
                stack.push_back(v);
            }
    }
    for (Vertex v = 0; v < d.vertex_count(); ++v)
        if (v != x && !seen[v])
            return true;
    return false;
}

} // namespace

TEST(Reachable, Examples)
{
    const Digraph path = make(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(reachable(path, 0, {1}), std::vector<Vertex>{0});
    const Digraph tri = make(3, {{0, 1}, {1, 2}, {2, 0}});
    EXPECT_EQ(reachable(tri, 0), (std::vector<Vertex>{0, 1, 2}));
    EXPECT_EQ(reachable(make(2, {{0, 1}}), 0, {}, {Arc{0, 1}}), std::vector<Vertex>{0});
    EXPECT_THROW(reachable(path, 0, {0}), PreconditionError);
}

TEST(RootedTwoConnected, Examples)
{
    EXPECT_TRUE(is_rooted_2connected(make(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), 0));
    EXPECT_FALSE(is_rooted_2connected(make(3, {{0, 1}, {1, 2}}), 0));
    EXPECT_TRUE(is_rooted_2connected(Digraph(1), 0));
    EXPECT_THROW(is_rooted_2connected(make(3, {{0, 1}}), 0), PreconditionError);
}

TEST(CutProfile, Examples)
{
    const CutProfile path = cut_profile(make(3, {{0, 1}, {1, 2}}), 0);
    EXPECT_EQ(path.cut_vertices, std::vector<Vertex>{1});
    EXPECT_EQ(path.cut_neighborhoods.at(1), std::vector<Vertex>{2});
    EXPECT_EQ(path.s_eq1, std::vector<Vertex>{1});
    EXPECT_TRUE(path.s_geq2.empty());

    const CutProfile fork = cut_profile(make(4, {{0, 1}, {1, 2}, {1, 3}}), 0);
    EXPECT_EQ(fork.cut_vertices, std::vector<Vertex>{1});
    EXPECT_EQ(fork.cut_neighborhoods.at(1), (std::vector<Vertex>{2, 3}));
    EXPECT_EQ(fork.s_geq2, std::vector<Vertex>{1});

    const CutProfile none = cut_profile(make(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), 0);
    EXPECT_TRUE(none.cut_vertices.empty());
    EXPECT_TRUE(none.cut_neighborhoods.empty());
}

TEST(NiceVertices, Examples)
{
    EXPECT_EQ(nice_vertices(make(2, {{0, 1}})), std::vector<Vertex>{1});
    EXPECT_TRUE(nice_vertices(make(2, {{0, 1}, {1, 0}})).empty());
    EXPECT_EQ(nice_vertices(make(3, {{0, 1}, {1, 0}, {2, 1}})), std::vector<Vertex>{1});
}

TEST(HighIndegree, Examples)
{
    EXPECT_EQ(high_indegree_vertices(make(4, {{1, 0}, {2, 0}, {3, 0}})), std::vector<Vertex>{0});
    EXPECT_TRUE(high_indegree_vertices(make(3, {{1, 0}, {2, 0}})).empty());
    EXPECT_TRUE(high_indegree_vertices(Digraph(0)).empty());
}

TEST(ArcsDisconnectingTwo, Examples)
{
    EXPECT_EQ(arcs_disconnecting_two(make(4, {{0, 1}, {1, 2}, {2, 3}}), 0),
              (std::vector<Arc>{{0, 1}, {1, 2}}));
    EXPECT_EQ(arcs_disconnecting_two(make(3, {{0, 1}, {1, 2}}), 0), (std::vector<Arc>{{0, 1}}));
}

TEST(Classification, AgreesWithScans)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const Digraph d = random_digraph(rng, 1 + i % 12, 0.3);
        std::vector<Vertex> nice, high;
        for (Vertex v = 0; v < d.vertex_count(); ++v) {
            int indeg = 0;
            bool is_nice = false;
            for (Vertex u = 0; u < d.vertex_count(); ++u)
                if (d.has_arc(u, v)) {
                    ++indeg;
                    if (!d.has_arc(v, u))
                        is_nice = true;
                }
            if (is_nice)
                nice.push_back(v);
            if (indeg >= 3)
                high.push_back(v);
        }
        EXPECT_EQ(nice_vertices(d), nice);
        EXPECT_EQ(high_indegree_vertices(d), high);
    }
}

TEST(Classification, TwoConnectedMatchesVertexDeletion)
{
    std::mt19937_64 rng(9);
    int two_connected = 0;
    for (int i = 0; i < 300; ++i) {
        const int n = 1 + i % 12;
        const Digraph d = random_rooted_digraph(rng, n, 0.25);
        bool any_cut = false;
        for (Vertex x = 1; x < n; ++x)
            any_cut = any_cut || brute_is_cut(d, 0, x);
        EXPECT_EQ(is_rooted_2connected(d, 0), !any_cut);
        const CutProfile p = cut_profile(d, 0);
        EXPECT_EQ(p.cut_vertices.empty(), !any_cut);
        for (Vertex x = 1; x < n; ++x)
            EXPECT_EQ(std::binary_search(p.cut_vertices.begin(), p.cut_vertices.end(), x),
                      brute_is_cut(d, 0, x));
        two_connected += any_cut ? 0 : 1;
        // s_geq2 and s_eq1 split the cut vertices.
        std::vector<Vertex> joined = p.s_geq2;
        joined.insert(joined.end(), p.s_eq1.begin(), p.s_eq1.end());
        std::sort(joined.begin(), joined.end());
        EXPECT_EQ(joined, p.cut_vertices);
        if (!any_cut) {
            // An arc stranding two vertices would make its head a cut vertex.
            for (const Arc& a : arcs_disconnecting_two(d, 0))
                ADD_FAILURE() << "arc " << to_string(a) << " strands two vertices";
        }
    }
    EXPECT_GT(two_connected, 20);
}

TEST(Classification, DisjointCutNeighbourhoodsAfterContraction)
{
    std::mt19937_64 rng(41);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        const Digraph d = random_rooted_digraph(rng, 2 + i % 11, 0.15);
        const ContractionResult c = exhaust_case2a(d, 0);
        EXPECT_TRUE(arcs_disconnecting_two(c.reduced, c.root).empty());
        const CutProfile p = cut_profile(c.reduced, c.root);
        std::vector<Vertex> all;
        for (const auto& [x, cx] : p.cut_neighborhoods)
            all.insert(all.end(), cx.begin(), cx.end());
        std::sort(all.begin(), all.end());
        EXPECT_TRUE(std::adjacent_find(all.begin(), all.end()) == all.end());
        checked += p.cut_vertices.size() >= 2 ? 1 : 0;
    }
    EXPECT_GT(checked, 20);
}
