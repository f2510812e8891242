#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "subexp/kpath.hpp"
#include "subexp/oracle.hpp"
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

Digraph directed_cycle(int n)
{
    Digraph d(n);
    for (Vertex v = 0; v < n; ++v)
        d.add_arc(v, (v + 1) % n);
    return d;
}

bool is_path(const Digraph& d, const std::vector<Vertex>& path)
{
    std::vector<Vertex> sorted = path;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (!d.has_arc(path[i], path[i + 1]))
            return false;
    return true;
}

} // namespace

TEST(Ball, Examples)
{
    UndirectedGraph g(5);
    for (int i = 0; i < 4; ++i)
        g.add_edge(i, i + 1);
    EXPECT_EQ(ball(g, 2, 0), (std::vector<Vertex>{2}));
    EXPECT_EQ(ball(g, 2, 1), (std::vector<Vertex>{1, 2, 3}));
    EXPECT_EQ(ball(g, 0, 10), (std::vector<Vertex>{0, 1, 2, 3, 4}));
    EXPECT_THROW(ball(g, 0, -1), PreconditionError);
    EXPECT_EQ(ball_radius(5, 2), 3);
    EXPECT_EQ(ball_radius(4, 2), 2);
    EXPECT_EQ(ball_radius(0, 3), 0);
}

TEST(SolveKpath, Examples)
{
    const KpathResult cyc = solve_kpath_ballcover(directed_cycle(6), 5, 1);
    EXPECT_TRUE(cyc.answer);
    EXPECT_EQ(cyc.path.size(), 6u);
    EXPECT_TRUE(is_path(directed_cycle(6), cyc.path));

    const Digraph dag = make(4, {{0, 1}, {1, 2}, {2, 3}});
    EXPECT_FALSE(solve_kpath_ballcover(dag, 4, 2).answer);
    EXPECT_TRUE(solve_kpath_ballcover(dag, 3, 2).answer);
    EXPECT_TRUE(solve_kpath_ballcover(Digraph(1), 0, 1).answer);
}

TEST(SolveKpath, RejectsBadInput)
{
    EXPECT_THROW(solve_kpath_ballcover(Digraph(3), 1, 0), PreconditionError);
    EXPECT_THROW(solve_kpath_ballcover(Digraph(3), 1, 4), PreconditionError);
    EXPECT_THROW(solve_kpath_ballcover(Digraph(3), -1, 1), PreconditionError);
}

TEST(SolveKpath, Budget)
{
    KpathOptions opt;
    opt.budget = 10;
    EXPECT_THROW(solve_kpath_ballcover(Digraph(8), 1, 3, opt), BudgetExceeded);  // C(8,3) = 56
}

TEST(SolveKpath, AgreesWithOracle)
{
    const auto corpus = random_corpus(150, 31, 8);
    for (const Digraph& d : corpus) {
        const int longest = brute_longest_path(d);
        for (int b = 1; b <= std::min(3, d.vertex_count()); ++b)
            for (int k = 0; k <= 6; ++k) {
                const KpathResult res = solve_kpath_ballcover(d, k, b);
                ASSERT_EQ(res.answer, longest >= k) << serialize_digraph(d) << " k " << k << " b " << b;
                if (res.answer) {
                    EXPECT_EQ(static_cast<int>(res.path.size()), k + 1);
                    EXPECT_TRUE(is_path(d, res.path));
                    EXPECT_EQ(static_cast<int>(res.centres.size()), b);
                }
            }
    }
}

TEST(SolveKpath, AllCentresMatchesDirectDp)
{
    std::mt19937_64 rng(32);
    for (int i = 0; i < 40; ++i) {
        const Digraph d = random_digraph(rng, 1 + i % 9, 0.3);
        const int n = d.vertex_count();
        std::vector<Vertex> all(n);
        std::iota(all.begin(), all.end(), 0);
        const int direct = longest_path_within(d, all, {}).length;
        for (int k = 0; k <= n; ++k)
            EXPECT_EQ(solve_kpath_ballcover(d, k, n).answer, direct >= k);
    }
}

TEST(SolveKpath, MonotoneInK)
{
    const auto corpus = random_corpus(60, 33, 9);
    for (const Digraph& d : corpus) {
        bool previous = true;
        for (int k = 0; k <= 8; ++k) {
            const bool now = solve_kpath_ballcover(d, k, 1).answer;
            EXPECT_TRUE(previous || !now);
            previous = now;
        }
    }
}

TEST(SolveKpath, StatsReported)
{
    const Digraph d = bidirected(grid_graph(3, 3));
    const KpathResult res = solve_kpath_ballcover(d, 20, 2);
    EXPECT_FALSE(res.answer);
    EXPECT_EQ(res.stats.radius, 10);
    EXPECT_EQ(res.stats.ball_sets, 36u);
    EXPECT_EQ(res.stats.sets_examined, 36u);
    EXPECT_EQ(res.stats.max_cover_size, 9);
    EXPECT_EQ(res.stats.max_width, 3);
}

TEST(BallCover, SpacedCentresCoverLongestPath)
{
    const auto corpus = random_corpus(150, 34, 10);
    for (const Digraph& d : corpus) {
        std::vector<Vertex> path;
        const int k = brute_longest_path(d, &path);
        const UndirectedGraph g = underlying_graph(d);
        for (int b = 1; b <= 3; ++b) {
            const int rho = ball_radius(k, b);
            std::vector<bool> covered(d.vertex_count(), false);
            for (int i = 0; i < b; ++i) {
                const int pos = std::min(k, rho + i * (2 * rho + 1));
                for (Vertex w : ball(g, path[pos], rho))
                    covered[w] = true;
            }
            for (Vertex v : path)
                EXPECT_TRUE(covered[v]) << serialize_digraph(d) << " b " << b;
        }
    }
}
