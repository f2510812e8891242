#pragma once

// Seeded instance families. Draws use raw mt19937_64 output so a seed gives
// the same digraph on every platform.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "subexp/digraph.hpp"

namespace subexp {

struct GeneratorSpec {
    enum class Family { grid, random_sparse };
    Family family = Family::grid;
    int rows = 0;
    int cols = 0;
    int n = 0;
    int m = 0;
    std::uint64_t seed = 0;
    double p2 = 0.0;  ///< probability an edge becomes a 2-cycle
};

inline std::string to_string(GeneratorSpec::Family f)
{
    return f == GeneratorSpec::Family::grid ? "grid" : "random-sparse";
}

inline GeneratorSpec::Family parse_family(const std::string& name)
{
    if (name == "grid")
        return GeneratorSpec::Family::grid;
    if (name == "random-sparse")
        return GeneratorSpec::Family::random_sparse;
    throw PreconditionError("unknown generator family '" + name + "'");
}

namespace detail {

inline double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void orient_edge(Digraph& d, Vertex u, Vertex v, double p2, std::mt19937_64& rng)
{
    const bool flip = (rng() >> 63) != 0;
    const bool both = unit_draw(rng) < p2;
    if (flip)
        std::swap(u, v);
    d.add_arc(u, v);
    if (both)
        d.add_arc(v, u);
}

} // namespace detail

/// Grid vertices are numbered row-major. Edges are visited row by row, each
/// vertex's right edge before its down edge.
inline Digraph generate(const GeneratorSpec& spec)
{
    if (spec.p2 < 0.0 || spec.p2 > 1.0)
        throw PreconditionError("generate: p2 must lie in [0, 1]");
    std::mt19937_64 rng(spec.seed);
    if (spec.family == GeneratorSpec::Family::grid) {
        if (spec.rows < 1 || spec.cols < 1)
            throw PreconditionError("generate: grid dimensions must be positive");
        Digraph d(spec.rows * spec.cols);
        for (int i = 0; i < spec.rows; ++i) {
            for (int j = 0; j < spec.cols; ++j) {
                const Vertex v = i * spec.cols + j;
                if (j + 1 < spec.cols)
                    detail::orient_edge(d, v, v + 1, spec.p2, rng);
                if (i + 1 < spec.rows)
                    detail::orient_edge(d, v, v + spec.cols, spec.p2, rng);
            }
        }
        return d;
    }
    if (spec.n < 1)
        throw PreconditionError("generate: n must be positive");
    const std::int64_t max_edges = static_cast<std::int64_t>(spec.n) * (spec.n - 1) / 2;
    if (spec.m < 0 || spec.m > max_edges)
        throw PreconditionError("generate: m must lie in [0, n(n-1)/2]");
    Digraph d(spec.n);
    std::set<std::pair<Vertex, Vertex>> used;
    while (static_cast<int>(used.size()) < spec.m) {
        Vertex u = static_cast<Vertex>(rng() % spec.n);
        Vertex v = static_cast<Vertex>(rng() % spec.n);
        if (u == v)
            continue;
        if (u > v)
            std::swap(u, v);
        if (!used.insert({u, v}).second)
            continue;
        detail::orient_edge(d, u, v, spec.p2, rng);
    }
    return d;
}

inline GeneratorSpec grid_spec(int rows, int cols, std::uint64_t seed, double p2)
{
    GeneratorSpec s;
    s.family = GeneratorSpec::Family::grid;
    s.rows = rows;
    s.cols = cols;
    s.seed = seed;
    s.p2 = p2;
    return s;
}

inline GeneratorSpec sparse_spec(int n, int m, std::uint64_t seed, double p2)
{
    GeneratorSpec s;
    s.family = GeneratorSpec::Family::random_sparse;
    s.n = n;
    s.m = m;
    s.seed = seed;
    s.p2 = p2;
    return s;
}

} // namespace subexp
