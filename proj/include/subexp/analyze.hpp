#pragma once

// Structural report for one rooted instance: the reduction's counts and the
// treewidth of UG(D') before and after deleting S.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "subexp/digraph.hpp"
#include "subexp/lob.hpp"
#include "subexp/treewidth.hpp"

namespace subexp {

struct AnalysisReport {
    Vertex root = kNoVertex;
    int k = 0;
    int n = 0;
    int m = 0;
    std::string outcome;
    std::string guarantee;
    int reduced_vertices = 0;
    int alpha = 0;
    int beta = 0;
    int s_geq2 = 0;
    int s_eq1 = 0;
    int s_size = 0;
    int tw_greedy_before = -1;
    std::optional<int> tw_exact_before;
    int tw_greedy_after = -1;
    std::optional<int> tw_exact_after;
    std::optional<double> tw_per_sqrt_s;  ///< greedy width of UG(D') / sqrt|S|
    std::vector<Vertex> s;
};

namespace detail {

inline std::optional<int> exact_width_if_small(const UndirectedGraph& g)
{
    if (g.vertex_count() > kExactTreewidthLimit)
        return std::nullopt;
    return exact_treewidth_small(g).width;
}

} // namespace detail

inline AnalysisReport analyze(const Digraph& d, Vertex r, int k)
{
    AnalysisReport rep;
    rep.root = r;
    rep.k = k;
    rep.n = d.vertex_count();
    rep.m = d.arc_count();
    const ReductionOutcome out = reduce_lob(d, r, k);
    rep.outcome = to_string(out.kind);
    rep.guarantee = to_string(out.report.guarantee);
    if (out.kind == ReductionOutcome::Kind::no_branching)
        return rep;

    rep.reduced_vertices = out.reduced.vertex_count();
    rep.alpha = out.report.alpha;
    rep.beta = out.report.beta;
    rep.s_geq2 = out.report.s_geq2_size;
    rep.s_eq1 = out.report.s_eq1_size;
    rep.s = out.s;
    rep.s_size = static_cast<int>(out.s.size());

    const UndirectedGraph before = underlying_graph(out.reduced);
    rep.tw_greedy_before = greedy_decomposition(before).width();
    rep.tw_exact_before = detail::exact_width_if_small(before);

    std::vector<Vertex> keep;
    for (Vertex v = 0; v < out.reduced.vertex_count(); ++v)
        if (!std::binary_search(out.s.begin(), out.s.end(), v))
            keep.push_back(v);
    const UndirectedGraph after = underlying_graph(induced_subgraph(out.reduced, keep));
    rep.tw_greedy_after = greedy_decomposition(after).width();
    rep.tw_exact_after = detail::exact_width_if_small(after);
    if (rep.s_size > 0)
        rep.tw_per_sqrt_s = rep.tw_greedy_before / std::sqrt(static_cast<double>(rep.s_size));
    return rep;
}

inline const std::vector<std::string>& analysis_csv_header()
{
    static const std::vector<std::string> header{
        "root", "k", "n", "m", "outcome", "guarantee", "reduced_vertices", "alpha", "beta",
        "s_geq2", "s_eq1", "s_size", "tw_greedy_before", "tw_exact_before", "tw_greedy_after",
        "tw_exact_after", "tw_per_sqrt_s"};
    return header;
}

inline std::vector<std::string> analysis_csv_row(const AnalysisReport& a)
{
    auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    std::string ratio;
    if (a.tw_per_sqrt_s) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", *a.tw_per_sqrt_s);
        ratio = buf;
    }
    return {std::to_string(a.root), std::to_string(a.k), std::to_string(a.n), std::to_string(a.m),
            a.outcome, a.guarantee, std::to_string(a.reduced_vertices), std::to_string(a.alpha),
            std::to_string(a.beta), std::to_string(a.s_geq2), std::to_string(a.s_eq1),
            std::to_string(a.s_size), std::to_string(a.tw_greedy_before), opt(a.tw_exact_before),
            std::to_string(a.tw_greedy_after), opt(a.tw_exact_after), ratio};
}

inline void write_csv_line(std::ostream& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") == std::string::npos) {
            out << f;
            continue;
        }
        out << '"';
        for (char c : f) {
            if (c == '"')
                out << '"';
            out << c;
        }
        out << '"';
    }
    out << '\n';
}

} // namespace subexp
