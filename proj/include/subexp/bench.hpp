#pragma once

// Benchmark harness: every case of a suite against every listed problem,
// one CSV row each. Budget and contract failures are recorded in the row.

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "subexp/analyze.hpp"
#include "subexp/generate.hpp"
#include "subexp/iob.hpp"
#include "subexp/kpath.hpp"
#include "subexp/lob.hpp"

namespace subexp {

struct BenchCase {
    std::string name;
    GeneratorSpec spec;
    int k = 1;
    std::optional<Vertex> root;
};

struct BenchSuite {
    std::vector<BenchCase> cases;
    std::vector<std::string> problems{"lob", "iob", "kpath"};
    int b = 2;
    std::uint64_t budget = kDefaultCollectionBudget;
};

inline const std::vector<std::string>& bench_csv_header()
{
    static const std::vector<std::string> header{
        "case", "family", "n", "m", "problem", "k", "root", "answer",
        "collection_size", "instances", "max_width", "error", "time_ms"};
    return header;
}

inline std::vector<std::string> bench_row(const BenchCase& c, const Digraph& d,
                                          const std::string& problem, const BenchSuite& suite)
{
    std::vector<std::string> row{c.name, to_string(c.spec.family),
                                 std::to_string(d.vertex_count()), std::to_string(d.arc_count()),
                                 problem, std::to_string(c.k),
                                 c.root ? std::to_string(*c.root) : std::string()};
    std::string answer, collection, instances, width, error;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (problem == "lob") {
            LobOptions opt;
            opt.root = c.root;
            const LobResult res = solve_lob(d, c.k, opt);
            answer = res.answer ? "yes" : "no";
            instances = std::to_string(res.trace.size());
            width = std::to_string(res.max_decomposition_width);
        } else if (problem == "iob") {
            IobOptions opt;
            opt.root = c.root;
            opt.budget = suite.budget;
            const IobResult res = solve_iob(d, c.k, opt);
            answer = res.answer ? "yes" : "no";
            collection = std::to_string(res.stats.collection_size);
            instances = std::to_string(res.stats.instances_examined);
            width = std::to_string(res.stats.max_width);
        } else if (problem == "kpath") {
            KpathOptions opt;
            opt.budget = suite.budget;
            const KpathResult res =
                solve_kpath_ballcover(d, c.k, std::min(suite.b, d.vertex_count()), opt);
            answer = res.answer ? "yes" : "no";
            collection = std::to_string(res.stats.ball_sets);
            instances = std::to_string(res.stats.sets_examined);
            width = std::to_string(res.stats.max_width);
        } else {
            throw PreconditionError("unknown problem '" + problem + "'");
        }
    } catch (const Error& e) {
        error = e.kind();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    row.insert(row.end(), {answer, collection, instances, width, error, buf});
    return row;
}

/// Rows are cases x problems, case-major.
inline void run_bench(const BenchSuite& suite, std::ostream& out)
{
    write_csv_line(out, bench_csv_header());
    for (const BenchCase& c : suite.cases) {
        const Digraph d = generate(c.spec);
        for (const std::string& p : suite.problems)
            write_csv_line(out, bench_row(c, d, p, suite));
    }
}

} // namespace subexp
