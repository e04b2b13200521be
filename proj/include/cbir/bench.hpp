#ifndef CBIR_BENCH_HPP
#define CBIR_BENCH_HPP

// Retrieval latency benchmark: every query once per technique, timed with the
// engine's monotonic interval, averaged per technique.
//
// Runs are strictly sequential. Concurrent queries would share cores and
// corrupt the per-query latency attribution, so run_benchmark must not be
// called from several threads at once against a shared machine budget, and
// it never issues two queries at the same time itself.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbir/engine.hpp"

namespace cbir {

struct BenchRow {
    std::string query_path;
    std::string category;  // category the engine searched
    Technique technique = Technique::Histogram;
    double elapsed_sec = 0.0;
    std::optional<std::uint32_t> top1;
    std::optional<std::size_t> matches;  // MatchPoint only
    std::optional<std::string> error;    // failed rows carry no timing

    [[nodiscard]] bool ok() const noexcept { return !error.has_value(); }
};

struct TechniqueAverage {
    Technique technique = Technique::Histogram;
    double sum_sec = 0.0;
    std::size_t count = 0;
    double mean_sec = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;  // technique-major, queries in input order
    std::vector<TechniqueAverage> averages;  // enum order, techniques with >= 1 success
    std::size_t total_queries = 0;

    [[nodiscard]] const TechniqueAverage* average_for(Technique t) const noexcept;
};

struct BenchOptions {
    std::vector<Technique> techniques{kAllTechniques.begin(), kAllTechniques.end()};
    Scope scope = Scope::automatic();
    std::size_t warmup = 1;
    std::size_t top_k = 10;
    MonotonicClock clock;  // empty: steady clock
};

// Throws EmptyInput (no queries) or AllQueriesFailed.
[[nodiscard]] BenchReport run_benchmark(const IndexFile& idx, std::span<const std::filesystem::path> queries,
                                        const BenchOptions& options = {});

enum class ReportFormat { CSV, Markdown };

[[nodiscard]] std::string emit_report(const BenchReport& report, ReportFormat format);

// A directory (every regular file beneath it, sorted) or a text file with one
// path per line; relative lines resolve against the list's directory.
[[nodiscard]] std::vector<std::filesystem::path> collect_queries(const std::filesystem::path& dir_or_list);

}  // namespace cbir

#endif  // CBIR_BENCH_HPP
