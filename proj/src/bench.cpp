#include "cbir/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cbir/error.hpp"

namespace cbir {

namespace fs = std::filesystem;

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string md_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::vector<Technique> normalized(std::vector<Technique> ts) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

// Column order: Match Point, Histogram, Eigen values.
int column_rank(Technique t) {
    switch (t) {
    case Technique::MatchPoint: return 0;
    case Technique::Histogram: return 1;
    case Technique::Eigen: return 2;
    }
    return 3;
}

}  // namespace

const TechniqueAverage* BenchReport::average_for(Technique t) const noexcept {
    for (const auto& a : averages)
        if (a.technique == t) return &a;
    return nullptr;
}

BenchReport run_benchmark(const IndexFile& idx, std::span<const fs::path> queries, const BenchOptions& options) {
    if (queries.empty()) throw Error(ErrorCode::EmptyInput, "benchmark needs at least one query");
    const auto techniques = normalized(options.techniques);
    if (techniques.empty()) throw Error(ErrorCode::EmptyInput, "benchmark needs at least one technique");
    const MonotonicClock clock = options.clock ? options.clock : steady_clock_source();

    // Decoding is outside the timed interval, so do it once up front.
    std::vector<std::optional<RasterImage>> images(queries.size());
    std::vector<std::string> decode_errors(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        try {
            images[i] = load_image(queries[i]);
        } catch (const Error& e) {
            decode_errors[i] = std::string(e.name()) + ": " + e.context();
        }
    }

    BenchReport report;
    report.total_queries = queries.size();
    for (Technique t : techniques) {
        if (images.front()) {
            for (std::size_t w = 0; w < options.warmup; ++w) {
                try {
                    (void)query(idx, *images.front(), t, options.top_k, options.scope, clock);
                } catch (const Error&) {
                    break;  // the timed pass records the failure
                }
            }
        }

        TechniqueAverage avg;
        avg.technique = t;
        for (std::size_t i = 0; i < queries.size(); ++i) {
            BenchRow row;
            row.query_path = queries[i].generic_string();
            row.technique = t;
            if (!images[i]) {
                row.error = decode_errors[i];
                report.rows.push_back(std::move(row));
                continue;
            }
            try {
                const QueryResult r = query(idx, *images[i], t, options.top_k, options.scope, clock);
                row.category = r.category_used;
                row.elapsed_sec = r.elapsed_seconds();
                if (!r.ranked.empty()) {
                    row.top1 = r.ranked.front().image_id;
                    row.matches = r.ranked.front().matches;
                }
                avg.sum_sec += row.elapsed_sec;
                ++avg.count;
            } catch (const Error& e) {
                row.error = std::string(e.name()) + ": " + e.context();
            }
            report.rows.push_back(std::move(row));
        }
        if (avg.count > 0) {
            avg.mean_sec = avg.sum_sec / static_cast<double>(avg.count);
            report.averages.push_back(avg);
        }
    }
    if (report.averages.empty()) throw Error(ErrorCode::AllQueriesFailed, "no query succeeded");
    return report;
}

std::string emit_report(const BenchReport& report, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::CSV) {
        out << "query,category,technique,elapsed_sec,top1,matches\n";
        for (const auto& row : report.rows) {
            out << csv_field(row.query_path) << ',' << csv_field(row.category) << ','
                << technique_name(row.technique) << ',';
            if (!row.ok()) {
                out << "error,,\n";
                continue;
            }
            out << fixed6(row.elapsed_sec) << ',';
            if (row.top1) out << *row.top1;
            out << ',';
            if (row.matches) out << *row.matches;
            out << '\n';
        }
        for (const auto& avg : report.averages) {
            out << "AVERAGE," << technique_name(avg.technique) << ",," << fixed6(avg.mean_sec) << ",,\n";
        }
        return out.str();
    }

    std::vector<Technique> columns;
    for (const auto& row : report.rows)
        if (std::find(columns.begin(), columns.end(), row.technique) == columns.end()) columns.push_back(row.technique);
    std::sort(columns.begin(), columns.end(),
              [](Technique a, Technique b) { return column_rank(a) < column_rank(b); });

    // One table row per query, techniques side by side.
    std::vector<std::string> order;
    std::map<std::string, std::map<Technique, const BenchRow*>> cells;
    for (const auto& row : report.rows) {
        if (!cells.contains(row.query_path)) order.push_back(row.query_path);
        cells[row.query_path][row.technique] = &row;
    }

    out << "| Query | Category |";
    for (Technique t : columns) out << ' ' << technique_title(t) << " (sec) |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) out << "---:|";
    out << '\n';
    for (const auto& path : order) {
        std::string category;
        for (const auto& [t, row] : cells[path])
            if (row->ok() && category.empty()) category = row->category;
        out << "| " << md_cell(path) << " | " << md_cell(category) << " |";
        for (Technique t : columns) {
            const auto it = cells[path].find(t);
            if (it == cells[path].end()) {
                out << " - |";
            } else if (!it->second->ok()) {
                out << " error |";
            } else {
                out << ' ' << fixed6(it->second->elapsed_sec);
                if (it->second->matches) out << " (" << *it->second->matches << ')';
                out << " |";
            }
        }
        out << '\n';
    }
    out << "| Average | |";
    for (Technique t : columns) {
        const TechniqueAverage* avg = report.average_for(t);
        if (avg == nullptr) {
            out << " n/a |";
        } else {
            out << ' ' << fixed6(avg->sum_sec) << '/' << avg->count << " = " << fixed6(avg->mean_sec) << " |";
        }
    }
    out << '\n';
    return out.str();
}

std::vector<fs::path> collect_queries(const fs::path& dir_or_list) {
    std::error_code ec;
    std::vector<fs::path> out;
    if (fs::is_directory(dir_or_list, ec)) {
        for (const auto& entry : fs::recursive_directory_iterator(dir_or_list)) {
            if (entry.is_regular_file()) out.push_back(entry.path());
        }
        std::sort(out.begin(), out.end(),
                  [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
        return out;
    }
    std::ifstream in(dir_or_list);
    if (!in) throw Error(ErrorCode::IoError, "cannot read query list " + dir_or_list.string());
    const fs::path base = dir_or_list.parent_path();
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        fs::path p(line);
        out.push_back(p.is_relative() ? base / p : p);
    }
    return out;
}

}  // namespace cbir
