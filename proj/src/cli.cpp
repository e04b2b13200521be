#include "cbir/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "cbir/bench.hpp"
#include "cbir/engine.hpp"
#include "cbir/error.hpp"
#include "cbir/parallel.hpp"

namespace cbir {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

HsvQuantization parse_bins(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 3) throw UsageError("--bins expects H,S,V, got '" + text + "'");
    HsvQuantization q;
    try {
        q.bins_h = std::stoi(parts[0]);
        q.bins_s = std::stoi(parts[1]);
        q.bins_v = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw UsageError("--bins expects three integers, got '" + text + "'");
    }
    if (!q.valid()) throw UsageError("--bins needs every count >= 1 and a product >= 2");
    return q;
}

Scope parse_scope(const std::string& text) {
    const std::string v = lower(text);
    if (v == "auto") return Scope::automatic();
    if (v == "all" || v == "none") return Scope::all();
    if (v.empty()) throw UsageError("--category must not be empty");
    return Scope::fixed(v);
}

// Extraction flags. Accepted by `index`; registered on the query-side
// commands only so that using them there is rejected with a clear message.
struct ExtractionFlags {
    std::string bins = "8,4,4";
    std::string metric = "l1";
    int eigen_side = kDefaultSpectralSide;
    int eigen_k = kDefaultSpectralK;
    double harris_k = 0.04;
    double rel_threshold = 0.01;
    double ratio = kDefaultRatio;
    int patch = kDefaultPatch;
    double edge_threshold = kDefaultEdgeThreshold;
    std::vector<CLI::Option*> options;

    void attach(CLI::App* app, bool build_time) {
        options = {
            app->add_option("--bins", bins, "HSV quantization bins H,S,V")->capture_default_str(),
            app->add_option("--metric", metric, "histogram metric: l1 | intersection")->capture_default_str(),
            app->add_option("--eigen-side", eigen_side, "spectral resize side S")->capture_default_str(),
            app->add_option("--eigen-k", eigen_k, "eigenvalues kept per signature")->capture_default_str(),
            app->add_option("--harris-k", harris_k, "Harris k")->capture_default_str(),
            app->add_option("--rel-threshold", rel_threshold, "Harris relative threshold")->capture_default_str(),
            app->add_option("--ratio", ratio, "match ratio test")->capture_default_str(),
            app->add_option("--patch", patch, "descriptor patch side (odd)")->capture_default_str(),
            app->add_option("--edge-threshold", edge_threshold, "classifier edge magnitude threshold")
                ->capture_default_str(),
        };
        const char* group = build_time ? "Extraction" : "Extraction (fixed by the index; rejected here)";
        for (CLI::Option* opt : options) opt->group(group);
    }

    void reject_if_used() const {
        for (const CLI::Option* opt : options) {
            if (opt->count() > 0) {
                throw UsageError(opt->get_name() +
                                 " is an extraction parameter; it is fixed when the index is built");
            }
        }
    }

    IndexConfig to_config() const {
        IndexConfig c;
        c.quantization = parse_bins(bins);
        const std::string m = lower(metric);
        if (m == "l1") {
            c.metric = HistMetric::L1;
        } else if (m == "intersection") {
            c.metric = HistMetric::Intersection;
        } else {
            throw UsageError("--metric must be l1 or intersection");
        }
        c.spectral_side = eigen_side;
        c.spectral_k = eigen_k;
        c.harris.k = harris_k;
        c.harris.rel_threshold = rel_threshold;
        c.ratio = ratio;
        c.patch = patch;
        c.edge_threshold = edge_threshold;
        try {
            c.validate();
        } catch (const Error& e) {
            throw UsageError(e.context());
        }
        return c;
    }
};

void print_inspect(const IndexFile& idx, std::ostream& out) {
    const IndexConfig& c = idx.config;
    out << "format_version " << idx.format_version << '\n'
        << "bins " << c.quantization.bins_h << ',' << c.quantization.bins_s << ',' << c.quantization.bins_v << '\n'
        << "metric " << (c.metric == HistMetric::L1 ? "l1" : "intersection") << '\n'
        << "eigen_side " << c.spectral_side << '\n'
        << "eigen_k " << c.spectral_k << '\n'
        << "jacobi_tol " << c.jacobi.tol << '\n'
        << "jacobi_max_sweeps " << c.jacobi.max_sweeps << '\n'
        << "harris_k " << c.harris.k << '\n'
        << "harris_window " << c.harris.window << '\n'
        << "harris_sigma " << c.harris.sigma << '\n'
        << "rel_threshold " << c.harris.rel_threshold << '\n'
        << "nms_radius " << c.harris.nms_radius << '\n'
        << "match_max_dim " << c.match_max_dim << '\n'
        << "patch " << c.patch << '\n'
        << "ratio " << c.ratio << '\n'
        << "edge_threshold " << c.edge_threshold << '\n'
        << "classify_side " << c.classify_side << '\n'
        << "records " << idx.records.size() << '\n';

    std::map<std::string, std::size_t> counts;
    for (const auto& m : idx.category_models) counts[m.category] = 0;
    for (const auto& r : idx.records) ++counts[r.category];
    for (const auto& [label, n] : counts) out << "category " << label << ' ' << n << '\n';
    for (const auto& m : idx.category_models) {
        out << "centroid " << m.category;
        for (double v : m.centroid) out << ' ' << fixed6(v);
        out << '\n';
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Content-based image retrieval: index, classify, query and benchmark.", "cbir"};
    app.require_subcommand(1);

    auto* index_cmd = app.add_subcommand("index", "build an index from <dir>/<category>/<images>");
    std::string index_dir, index_out;
    index_cmd->add_option("dir", index_dir, "corpus root, one subdirectory per category")->required();
    index_cmd->add_option("--out", index_out, "index file to write")->required();
    ExtractionFlags build_flags;
    build_flags.attach(index_cmd, true);

    auto* classify_cmd = app.add_subcommand("classify", "print the category the classifier assigns an image");
    std::string classify_image_path, classify_index;
    classify_cmd->add_option("image", classify_image_path)->required();
    classify_cmd->add_option("--index", classify_index)->required();
    ExtractionFlags classify_flags;
    classify_flags.attach(classify_cmd, false);

    auto* query_cmd = app.add_subcommand("query", "rank indexed images against a query image");
    std::string query_image, query_index, query_technique, query_category = "auto";
    int top_k = 10;
    query_cmd->add_option("image", query_image)->required();
    query_cmd->add_option("--index", query_index)->required();
    query_cmd->add_option("--technique", query_technique, "hist | eigen | match")->required();
    query_cmd->add_option("--top-k", top_k, "results to print")->capture_default_str();
    query_cmd->add_option("--category", query_category, "auto | all (alias none) | <label>")->capture_default_str();
    ExtractionFlags query_flags;
    query_flags.attach(query_cmd, false);

    auto* bench_cmd = app.add_subcommand("bench", "time every query under each technique");
    std::string bench_index, bench_queries, bench_techniques = "hist,eigen,match", bench_format = "md",
                                                bench_out, bench_category = "auto";
    int warmup = 1;
    bench_cmd->add_option("--index", bench_index)->required();
    bench_cmd->add_option("--queries", bench_queries, "directory of images or a file listing paths")->required();
    bench_cmd->add_option("--techniques", bench_techniques, "comma list of hist,eigen,match")->capture_default_str();
    bench_cmd->add_option("--format", bench_format, "csv | md")->capture_default_str();
    bench_cmd->add_option("--out", bench_out, "write the report here instead of stdout");
    bench_cmd->add_option("--category", bench_category, "auto | all (alias none) | <label>")->capture_default_str();
    bench_cmd->add_option("--warmup", warmup, "untimed passes per technique")->capture_default_str();
    ExtractionFlags bench_flags;
    bench_flags.attach(bench_cmd, false);

    auto* inspect_cmd = app.add_subcommand("inspect", "print index configuration, category counts and centroids");
    std::string inspect_index;
    inspect_cmd->add_option("--index", inspect_index)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        if (e.get_exit_code() != 0) err << app.help();
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    if (!apply_thread_env()) {
        err << "error: CBIR_THREADS must be a non-negative integer\n";
        return kExitUsage;
    }

    try {
        if (index_cmd->parsed()) {
            const IndexConfig config = build_flags.to_config();
            const IndexFile idx = build_index(index_dir, config, [&](const std::string& path, const std::string& why) {
                err << "skipped " << path << ": " << why << '\n';
            });
            save_index(idx, index_out);
            out << "indexed " << idx.records.size() << " images in " << idx.category_models.size()
                << " categories -> " << index_out << '\n';
            return kExitOk;
        }
        if (classify_cmd->parsed()) {
            classify_flags.reject_if_used();
            const IndexFile idx = load_index(classify_index);
            const Classification c = classify_image(idx, load_image(classify_image_path));
            out << c.category << '\t' << fixed6(c.margin) << '\n';
            return kExitOk;
        }
        if (query_cmd->parsed()) {
            query_flags.reject_if_used();
            const auto technique = parse_technique(lower(query_technique));
            if (!technique) throw UsageError("--technique must be hist, eigen or match");
            if (top_k < 1) throw UsageError("--top-k must be >= 1");
            const Scope scope = parse_scope(query_category);

            const IndexFile idx = load_index(query_index);
            const RasterImage img = load_image(query_image);
            const QueryResult r = query(idx, img, *technique, static_cast<std::size_t>(top_k), scope);

            std::map<std::uint32_t, const IndexRecord*> by_id;
            for (const auto& rec : idx.records) by_id[rec.image_id] = &rec;
            out << "technique=" << technique_name(r.technique) << " category=" << r.category_used
                << " candidates=" << r.candidates_searched << " elapsed_sec=" << fixed6(r.elapsed_seconds()) << '\n';
            std::size_t rank_no = 1;
            for (const auto& hit : r.ranked) {
                out << rank_no++ << '\t' << hit.image_id << '\t' << fixed6(hit.distance) << '\t';
                if (hit.matches) {
                    out << *hit.matches;
                } else {
                    out << '-';
                }
                out << '\t' << by_id.at(hit.image_id)->path << '\n';
            }
            return kExitOk;
        }
        if (bench_cmd->parsed()) {
            bench_flags.reject_if_used();
            BenchOptions options;
            options.techniques.clear();
            for (const auto& token : split_commas(lower(bench_techniques))) {
                const auto t = parse_technique(token);
                if (!t) throw UsageError("unknown technique '" + token + "' in --techniques");
                options.techniques.push_back(*t);
            }
            if (options.techniques.empty()) throw UsageError("--techniques must name at least one technique");
            const std::string fmt = lower(bench_format);
            if (fmt != "csv" && fmt != "md") throw UsageError("--format must be csv or md");
            if (warmup < 0) throw UsageError("--warmup must be >= 0");
            options.warmup = static_cast<std::size_t>(warmup);
            options.scope = parse_scope(bench_category);

            const IndexFile idx = load_index(bench_index);
            const auto queries = collect_queries(bench_queries);
            const BenchReport report = run_benchmark(idx, queries, options);
            for (const auto& row : report.rows) {
                if (!row.ok()) {
                    err << "query failed " << row.query_path << " [" << technique_name(row.technique)
                        << "]: " << *row.error << '\n';
                }
            }
            const std::string text = emit_report(report, fmt == "csv" ? ReportFormat::CSV : ReportFormat::Markdown);
            if (bench_out.empty()) {
                out << text;
            } else {
                std::ofstream f(bench_out, std::ios::binary | std::ios::trunc);
                if (!f || !(f << text)) throw Error(ErrorCode::IoError, "cannot write " + bench_out);
            }
            return kExitOk;
        }
        if (inspect_cmd->parsed()) {
            print_inspect(load_index(inspect_index), out);
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace cbir
