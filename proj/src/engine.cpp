#include "cbir/engine.hpp"

#include <algorithm>

#include "cbir/error.hpp"

namespace cbir {

std::string_view technique_name(Technique t) noexcept {
    switch (t) {
    case Technique::Histogram: return "hist";
    case Technique::Eigen: return "eigen";
    case Technique::MatchPoint: return "match";
    }
    return "?";
}

std::string_view technique_title(Technique t) noexcept {
    switch (t) {
    case Technique::Histogram: return "Histogram";
    case Technique::Eigen: return "Eigen values";
    case Technique::MatchPoint: return "Match Point";
    }
    return "?";
}

std::optional<Technique> parse_technique(std::string_view token) noexcept {
    for (Technique t : kAllTechniques)
        if (technique_name(t) == token) return t;
    return std::nullopt;
}

MonotonicClock steady_clock_source() {
    return [] {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch());
    };
}

QuerySignature extract_query_signature(const RasterImage& img, Technique technique, const IndexConfig& config) {
    switch (technique) {
    case Technique::Histogram: {
        if (img.format() == PixelFormat::RGB8) return compute_histogram(img, config.quantization);
        // Gray queries are treated as their RGB triplication.
        std::vector<std::uint8_t> rgb(img.pixel_count() * 3);
        const auto px = img.pixels();
        for (std::size_t i = 0; i < px.size(); ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = px[i];
        return compute_histogram(RasterImage(img.width(), img.height(), PixelFormat::RGB8, std::move(rgb)),
                                 config.quantization);
    }
    case Technique::Eigen:
        return spectral_signature(to_grayscale(img), config.spectral_side, config.spectral_k, config.jacobi);
    case Technique::MatchPoint:
        return image_features(img, config.harris, config.patch, config.match_max_dim);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown technique");
}

std::vector<RankedHit> rank(std::span<const IndexRecord* const> records, const QuerySignature& q,
                            Technique technique, const IndexConfig& config) {
    const std::size_t expected = static_cast<std::size_t>(technique);
    if (q.index() != expected) {
        throw Error(ErrorCode::InvalidArgument, "query signature does not belong to technique " +
                                                    std::string(technique_name(technique)));
    }

    std::vector<RankedHit> hits(records.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(records.size());
    // Each slot is written by exactly one iteration; errors are carried out of
    // the parallel region and rethrown.
    std::vector<std::exception_ptr> errors(records.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const IndexRecord& rec = *records[i];
        RankedHit& hit = hits[i];
        hit.image_id = rec.image_id;
        try {
            switch (technique) {
            case Technique::Histogram:
                hit.distance = hist_distance(std::get<ColorHistogram>(q), rec.histogram, config.metric);
                break;
            case Technique::Eigen:
                hit.distance = eigen_distance(std::get<SpectralSignature>(q), rec.spectral);
                break;
            case Technique::MatchPoint: {
                const MatchScore s = match_score(std::get<FeatureSet>(q), rec.features, config.ratio);
                hit.distance = s.distance;
                hit.matches = s.matches;
                break;
            }
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::sort(hits.begin(), hits.end(), [](const RankedHit& a, const RankedHit& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.image_id < b.image_id;
    });
    return hits;
}

QueryResult query(const IndexFile& idx, const RasterImage& img, Technique technique, std::size_t top_k,
                  const Scope& scope, const MonotonicClock& clock) {
    if (top_k == 0) throw Error(ErrorCode::InvalidArgument, "top_k must be >= 1");
    if (idx.records.empty()) throw Error(ErrorCode::EmptyScope, "index has no records");
    const MonotonicClock& now = clock ? clock : steady_clock_source();

    if (scope.kind == Scope::Kind::Fixed) {
        const bool known = std::any_of(idx.category_models.begin(), idx.category_models.end(),
                                       [&](const CategoryModel& m) { return m.category == scope.label; });
        if (!known) throw Error(ErrorCode::UnknownCategory, "no category named '" + scope.label + "'");
    }

    QueryResult result;
    result.technique = technique;
    const auto start = now();

    switch (scope.kind) {
    case Scope::Kind::All: result.category_used = "all"; break;
    case Scope::Kind::Fixed: result.category_used = scope.label; break;
    case Scope::Kind::Auto:
        result.category_used = classify(config_edge_signature(img, idx.config), idx.category_models).category;
        break;
    }

    std::vector<const IndexRecord*> candidates;
    candidates.reserve(idx.records.size());
    for (const auto& rec : idx.records)
        if (scope.kind == Scope::Kind::All || rec.category == result.category_used) candidates.push_back(&rec);
    if (candidates.empty()) {
        throw Error(ErrorCode::EmptyScope, "category '" + result.category_used + "' has no records");
    }

    const QuerySignature sig = extract_query_signature(img, technique, idx.config);
    result.ranked = rank(candidates, sig, technique, idx.config);
    result.candidates_searched = candidates.size();
    if (result.ranked.size() > top_k) result.ranked.resize(top_k);

    result.elapsed = now() - start;
    return result;
}

Classification classify_image(const IndexFile& idx, const RasterImage& img) {
    return classify(config_edge_signature(img, idx.config), idx.category_models);
}

}  // namespace cbir
