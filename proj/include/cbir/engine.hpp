#ifndef CBIR_ENGINE_HPP
#define CBIR_ENGINE_HPP

// Query pipeline: pick the category (classifier, fixed label, or all), extract
// the one signature the technique needs, rank that category's records.

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cbir/index_store.hpp"

namespace cbir {

// Enum order is the benchmark's execution order.
enum class Technique : std::uint8_t { Histogram, Eigen, MatchPoint };

inline constexpr std::array<Technique, 3> kAllTechniques = {Technique::Histogram, Technique::Eigen,
                                                            Technique::MatchPoint};

// CLI token: "hist", "eigen", "match".
[[nodiscard]] std::string_view technique_name(Technique t) noexcept;
// Report column heading.
[[nodiscard]] std::string_view technique_title(Technique t) noexcept;
[[nodiscard]] std::optional<Technique> parse_technique(std::string_view token) noexcept;

struct Scope {
    enum class Kind : std::uint8_t { Auto, Fixed, All };
    Kind kind = Kind::Auto;
    std::string label;  // Fixed only

    static Scope automatic() { return {}; }
    static Scope fixed(std::string label) { return {Kind::Fixed, std::move(label)}; }
    static Scope all() { return {Kind::All, {}}; }
};

struct RankedHit {
    std::uint32_t image_id = 0;
    double distance = 0.0;
    std::optional<std::size_t> matches;  // MatchPoint only

    bool operator==(const RankedHit&) const = default;
};

struct QueryResult {
    std::vector<RankedHit> ranked;  // ascending distance, ties by ascending id
    Technique technique = Technique::Histogram;
    std::string category_used;      // a label, or "all"
    std::chrono::nanoseconds elapsed{0};
    std::size_t candidates_searched = 0;

    [[nodiscard]] double elapsed_seconds() const noexcept {
        return std::chrono::duration<double>(elapsed).count();
    }
};

using QuerySignature = std::variant<ColorHistogram, SpectralSignature, FeatureSet>;

// Monotonic time source; tests substitute a scripted one.
using MonotonicClock = std::function<std::chrono::nanoseconds()>;
[[nodiscard]] MonotonicClock steady_clock_source();

[[nodiscard]] QuerySignature extract_query_signature(const RasterImage& img, Technique technique,
                                                     const IndexConfig& config);

// Distances for every record, sorted. The signature must belong to `technique`.
[[nodiscard]] std::vector<RankedHit> rank(std::span<const IndexRecord* const> records, const QuerySignature& q,
                                          Technique technique, const IndexConfig& config);

// Timed interval: classification (Auto scope), signature extraction and
// ranking. Decoding the query and loading the index happen outside it.
// Throws UnknownCategory, EmptyScope or InvalidArgument (top_k == 0).
[[nodiscard]] QueryResult query(const IndexFile& idx, const RasterImage& img, Technique technique,
                                std::size_t top_k, const Scope& scope, const MonotonicClock& clock = {});

[[nodiscard]] Classification classify_image(const IndexFile& idx, const RasterImage& img);

}  // namespace cbir

#endif  // CBIR_ENGINE_HPP
