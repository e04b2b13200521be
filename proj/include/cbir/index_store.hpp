#ifndef CBIR_INDEX_STORE_HPP
#define CBIR_INDEX_STORE_HPP

// Per-image signatures for every technique plus the category centroids,
// persisted in a little-endian binary file:
//
//   "CBIR" | u32 version | config | u32 #models, models | u32 #records, records | u32 crc32
//
// Reals are IEEE-754 binary64, strings are u32 length + UTF-8 bytes, and the
// trailing CRC-32 covers every byte before it.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cbir/edges.hpp"
#include "cbir/histogram.hpp"
#include "cbir/matchpoint.hpp"
#include "cbir/spectral.hpp"

namespace cbir {

inline constexpr std::uint32_t kIndexFormatVersion = 1;

/// Extraction parameters fixed at build time; queries reuse them verbatim.
struct IndexConfig {
    HsvQuantization quantization{};
    HistMetric metric = HistMetric::L1;
    int spectral_side = kDefaultSpectralSide;
    int spectral_k = kDefaultSpectralK;
    JacobiOptions jacobi{};
    HarrisParams harris{};
    int match_max_dim = kMatchMaxDim;
    int patch = kDefaultPatch;
    double ratio = kDefaultRatio;
    double edge_threshold = kDefaultEdgeThreshold;
    int classify_side = kClassifySide;

    // Throws InvalidArgument naming the first bad field.
    void validate() const;

    bool operator==(const IndexConfig&) const = default;
};

struct IndexRecord {
    std::uint32_t image_id = 0;
    std::string path;
    std::string category;
    ColorHistogram histogram;
    SpectralSignature spectral;
    FeatureSet features;
    EdgeSignature edge_sig;

    bool operator==(const IndexRecord&) const = default;
};

struct IndexFile {
    std::uint32_t format_version = kIndexFormatVersion;
    IndexConfig config;
    std::vector<CategoryModel> category_models;
    std::vector<IndexRecord> records;

    bool operator==(const IndexFile&) const = default;
};

// Called for every file that could not be decoded during a build.
using SkipReporter = std::function<void(const std::string& path, const std::string& reason)>;

// Edge signature under the config's classifier settings.
[[nodiscard]] EdgeSignature config_edge_signature(const RasterImage& img, const IndexConfig& config);

// All four signatures for one decoded image.
[[nodiscard]] IndexRecord extract_record(const RasterImage& img, const IndexConfig& config);

// root/<category>/<image files>. Category labels are lowercased directory
// names; ids follow ascending path order. Undecodable files are reported and
// skipped. Throws TooFewCategories or EmptyCategory.
[[nodiscard]] IndexFile build_index(const std::filesystem::path& root, const IndexConfig& config = {},
                                    const SkipReporter& on_skip = {});

[[nodiscard]] std::vector<std::uint8_t> serialize_index(const IndexFile& idx);

// Throws BadMagic, UnsupportedVersion, TruncatedFile, TrailingBytes or ChecksumMismatch.
[[nodiscard]] IndexFile deserialize_index(std::span<const std::uint8_t> bytes);

void save_index(const IndexFile& idx, const std::filesystem::path& path);
[[nodiscard]] IndexFile load_index(const std::filesystem::path& path);

[[nodiscard]] std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace cbir

#endif  // CBIR_INDEX_STORE_HPP
