#ifndef CBIR_MATCHPOINT_HPP
#define CBIR_MATCHPOINT_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cbir/image.hpp"

namespace cbir {

inline constexpr int kDefaultPatch = 9;
inline constexpr double kDefaultRatio = 0.8;
inline constexpr int kMatchMaxDim = 256;

struct HarrisParams {
    double k = 0.04;
    int window = 5;  // Gaussian window side, odd
    double sigma = 1.0;
    double rel_threshold = 0.01;
    int nms_radius = 3;

    bool operator==(const HarrisParams&) const = default;
};

struct Corner {
    int x = 0;
    int y = 0;
    double response = 0.0;

    bool operator==(const Corner&) const = default;
};

/// M descriptors of length N, row-major, each zero-mean and unit-norm, with
/// the corner each row was cut around.
struct FeatureSet {
    int dim = kDefaultPatch * kDefaultPatch;
    std::vector<double> descriptors;
    std::vector<Corner> points;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return std::span<const double>(descriptors).subspan(i * static_cast<std::size_t>(dim),
                                                            static_cast<std::size_t>(dim));
    }
    bool operator==(const FeatureSet&) const = default;
};

using MatchList = std::vector<std::pair<std::size_t, std::size_t>>;

struct MatchScore {
    std::size_t matches = 0;
    double distance = 1.0;  // 1 / (1 + matches)
};

// Harris response over Gaussian-smoothed Sobel structure tensors, relative
// threshold, then non-maximum suppression in a (2r+1)^2 window. Corners come
// back by descending response, ties by (y, x). ImageTooSmall below window + 2.
[[nodiscard]] std::vector<Corner> harris_corners(const RasterImage& gray, const HarrisParams& params = {});

// The full-resolution response map, exposed for tests and tooling.
[[nodiscard]] std::vector<double> harris_response_map(const RasterImage& gray, const HarrisParams& params = {});

// Normalized patch x patch intensity descriptors. Corners whose patch leaves
// the image or is flat (norm < 1e-9) are dropped. EvenPatch for even sizes.
[[nodiscard]] FeatureSet extract_descriptors(const RasterImage& gray, std::span<const Corner> corners,
                                             int patch = kDefaultPatch);

// Ratio test in both directions plus mutual nearest neighbours; equal
// distances resolve to the smaller index. Sorted by index into `a`.
[[nodiscard]] MatchList match_features(const FeatureSet& a, const FeatureSet& b, double ratio = kDefaultRatio);

[[nodiscard]] MatchScore match_score(const FeatureSet& a, const FeatureSet& b, double ratio = kDefaultRatio);

// Resize to kMatchMaxDim on the long side, grayscale, detect, describe. Images
// too small to hold a Harris window give an empty set.
[[nodiscard]] FeatureSet image_features(const RasterImage& img, const HarrisParams& params = {},
                                        int patch = kDefaultPatch, int max_dim = kMatchMaxDim);

}  // namespace cbir

#endif  // CBIR_MATCHPOINT_HPP
