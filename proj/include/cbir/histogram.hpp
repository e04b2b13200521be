#ifndef CBIR_HISTOGRAM_HPP
#define CBIR_HISTOGRAM_HPP

#include <cstdint>
#include <vector>

#include "cbir/image.hpp"

namespace cbir {

/// Uniform HSV quantization; bin count L = bins_h * bins_s * bins_v.
struct HsvQuantization {
    int bins_h = 8;
    int bins_s = 4;
    int bins_v = 4;

    [[nodiscard]] int total() const noexcept { return bins_h * bins_s * bins_v; }
    // All bin counts >= 1 and L >= 2.
    [[nodiscard]] bool valid() const noexcept {
        return bins_h >= 1 && bins_s >= 1 && bins_v >= 1 && total() >= 2;
    }
    bool operator==(const HsvQuantization&) const = default;
};

/// Normalized global color histogram: values[k] = n_k / n.
struct ColorHistogram {
    std::vector<double> values;
    std::uint64_t n = 0;

    bool operator==(const ColorHistogram&) const = default;
};

enum class HistMetric : std::uint8_t { L1, Intersection };

[[nodiscard]] int quantize_hsv(const HsvPixel& px, const HsvQuantization& q) noexcept;

// Bin index of an RGB triple; the composition rgb_to_hsv -> quantize_hsv.
[[nodiscard]] inline int rgb_bin(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                                 const HsvQuantization& q) noexcept {
    return quantize_hsv(rgb_to_hsv(r, g, b), q);
}

[[nodiscard]] ColorHistogram compute_histogram(const RasterImage& img, const HsvQuantization& q);

// L1 in [0, 2]; Intersection distance 1 - sum(min) in [0, 1].
// Throws LengthMismatch when the bin counts differ.
[[nodiscard]] double hist_distance(const ColorHistogram& a, const ColorHistogram& b,
                                   HistMetric metric);

}  // namespace cbir

#endif  // CBIR_HISTOGRAM_HPP
