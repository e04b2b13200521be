#ifndef CBIR_SYNTH_HPP
#define CBIR_SYNTH_HPP

// Deterministic synthetic images and encoders. Used to generate the bundled
// desk corpus and test fixtures; the retrieval path never depends on it.

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbir/image.hpp"

namespace cbir::synth {

// GRAY8 images become 8-bit grayscale PNGs, RGB8 become RGB PNGs.
[[nodiscard]] std::vector<std::uint8_t> encode_png(const RasterImage& img);
[[nodiscard]] std::vector<std::uint8_t> encode_png_rgba(int width, int height, std::span<const std::uint8_t> rgba);
[[nodiscard]] std::vector<std::uint8_t> encode_jpeg(const RasterImage& img, int quality = 90);
// 24-bit bottom-up BMP.
[[nodiscard]] std::vector<std::uint8_t> encode_bmp(const RasterImage& img);

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

[[nodiscard]] RasterImage random_rgb(int width, int height, std::mt19937_64& rng);
[[nodiscard]] RasterImage random_gray(int width, int height, std::mt19937_64& rng, int lo = 0, int hi = 255);

// Black side x side GRAY8 canvas with a white square of `square` pixels centred on it.
[[nodiscard]] RasterImage white_square(int side = 128, int square = 32);
// GRAY8, left half 0, right half 255.
[[nodiscard]] RasterImage vertical_step(int width, int height);

// Procedural scenes for the four bundled categories: "animal", "face",
// "flower", "vehicle". Same (category, variant) always yields the same image.
[[nodiscard]] std::vector<std::string> desk_categories();
[[nodiscard]] RasterImage desk_scene(std::string_view category, int variant, int size = 256);

// Four edge-structure families for classifier checks.
enum class EdgePattern { NoisyBlank, HorizontalStripes, VerticalStripes, Checkerboard };
[[nodiscard]] std::string_view pattern_label(EdgePattern p);
[[nodiscard]] RasterImage edge_pattern(EdgePattern p, std::uint64_t seed, int size = 256);

}  // namespace cbir::synth

#endif  // CBIR_SYNTH_HPP
