#ifndef CBIR_IMAGE_HPP
#define CBIR_IMAGE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace cbir {

enum class PixelFormat : std::uint8_t { RGB8, GRAY8 };

[[nodiscard]] constexpr int channels(PixelFormat format) noexcept {
    return format == PixelFormat::RGB8 ? 3 : 1;
}

/// Decoded pixel grid, row-major, interleaved channels. Immutable once built;
/// the constructor enforces width, height >= 1 and the buffer length.
class RasterImage {
public:
    RasterImage(int width, int height, PixelFormat format, std::vector<std::uint8_t> pixels);

    static RasterImage filled(int width, int height, PixelFormat format, std::uint8_t value);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] PixelFormat format() const noexcept { return format_; }
    [[nodiscard]] int channels() const noexcept { return cbir::channels(format_); }
    [[nodiscard]] std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    [[nodiscard]] std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

    [[nodiscard]] std::uint8_t at(int x, int y, int channel = 0) const {
        return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels() + channel];
    }

    bool operator==(const RasterImage&) const = default;

private:
    int width_;
    int height_;
    PixelFormat format_;
    std::vector<std::uint8_t> pixels_;
};

/// h in [0, 360), s and v in [0, 1]. Achromatic pixels (s == 0) carry h == 0.
struct HsvPixel {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

// PNG, JPEG or BMP stream -> RGB8. Alpha is dropped, gray is triplicated.
// Throws UnsupportedFormat, CorruptStream or ZeroDimension.
[[nodiscard]] RasterImage decode_image(std::span<const std::uint8_t> bytes);

// Reads the file and decodes it; IoError when the file cannot be read.
[[nodiscard]] RasterImage load_image(const std::filesystem::path& path);

[[nodiscard]] std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

// BT.601 luma, rounded. GRAY8 input is returned unchanged.
[[nodiscard]] RasterImage to_grayscale(const RasterImage& img);

// Pixel-centre aligned bilinear resampling with edge clamping.
[[nodiscard]] RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h);

// Resizes so that max(width, height) == max_dim, keeping the aspect ratio.
[[nodiscard]] RasterImage resize_max_dim(const RasterImage& img, int max_dim);

[[nodiscard]] HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

// Inverse hexcone conversion, rounded to bytes.
[[nodiscard]] std::array<std::uint8_t, 3> hsv_to_rgb(const HsvPixel& px) noexcept;

}  // namespace cbir

#endif  // CBIR_IMAGE_HPP
