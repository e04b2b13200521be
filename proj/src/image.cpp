#include "cbir/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "cbir/error.hpp"
#include "cbir/kernels.hpp"

namespace cbir {

RasterImage::RasterImage(int width, int height, PixelFormat format, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), format_(format), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::ZeroDimension,
                    "image is " + std::to_string(width) + "x" + std::to_string(height));
    }
    const std::size_t expected = pixel_count() * static_cast<std::size_t>(channels());
    if (pixels_.size() != expected) {
        throw Error(ErrorCode::InvalidArgument, "pixel buffer holds " + std::to_string(pixels_.size()) +
                                                    " bytes, expected " + std::to_string(expected));
    }
}

RasterImage RasterImage::filled(int width, int height, PixelFormat format, std::uint8_t value) {
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::ZeroDimension,
                    "image is " + std::to_string(width) + "x" + std::to_string(height));
    }
    const std::size_t n = static_cast<std::size_t>(width) * height * cbir::channels(format);
    return RasterImage(width, height, format, std::vector<std::uint8_t>(n, value));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::IoError, "read failed for " + path.string());
    return bytes;
}

RasterImage load_image(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    try {
        return decode_image(bytes);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.context());
    }
}

RasterImage to_grayscale(const RasterImage& img) {
    if (img.format() == PixelFormat::GRAY8) return img;
    std::vector<std::uint8_t> gray(img.pixel_count());
    kernels::omp::luma(img.pixels(), gray);
    return RasterImage(img.width(), img.height(), PixelFormat::GRAY8, std::move(gray));
}

RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) {
        throw Error(ErrorCode::ZeroDimension,
                    "resize target " + std::to_string(out_w) + "x" + std::to_string(out_h));
    }
    if (out_w == img.width() && out_h == img.height()) return img;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(out_w) * out_h * img.channels());
    kernels::omp::resize_bilinear(img.pixels(), {img.width(), img.height()}, img.channels(), out,
                                  {out_w, out_h});
    return RasterImage(out_w, out_h, img.format(), std::move(out));
}

RasterImage resize_max_dim(const RasterImage& img, int max_dim) {
    const int longest = std::max(img.width(), img.height());
    if (longest == max_dim) return img;
    const double scale = static_cast<double>(max_dim) / longest;
    const int w = std::max(1, static_cast<int>(std::lround(img.width() * scale)));
    const int h = std::max(1, static_cast<int>(std::lround(img.height() * scale)));
    return resize_bilinear(img, w, h);
}

HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    const int mx = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    const double delta = mx - mn;

    HsvPixel px;
    px.v = mx / 255.0;
    px.s = mx == 0 ? 0.0 : delta / mx;
    if (delta == 0.0) return px;  // achromatic: h stays 0

    double h;
    if (mx == r) {
        h = 60.0 * ((g - b) / delta);
        if (h < 0.0) h += 360.0;
    } else if (mx == g) {
        h = 60.0 * (2.0 + (b - r) / delta);
    } else {
        h = 60.0 * (4.0 + (r - g) / delta);
    }
    if (h >= 360.0) h -= 360.0;
    px.h = h;
    return px;
}

std::array<std::uint8_t, 3> hsv_to_rgb(const HsvPixel& px) noexcept {
    const double c = px.v * px.s;
    const double hp = px.h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
    }
    const double m = px.v - c;
    auto to_byte = [](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
    };
    return {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

}  // namespace cbir
