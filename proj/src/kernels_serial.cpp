#include <algorithm>
#include <cmath>
#include <numbers>

#include "cbir/kernels.hpp"

namespace cbir::kernels::serial {

void luma(std::span<const std::uint8_t> rgb, std::span<std::uint8_t> gray) {
    for (std::size_t i = 0; i < gray.size(); ++i) {
        const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
        gray[i] = static_cast<std::uint8_t>(y + 0.5);
    }
}

void resize_bilinear(std::span<const std::uint8_t> src, Extent src_size, int channels,
                     std::span<std::uint8_t> dst, Extent dst_size) {
    const double sx_scale = static_cast<double>(src_size.width) / dst_size.width;
    const double sy_scale = static_cast<double>(src_size.height) / dst_size.height;
    for (int y = 0; y < dst_size.height; ++y) {
        double sy = (y + 0.5) * sy_scale - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(src_size.height - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, src_size.height - 1);
        const double fy = sy - y0;
        for (int x = 0; x < dst_size.width; ++x) {
            double sx = (x + 0.5) * sx_scale - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(src_size.width - 1));
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, src_size.width - 1);
            const double fx = sx - x0;
            for (int c = 0; c < channels; ++c) {
                auto px = [&](int xx, int yy) {
                    return static_cast<double>(
                        src[(static_cast<std::size_t>(yy) * src_size.width + xx) * channels + c]);
                };
                const double top = (1.0 - fx) * px(x0, y0) + fx * px(x1, y0);
                const double bottom = (1.0 - fx) * px(x0, y1) + fx * px(x1, y1);
                const double v = (1.0 - fy) * top + fy * bottom;
                dst[(static_cast<std::size_t>(y) * dst_size.width + x) * channels + c] =
                    static_cast<std::uint8_t>(v + 0.5);
            }
        }
    }
}

void hsv_bin_counts(std::span<const std::uint8_t> rgb, const HsvQuantization& q,
                    std::span<std::uint64_t> counts) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i + 2 < rgb.size(); i += 3) {
        ++counts[rgb_bin(rgb[i], rgb[i + 1], rgb[i + 2], q)];
    }
}

void sobel(std::span<const std::uint8_t> gray, Extent size, std::span<double> gx,
           std::span<double> gy) {
    const int w = size.width;
    const int h = size.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (x == 0 || y == 0 || x == w - 1 || y == h - 1) {
                gx[i] = 0.0;
                gy[i] = 0.0;
                continue;
            }
            auto p = [&](int dx, int dy) {
                return static_cast<int>(gray[static_cast<std::size_t>(y + dy) * w + (x + dx)]);
            };
            const int sx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
            const int sy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
            gx[i] = sx;
            gy[i] = sy;
        }
    }
}

void gradient_polar(std::span<const double> gx, std::span<const double> gy,
                    std::span<double> magnitude, std::span<double> orientation) {
    for (std::size_t i = 0; i < gx.size(); ++i) {
        magnitude[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
        double theta = std::atan2(gy[i], gx[i]);
        if (theta < 0.0) theta += std::numbers::pi;
        if (theta >= std::numbers::pi) theta -= std::numbers::pi;
        orientation[i] = theta;
    }
}

void gram(std::span<const double> a, int side, std::span<double> g) {
    const std::size_t n = static_cast<std::size_t>(side);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += a[k * n + i] * a[k * n + j];
            g[i * n + j] = sum / side;
        }
    }
}

void harris_response(std::span<const double> gx, std::span<const double> gy, Extent size,
                     std::span<const double> kernel1d, double k, std::span<double> response) {
    const int w = size.width;
    const int h = size.height;
    const int r = static_cast<int>(kernel1d.size()) / 2;
    std::fill(response.begin(), response.end(), 0.0);
    for (int y = r; y < h - r; ++y) {
        for (int x = r; x < w - r; ++x) {
            double sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const std::size_t j = static_cast<std::size_t>(y + dy) * w + (x + dx);
                    const double wt = kernel1d[dy + r] * kernel1d[dx + r];
                    sxx += wt * gx[j] * gx[j];
                    syy += wt * gy[j] * gy[j];
                    sxy += wt * gx[j] * gy[j];
                }
            }
            const double det = sxx * syy - sxy * sxy;
            const double tr = sxx + syy;
            response[static_cast<std::size_t>(y) * w + x] = det - k * tr * tr;
        }
    }
}

void sq_distance_table(std::span<const double> a, std::span<const double> b, int dim,
                       std::span<double> table) {
    const std::size_t n = static_cast<std::size_t>(dim);
    const std::size_t ma = n == 0 ? 0 : a.size() / n;
    const std::size_t mb = n == 0 ? 0 : b.size() / n;
    for (std::size_t i = 0; i < ma; ++i) {
        for (std::size_t j = 0; j < mb; ++j) {
            double sum = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                const double d = a[i * n + c] - b[j * n + c];
                sum += d * d;
            }
            table[i * mb + j] = sum;
        }
    }
}

}  // namespace cbir::kernels::serial
