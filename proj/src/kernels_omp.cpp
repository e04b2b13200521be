#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cbir/kernels.hpp"

namespace cbir::kernels::omp {

namespace {

// Signed loop bounds keep OpenMP happy with older runtimes.
inline std::ptrdiff_t ssize(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

}  // namespace

void luma(std::span<const std::uint8_t> rgb, std::span<std::uint8_t> gray) {
    const std::ptrdiff_t n = ssize(gray.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
        gray[i] = static_cast<std::uint8_t>(y + 0.5);
    }
}

void resize_bilinear(std::span<const std::uint8_t> src, Extent src_size, int channels,
                     std::span<std::uint8_t> dst, Extent dst_size) {
    const double sx_scale = static_cast<double>(src_size.width) / dst_size.width;
    const double sy_scale = static_cast<double>(src_size.height) / dst_size.height;

    // Horizontal taps are shared by every row.
    std::vector<int> x0s(dst_size.width), x1s(dst_size.width);
    std::vector<double> fxs(dst_size.width);
    for (int x = 0; x < dst_size.width; ++x) {
        double sx = (x + 0.5) * sx_scale - 0.5;
        sx = std::clamp(sx, 0.0, static_cast<double>(src_size.width - 1));
        x0s[x] = static_cast<int>(sx);
        x1s[x] = std::min(x0s[x] + 1, src_size.width - 1);
        fxs[x] = sx - x0s[x];
    }

#pragma omp parallel for schedule(static)
    for (int y = 0; y < dst_size.height; ++y) {
        double sy = (y + 0.5) * sy_scale - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(src_size.height - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, src_size.height - 1);
        const double fy = sy - y0;
        const std::uint8_t* row0 = src.data() + static_cast<std::size_t>(y0) * src_size.width * channels;
        const std::uint8_t* row1 = src.data() + static_cast<std::size_t>(y1) * src_size.width * channels;
        std::uint8_t* out = dst.data() + static_cast<std::size_t>(y) * dst_size.width * channels;
        for (int x = 0; x < dst_size.width; ++x) {
            const int a = x0s[x] * channels;
            const int b = x1s[x] * channels;
            const double fx = fxs[x];
            for (int c = 0; c < channels; ++c) {
                const double top = (1.0 - fx) * row0[a + c] + fx * row0[b + c];
                const double bottom = (1.0 - fx) * row1[a + c] + fx * row1[b + c];
                const double v = (1.0 - fy) * top + fy * bottom;
                out[x * channels + c] = static_cast<std::uint8_t>(v + 0.5);
            }
        }
    }
}

void hsv_bin_counts(std::span<const std::uint8_t> rgb, const HsvQuantization& q,
                    std::span<std::uint64_t> counts) {
    std::fill(counts.begin(), counts.end(), 0);
    const std::ptrdiff_t n = ssize(rgb.size() / 3);
    const std::size_t bins = counts.size();
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            ++local[rgb_bin(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2], q)];
        }
#pragma omp critical(cbir_hsv_merge)
        for (std::size_t k = 0; k < bins; ++k) counts[k] += local[k];
    }
}

void sobel(std::span<const std::uint8_t> gray, Extent size, std::span<double> gx,
           std::span<double> gy) {
    const int w = size.width;
    const int h = size.height;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        double* ox = gx.data() + static_cast<std::size_t>(y) * w;
        double* oy = gy.data() + static_cast<std::size_t>(y) * w;
        if (y == 0 || y == h - 1) {
            std::fill(ox, ox + w, 0.0);
            std::fill(oy, oy + w, 0.0);
            continue;
        }
        const std::uint8_t* up = gray.data() + static_cast<std::size_t>(y - 1) * w;
        const std::uint8_t* mid = up + w;
        const std::uint8_t* down = mid + w;
        ox[0] = oy[0] = 0.0;
        ox[w - 1] = oy[w - 1] = 0.0;
        for (int x = 1; x < w - 1; ++x) {
            const int sx = (up[x + 1] + 2 * mid[x + 1] + down[x + 1]) -
                           (up[x - 1] + 2 * mid[x - 1] + down[x - 1]);
            const int sy = (down[x - 1] + 2 * down[x] + down[x + 1]) -
                           (up[x - 1] + 2 * up[x] + up[x + 1]);
            ox[x] = sx;
            oy[x] = sy;
        }
    }
}

void gradient_polar(std::span<const double> gx, std::span<const double> gy,
                    std::span<double> magnitude, std::span<double> orientation) {
    const std::ptrdiff_t n = ssize(gx.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        magnitude[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
        double theta = std::atan2(gy[i], gx[i]);
        if (theta < 0.0) theta += std::numbers::pi;
        if (theta >= std::numbers::pi) theta -= std::numbers::pi;
        orientation[i] = theta;
    }
}

void gram(std::span<const double> a, int side, std::span<double> g) {
    const std::size_t n = static_cast<std::size_t>(side);
    // Columns of a become contiguous rows of at.
    std::vector<double> at(n * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) at[i * n + k] = a[k * n + i];

#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < side; ++i) {
        const double* ci = at.data() + static_cast<std::size_t>(i) * n;
        for (std::size_t j = static_cast<std::size_t>(i); j < n; ++j) {
            const double* cj = at.data() + j * n;
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += ci[k] * cj[k];
            g[i * n + j] = sum / side;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) g[i * n + j] = g[j * n + i];
}

void harris_response(std::span<const double> gx, std::span<const double> gy, Extent size,
                     std::span<const double> kernel1d, double k, std::span<double> response) {
    const int w = size.width;
    const int h = size.height;
    const int r = static_cast<int>(kernel1d.size()) / 2;
    const std::size_t area = size.area();
    std::fill(response.begin(), response.end(), 0.0);
    if (w <= 2 * r || h <= 2 * r) return;

    // Horizontal pass of the separable smoothing, then vertical.
    std::vector<double> hxx(area, 0.0), hyy(area, 0.0), hxy(area, 0.0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = r; x < w - r; ++x) {
            double sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int d = -r; d <= r; ++d) {
                const std::size_t j = row + x + d;
                const double wt = kernel1d[d + r];
                sxx += wt * gx[j] * gx[j];
                syy += wt * gy[j] * gy[j];
                sxy += wt * gx[j] * gy[j];
            }
            hxx[row + x] = sxx;
            hyy[row + x] = syy;
            hxy[row + x] = sxy;
        }
    }
#pragma omp parallel for schedule(static)
    for (int y = r; y < h - r; ++y) {
        for (int x = r; x < w - r; ++x) {
            double sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int d = -r; d <= r; ++d) {
                const std::size_t j = static_cast<std::size_t>(y + d) * w + x;
                const double wt = kernel1d[d + r];
                sxx += wt * hxx[j];
                syy += wt * hyy[j];
                sxy += wt * hxy[j];
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
    const std::ptrdiff_t ma = n == 0 ? 0 : ssize(a.size() / n);
    const std::size_t mb = n == 0 ? 0 : b.size() / n;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < ma; ++i) {
        const double* ai = a.data() + i * n;
        for (std::size_t j = 0; j < mb; ++j) {
            const double* bj = b.data() + j * n;
            double sum = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                const double d = ai[c] - bj[c];
                sum += d * d;
            }
            table[i * mb + j] = sum;
        }
    }
}

}  // namespace cbir::kernels::omp
