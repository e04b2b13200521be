#ifndef CBIR_KERNELS_HPP
#define CBIR_KERNELS_HPP

// Data-parallel inner loops. Every kernel exists twice with the same
// signature: `serial` is the plain reference loop nest kept for testing and
// benchmarking, `omp` is the OpenMP version the library actually calls.
// Per-element arithmetic in `omp` never depends on the thread count, so the
// library output is deterministic for any CBIR_THREADS setting.

#include <cstdint>
#include <span>

#include "cbir/histogram.hpp"

namespace cbir::kernels {

struct Extent {
    int width = 0;
    int height = 0;

    [[nodiscard]] std::size_t area() const noexcept {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
};

// luma:              gray[i] = round(.299 R + .587 G + .114 B)
// resize_bilinear:   pixel-centre mapping, clamped taps, rounded to bytes
// hsv_bin_counts:    counts[k] = number of pixels whose HSV bin is k
// sobel:             3x3 Sobel on the interior, 0 on the 1-pixel frame
// gradient_polar:    magnitude = hypot, orientation = atan2 folded into [0, pi)
// gram:              g = a^T a / side for a side x side row-major a
// harris_response:   structure tensor of (gx, gy) smoothed by the normalized
//                    odd-length kernel1d along both axes; R = det - k tr^2 where
//                    the whole window lies inside the image, 0 elsewhere
// sq_distance_table: table[i * mb + j] = |a_i - b_j|^2 over rows of length dim
namespace serial {

void luma(std::span<const std::uint8_t> rgb, std::span<std::uint8_t> gray);
void resize_bilinear(std::span<const std::uint8_t> src, Extent src_size, int channels,
                     std::span<std::uint8_t> dst, Extent dst_size);
void hsv_bin_counts(std::span<const std::uint8_t> rgb, const HsvQuantization& q,
                    std::span<std::uint64_t> counts);
void sobel(std::span<const std::uint8_t> gray, Extent size, std::span<double> gx,
           std::span<double> gy);
void gradient_polar(std::span<const double> gx, std::span<const double> gy,
                    std::span<double> magnitude, std::span<double> orientation);
void gram(std::span<const double> a, int side, std::span<double> g);
void harris_response(std::span<const double> gx, std::span<const double> gy, Extent size,
                     std::span<const double> kernel1d, double k, std::span<double> response);
void sq_distance_table(std::span<const double> a, std::span<const double> b, int dim,
                       std::span<double> table);

}  // namespace serial

namespace omp {

void luma(std::span<const std::uint8_t> rgb, std::span<std::uint8_t> gray);
void resize_bilinear(std::span<const std::uint8_t> src, Extent src_size, int channels,
                     std::span<std::uint8_t> dst, Extent dst_size);
void hsv_bin_counts(std::span<const std::uint8_t> rgb, const HsvQuantization& q,
                    std::span<std::uint64_t> counts);
void sobel(std::span<const std::uint8_t> gray, Extent size, std::span<double> gx,
           std::span<double> gy);
void gradient_polar(std::span<const double> gx, std::span<const double> gy,
                    std::span<double> magnitude, std::span<double> orientation);
void gram(std::span<const double> a, int side, std::span<double> g);
void harris_response(std::span<const double> gx, std::span<const double> gy, Extent size,
                     std::span<const double> kernel1d, double k, std::span<double> response);
void sq_distance_table(std::span<const double> a, std::span<const double> b, int dim,
                       std::span<double> table);

}  // namespace omp

}  // namespace cbir::kernels

#endif  // CBIR_KERNELS_HPP
