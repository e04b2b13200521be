#include "cbir/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "cbir/error.hpp"
#include "cbir/kernels.hpp"

namespace cbir {

namespace {

int bin_of(double unit_value, int bins) noexcept {
    const int i = static_cast<int>(std::floor(unit_value * bins));
    return std::clamp(i, 0, bins - 1);
}

}  // namespace

int quantize_hsv(const HsvPixel& px, const HsvQuantization& q) noexcept {
    const int ih = bin_of(px.h / 360.0, q.bins_h);
    const int is = bin_of(px.s, q.bins_s);
    const int iv = bin_of(px.v, q.bins_v);
    return ih * q.bins_s * q.bins_v + is * q.bins_v + iv;
}

ColorHistogram compute_histogram(const RasterImage& img, const HsvQuantization& q) {
    if (!q.valid()) throw Error(ErrorCode::InvalidArgument, "quantization needs every bin count >= 1 and L >= 2");
    if (img.format() != PixelFormat::RGB8) throw Error(ErrorCode::InvalidArgument, "color histogram needs an RGB8 image");

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(q.total()));
    kernels::omp::hsv_bin_counts(img.pixels(), q, counts);

    ColorHistogram hist;
    hist.n = img.pixel_count();
    hist.values.resize(counts.size());
    const double n = static_cast<double>(hist.n);
    for (std::size_t k = 0; k < counts.size(); ++k) hist.values[k] = static_cast<double>(counts[k]) / n;
    return hist;
}

double hist_distance(const ColorHistogram& a, const ColorHistogram& b, HistMetric metric) {
    if (a.values.size() != b.values.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(a.values.size()) + " vs " +
                                                   std::to_string(b.values.size()) + " bins");
    }
    double acc = 0.0;
    if (metric == HistMetric::L1) {
        for (std::size_t k = 0; k < a.values.size(); ++k) acc += std::fabs(a.values[k] - b.values[k]);
        return acc;
    }
    // The rounded sum of a normalized histogram need not be exactly 1.
    if (a.values == b.values) return 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) acc += std::min(a.values[k], b.values[k]);
    return std::clamp(1.0 - acc, 0.0, 1.0);
}

}  // namespace cbir
