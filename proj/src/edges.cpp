#include "cbir/edges.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "cbir/error.hpp"
#include "cbir/kernels.hpp"

namespace cbir {

std::array<double, kEdgeFeatureDim> EdgeSignature::as_vector() const noexcept {
    std::array<double, kEdgeFeatureDim> v{};
    std::copy(orientation_hist.begin(), orientation_hist.end(), v.begin());
    v[kOrientationBins] = edge_density;
    return v;
}

EdgeMap sobel_edges(const RasterImage& gray) {
    if (gray.format() != PixelFormat::GRAY8) throw Error(ErrorCode::InvalidArgument, "sobel_edges needs GRAY8");
    if (gray.width() < 3 || gray.height() < 3) {
        throw Error(ErrorCode::ImageTooSmall, "sobel needs at least 3x3, got " + std::to_string(gray.width()) +
                                                  "x" + std::to_string(gray.height()));
    }
    const kernels::Extent size{gray.width(), gray.height()};
    std::vector<double> gx(size.area()), gy(size.area());
    kernels::omp::sobel(gray.pixels(), size, gx, gy);

    EdgeMap edges;
    edges.width = size.width;
    edges.height = size.height;
    edges.magnitude.resize(size.area());
    edges.orientation.resize(size.area());
    kernels::omp::gradient_polar(gx, gy, edges.magnitude, edges.orientation);
    return edges;
}

EdgeSignature edge_signature(const EdgeMap& edges, double mag_threshold) {
    if (!(mag_threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "edge threshold must be > 0");
    EdgeSignature sig;
    std::array<std::size_t, kOrientationBins> counts{};
    std::size_t edge_pixels = 0;
    for (std::size_t i = 0; i < edges.magnitude.size(); ++i) {
        if (edges.magnitude[i] < mag_threshold) continue;
        const int bin = static_cast<int>(edges.orientation[i] / std::numbers::pi * kOrientationBins);
        ++counts[std::clamp(bin, 0, kOrientationBins - 1)];
        ++edge_pixels;
    }
    const std::size_t area = static_cast<std::size_t>(edges.width) * edges.height;
    if (edge_pixels == 0 || area == 0) return sig;
    for (int b = 0; b < kOrientationBins; ++b) {
        sig.orientation_hist[b] = static_cast<double>(counts[b]) / static_cast<double>(edge_pixels);
    }
    sig.edge_density = static_cast<double>(edge_pixels) / static_cast<double>(area);
    return sig;
}

EdgeSignature image_edge_signature(const RasterImage& img, double mag_threshold) {
    const RasterImage gray = resize_bilinear(to_grayscale(img), kClassifySide, kClassifySide);
    return edge_signature(sobel_edges(gray), mag_threshold);
}

std::vector<CategoryModel> train_centroids(std::span<const LabeledSignature> labeled) {
    if (labeled.empty()) throw Error(ErrorCode::EmptyInput, "no training signatures");

    struct Accumulator {
        std::array<double, kEdgeFeatureDim> sum{};
        std::size_t count = 0;
    };
    std::map<std::string, Accumulator> groups;
    for (const auto& item : labeled) {
        auto& acc = groups[item.category];
        const auto v = item.signature.as_vector();
        for (int d = 0; d < kEdgeFeatureDim; ++d) acc.sum[d] += v[d];
        ++acc.count;
    }
    if (groups.size() < 2) {
        throw Error(ErrorCode::TooFewCategories,
                    "need at least 2 categories, got " + std::to_string(groups.size()));
    }

    std::vector<CategoryModel> models;
    models.reserve(groups.size());
    for (const auto& [label, acc] : groups) {
        CategoryModel m;
        m.category = label;
        for (int d = 0; d < kEdgeFeatureDim; ++d) m.centroid[d] = acc.sum[d] / static_cast<double>(acc.count);
        models.push_back(std::move(m));
    }
    return models;
}

Classification classify(const EdgeSignature& sig, std::span<const CategoryModel> models) {
    if (models.empty()) throw Error(ErrorCode::NoModels, "classifier has no category models");
    const auto v = sig.as_vector();

    std::vector<std::pair<double, const std::string*>> scored;
    scored.reserve(models.size());
    for (const auto& m : models) {
        double sq = 0.0;
        for (int d = 0; d < kEdgeFeatureDim; ++d) {
            const double diff = v[d] - m.centroid[d];
            sq += diff * diff;
        }
        scored.emplace_back(std::sqrt(sq), &m.category);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return *a.second < *b.second;
    });

    Classification out;
    out.category = *scored[0].second;
    out.margin = scored.size() > 1 ? scored[1].first - scored[0].first : 0.0;
    return out;
}

}  // namespace cbir
