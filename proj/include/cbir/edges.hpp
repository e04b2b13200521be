#ifndef CBIR_EDGES_HPP
#define CBIR_EDGES_HPP

// Edge-structure category classifier: Sobel gradients, a 16-bin orientation
// histogram plus edge density, and a nearest-centroid rule over the result.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cbir/image.hpp"

namespace cbir {

inline constexpr int kOrientationBins = 16;
inline constexpr int kEdgeFeatureDim = kOrientationBins + 1;
inline constexpr double kDefaultEdgeThreshold = 32.0;
inline constexpr int kClassifySide = 256;

struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;    // >= 0
    std::vector<double> orientation;  // [0, pi)
};

struct EdgeSignature {
    std::array<double, kOrientationBins> orientation_hist{};
    double edge_density = 0.0;

    [[nodiscard]] std::array<double, kEdgeFeatureDim> as_vector() const noexcept;
    bool operator==(const EdgeSignature&) const = default;
};

struct CategoryModel {
    std::string category;
    std::array<double, kEdgeFeatureDim> centroid{};

    bool operator==(const CategoryModel&) const = default;
};

struct Classification {
    std::string category;
    double margin = 0.0;  // second-nearest minus nearest distance
};

// GRAY8, both sides >= 3, else ImageTooSmall.
[[nodiscard]] EdgeMap sobel_edges(const RasterImage& gray);

[[nodiscard]] EdgeSignature edge_signature(const EdgeMap& edges, double mag_threshold = kDefaultEdgeThreshold);

// Any image -> grayscale at kClassifySide x kClassifySide -> Sobel -> signature.
[[nodiscard]] EdgeSignature image_edge_signature(const RasterImage& img,
                                                 double mag_threshold = kDefaultEdgeThreshold);

struct LabeledSignature {
    std::string category;
    EdgeSignature signature;
};

// One model per distinct category, sorted by label.
[[nodiscard]] std::vector<CategoryModel> train_centroids(std::span<const LabeledSignature> labeled);

// Nearest centroid by Euclidean distance; equal distances go to the
// lexicographically smaller label. With a single model the margin is 0.
[[nodiscard]] Classification classify(const EdgeSignature& sig, std::span<const CategoryModel> models);

}  // namespace cbir

#endif  // CBIR_EDGES_HPP
