#include "cbir/matchpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbir/error.hpp"
#include "cbir/kernels.hpp"

namespace cbir {

namespace {

std::vector<double> gaussian_kernel(int window, double sigma) {
    std::vector<double> w(static_cast<std::size_t>(window));
    const int r = window / 2;
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        w[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += w[static_cast<std::size_t>(i + r)];
    }
    for (double& v : w) v /= sum;
    return w;
}

void validate(const RasterImage& gray, const HarrisParams& p) {
    if (gray.format() != PixelFormat::GRAY8) throw Error(ErrorCode::InvalidArgument, "harris needs GRAY8");
    if (p.window < 1 || p.window % 2 == 0) throw Error(ErrorCode::InvalidArgument, "harris window must be odd");
    if (!(p.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "harris sigma must be > 0");
    if (p.nms_radius < 0) throw Error(ErrorCode::InvalidArgument, "nms radius must be >= 0");
    if (gray.width() < p.window + 2 || gray.height() < p.window + 2) {
        throw Error(ErrorCode::ImageTooSmall, std::to_string(gray.width()) + "x" + std::to_string(gray.height()) +
                                                  " is smaller than window + 2");
    }
}

struct NearestPair {
    std::size_t index = 0;
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
};

// Nearest and second-nearest along one row (or column) of the distance table.
template <typename At>
NearestPair scan_nearest(std::size_t count, At at) {
    NearestPair np;
    for (std::size_t j = 0; j < count; ++j) {
        const double d = at(j);
        if (d < np.best) {
            np.second = np.best;
            np.best = d;
            np.index = j;
        } else if (d < np.second) {
            np.second = d;
        }
    }
    return np;
}

bool passes_ratio(const NearestPair& np, std::size_t candidates, double ratio) {
    if (candidates == 1) return np.best <= 0.5;
    return np.best <= ratio * ratio * np.second;
}

}  // namespace

std::vector<double> harris_response_map(const RasterImage& gray, const HarrisParams& params) {
    validate(gray, params);
    const kernels::Extent size{gray.width(), gray.height()};
    std::vector<double> gx(size.area()), gy(size.area()), response(size.area());
    kernels::omp::sobel(gray.pixels(), size, gx, gy);
    const auto kernel = gaussian_kernel(params.window, params.sigma);
    kernels::omp::harris_response(gx, gy, size, kernel, params.k, response);
    return response;
}

std::vector<Corner> harris_corners(const RasterImage& gray, const HarrisParams& params) {
    const std::vector<double> r = harris_response_map(gray, params);
    const int w = gray.width();
    const int h = gray.height();

    const double peak = *std::max_element(r.begin(), r.end());
    if (!(peak > 0.0)) return {};
    const double threshold = params.rel_threshold * peak;

    std::vector<Corner> corners;
    const int rad = params.nms_radius;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double v = r[i];
            if (v < threshold || v <= 0.0) continue;
            bool is_max = true;
            // A neighbour wins if it is larger, or equal and earlier in raster order.
            for (int dy = -rad; dy <= rad && is_max; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -rad; dx <= rad; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w || (dx == 0 && dy == 0)) continue;
                    const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
                    if (r[j] > v || (r[j] == v && j < i)) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) corners.push_back({x, y, v});
        }
    }
    std::stable_sort(corners.begin(), corners.end(),
                     [](const Corner& a, const Corner& b) { return a.response > b.response; });
    return corners;
}

FeatureSet extract_descriptors(const RasterImage& gray, std::span<const Corner> corners, int patch) {
    if (patch < 1 || patch % 2 == 0) throw Error(ErrorCode::EvenPatch, "patch size " + std::to_string(patch));
    if (gray.format() != PixelFormat::GRAY8) throw Error(ErrorCode::InvalidArgument, "descriptors need GRAY8");

    const int half = patch / 2;
    const std::size_t n = static_cast<std::size_t>(patch) * patch;
    FeatureSet fs;
    fs.dim = static_cast<int>(n);
    std::vector<double> buf(n);
    for (const Corner& c : corners) {
        if (c.x - half < 0 || c.y - half < 0 || c.x + half >= gray.width() || c.y + half >= gray.height()) continue;
        double mean = 0.0;
        std::size_t k = 0;
        for (int dy = -half; dy <= half; ++dy)
            for (int dx = -half; dx <= half; ++dx) {
                buf[k] = gray.at(c.x + dx, c.y + dy);
                mean += buf[k++];
            }
        mean /= static_cast<double>(n);
        double norm = 0.0;
        for (double& v : buf) {
            v -= mean;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-9) continue;
        for (double v : buf) fs.descriptors.push_back(v / norm);
        fs.points.push_back(c);
    }
    return fs;
}

MatchList match_features(const FeatureSet& a, const FeatureSet& b, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::InvalidArgument, "ratio must lie in (0, 1)");
    if (a.dim != b.dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "descriptor length " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
    }
    const std::size_t ma = a.size();
    const std::size_t mb = b.size();
    MatchList out;
    if (ma == 0 || mb == 0) return out;

    std::vector<double> table(ma * mb);
    kernels::omp::sq_distance_table(a.descriptors, b.descriptors, a.dim, table);

    // Best match of every b row back into a, under the same ratio rule.
    std::vector<std::size_t> back(mb);
    std::vector<char> back_ok(mb);
    for (std::size_t j = 0; j < mb; ++j) {
        const NearestPair np = scan_nearest(ma, [&](std::size_t i) { return table[i * mb + j]; });
        back[j] = np.index;
        back_ok[j] = passes_ratio(np, ma, ratio);
    }
    for (std::size_t i = 0; i < ma; ++i) {
        const NearestPair np = scan_nearest(mb, [&](std::size_t j) { return table[i * mb + j]; });
        if (!passes_ratio(np, mb, ratio)) continue;
        if (back_ok[np.index] && back[np.index] == i) out.emplace_back(i, np.index);
    }
    return out;
}

MatchScore match_score(const FeatureSet& a, const FeatureSet& b, double ratio) {
    MatchScore s;
    s.matches = match_features(a, b, ratio).size();
    s.distance = 1.0 / (1.0 + static_cast<double>(s.matches));
    return s;
}

FeatureSet image_features(const RasterImage& img, const HarrisParams& params, int patch, int max_dim) {
    const RasterImage gray = resize_max_dim(to_grayscale(img), max_dim);
    if (gray.width() < params.window + 2 || gray.height() < params.window + 2) {
        FeatureSet empty;
        empty.dim = patch * patch;
        return empty;
    }
    return extract_descriptors(gray, harris_corners(gray, params), patch);
}

}  // namespace cbir
