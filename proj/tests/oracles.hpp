#ifndef CBIR_TESTS_ORACLES_HPP
#define CBIR_TESTS_ORACLES_HPP

// Independent reference computations used to check the library. Nothing
// here calls into the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

// HSV bin of one RGB pixel using exact integer arithmetic on the hexcone
// formulas. Bin edges are compared as rationals, so no rounding is involved.
inline int hsv_bin(int r, int g, int b, int bh, int bs, int bv) {
    const int mx = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    const int d = mx - mn;
    const int iv = std::min(bv - 1, mx * bv / 255);
    const int is = mx == 0 ? 0 : std::min(bs - 1, d * bs / mx);
    int ih = 0;
    if (d > 0) {
        // hue / 60 = num / d with num in [0, 6d)
        long num;
        if (mx == r) {
            num = g - b;
            if (num < 0) num += 6L * d;
        } else if (mx == g) {
            num = (b - r) + 2L * d;
        } else {
            num = (r - g) + 4L * d;
        }
        ih = static_cast<int>(std::min<long>(bh - 1, num * bh / (6L * d)));
    }
    return ih * bs * bv + is * bv + iv;
}

inline std::vector<std::uint64_t> hsv_counts(const std::vector<std::uint8_t>& rgb, int bh, int bs, int bv) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bh * bs * bv), 0);
    for (std::size_t i = 0; i + 2 < rgb.size(); i += 3) ++counts[hsv_bin(rgb[i], rgb[i + 1], rgb[i + 2], bh, bs, bv)];
    return counts;
}

// Real roots of x^3 + a x^2 + b x + c with three real roots, descending.
inline std::vector<double> cubic_roots(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    std::vector<double> roots;
    if (std::abs(p) < 1e-300) {
        const double t = std::cbrt(-q);
        roots = {t, t, t};
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0));
    }
    for (auto& r : roots) r -= a / 3.0;
    std::sort(roots.rbegin(), roots.rend());
    return roots;
}

// Eigenvalues of a symmetric 3x3 via its characteristic polynomial det(A - lambda I) = 0.
inline std::vector<double> sym3_eigenvalues(const double m[3][3]) {
    const double tr = m[0][0] + m[1][1] + m[2][2];
    const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                          m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // lambda^3 - tr lambda^2 + minors lambda - det
    return cubic_roots(-tr, minors, -det);
}

inline std::pair<double, double> sym2_eigenvalues(double a, double b, double d) {
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    return {mean + rad, mean - rad};
}

// Exhaustive matcher: full distance table, ratio test in both directions,
// mutual nearest neighbours, ties to the smaller index.
inline std::vector<std::pair<std::size_t, std::size_t>> match(const std::vector<double>& a,
                                                              const std::vector<double>& b, int dim,
                                                              double ratio) {
    const std::size_t ma = a.size() / dim;
    const std::size_t mb = b.size() / dim;
    std::vector<std::vector<double>> t(ma, std::vector<double>(mb));
    for (std::size_t i = 0; i < ma; ++i)
        for (std::size_t j = 0; j < mb; ++j) {
            double s = 0;
            for (int k = 0; k < dim; ++k) {
                const double diff = a[i * dim + k] - b[j * dim + k];
                s += diff * diff;
            }
            t[i][j] = s;
        }
    auto best_of = [&](std::size_t n, auto dist, std::size_t& idx) {
        double d1 = std::numeric_limits<double>::infinity();
        double d2 = std::numeric_limits<double>::infinity();
        idx = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = dist(k);
            if (v < d1) {
                d2 = d1;
                d1 = v;
                idx = k;
            } else if (v < d2) {
                d2 = v;
            }
        }
        return n == 1 ? d1 <= 0.5 : d1 <= ratio * ratio * d2;
    };
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < ma; ++i) {
        std::size_t j = 0;
        if (mb == 0 || !best_of(mb, [&](std::size_t k) { return t[i][k]; }, j)) continue;
        std::size_t back = 0;
        if (!best_of(ma, [&](std::size_t k) { return t[k][j]; }, back)) continue;
        if (back == i) out.emplace_back(i, j);
    }
    return out;
}

}  // namespace oracle

#endif
