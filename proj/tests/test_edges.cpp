#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "cbir/edges.hpp"
#include "cbir/error.hpp"
#include "cbir/synth.hpp"

using namespace cbir;

namespace {

EdgeSignature sig_from(std::array<double, kOrientationBins> h, double density) {
    EdgeSignature s;
    s.orientation_hist = h;
    s.edge_density = density;
    return s;
}

double euclid(const std::array<double, kEdgeFeatureDim>& a, const std::array<double, kEdgeFeatureDim>& b) {
    double s = 0;
    for (int i = 0; i < kEdgeFeatureDim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("sobel on constant and tiny images") {
    const auto flat = RasterImage::filled(10, 8, PixelFormat::GRAY8, 90);
    const auto e = sobel_edges(flat);
    CHECK(e.width == 10);
    CHECK(e.height == 8);
    for (double m : e.magnitude) CHECK(m == 0.0);
    try {
        (void)sobel_edges(RasterImage::filled(2, 2, PixelFormat::GRAY8, 0));
        FAIL("expected ImageTooSmall");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::ImageTooSmall);
    }
}

TEST_CASE("sobel on a vertical step") {
    const int w = 20, h = 10;
    const auto img = synth::vertical_step(w, h);
    const auto e = sobel_edges(img);
    // Columns w/2-1 and w/2 straddle the step: |gx| = 4 * 255.
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = e.magnitude[y * w + x];
            if (x == w / 2 - 1 || x == w / 2) {
                CHECK(m == doctest::Approx(1020.0));
                CHECK(e.orientation[y * w + x] == doctest::Approx(0.0));
            } else {
                CHECK(m == 0.0);
            }
        }
    }
    for (int x = 0; x < w; ++x) {
        CHECK(e.magnitude[x] == 0.0);
        CHECK(e.magnitude[(h - 1) * w + x] == 0.0);
    }
    // Edge pixels: 2 columns x (h - 2) interior rows.
    const auto s = edge_signature(e, 32.0);
    CHECK(s.edge_density == doctest::Approx(2.0 * (h - 2) / (w * h)));
    CHECK(s.orientation_hist[0] == doctest::Approx(1.0));
}

TEST_CASE("sobel magnitude ignores a brightness offset") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = synth::random_gray(19, 14, rng, 0, 200);
        std::vector<std::uint8_t> shifted(a.pixels().begin(), a.pixels().end());
        for (auto& v : shifted) v = static_cast<std::uint8_t>(v + 55);
        const auto ea = sobel_edges(a);
        const auto eb = sobel_edges(RasterImage(19, 14, PixelFormat::GRAY8, shifted));
        CHECK(ea.magnitude == eb.magnitude);
        for (std::size_t i = 0; i < ea.orientation.size(); ++i) {
            CHECK(ea.orientation[i] >= 0.0);
            CHECK(ea.orientation[i] < M_PI);
        }
    }
}

TEST_CASE("edge_signature basics") {
    EdgeMap zero{4, 4, std::vector<double>(16, 0.0), std::vector<double>(16, 0.0)};
    const auto s0 = edge_signature(zero, 32.0);
    CHECK(s0.edge_density == 0.0);
    for (double v : s0.orientation_hist) CHECK(v == 0.0);

    EdgeMap all{4, 4, std::vector<double>(16, 10.0), std::vector<double>(16, 0.0)};
    const auto s1 = edge_signature(all, 5.0);
    CHECK(s1.edge_density == 1.0);
    CHECK(s1.orientation_hist[0] == 1.0);
    for (int i = 1; i < kOrientationBins; ++i) CHECK(s1.orientation_hist[i] == 0.0);
}

TEST_CASE("edge_signature histogram sums to one") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = image_edge_signature(synth::random_gray(30, 30, rng));
        if (s.edge_density > 0) {
            const double sum = std::accumulate(s.orientation_hist.begin(), s.orientation_hist.end(), 0.0);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("train_centroids") {
    std::array<double, kOrientationBins> h{};
    h[2] = 1.0;
    const auto s = sig_from(h, 0.3);
    std::vector<LabeledSignature> dup{{"face", s}, {"face", s}, {"vehicle", EdgeSignature{}}};
    const auto models = train_centroids(dup);
    REQUIRE(models.size() == 2);
    CHECK(models[0].category == "face");
    CHECK(models[0].centroid == s.as_vector());

    std::array<double, kOrientationBins> h2{};
    h2[5] = 1.0;
    const auto s2 = sig_from(h2, 0.7);
    std::vector<LabeledSignature> pair{{"b", s}, {"b", s2}, {"a", EdgeSignature{}}};
    const auto m2 = train_centroids(pair);
    REQUIRE(m2.size() == 2);
    CHECK(m2[1].category == "b");
    for (int i = 0; i < kEdgeFeatureDim; ++i) {
        CHECK(m2[1].centroid[i] == doctest::Approx((s.as_vector()[i] + s2.as_vector()[i]) / 2));
    }

    std::vector<LabeledSignature> single{{"face", s}, {"face", s2}};
    CHECK_THROWS_WITH_AS((void)train_centroids(single), doctest::Contains("TooFewCategories"), Error);
    CHECK_THROWS_WITH_AS((void)train_centroids({}), doctest::Contains("EmptyInput"), Error);
}

TEST_CASE("classify") {
    std::array<double, kOrientationBins> h{};
    h[0] = 1.0;
    CategoryModel a{"alpha", sig_from(h, 0.2).as_vector()};
    h[0] = 0.0;
    h[8] = 1.0;
    CategoryModel b{"beta", sig_from(h, 0.2).as_vector()};
    std::vector<CategoryModel> models{b, a};

    std::array<double, kOrientationBins> q{};
    q[0] = 1.0;
    const auto exact = classify(sig_from(q, 0.2), models);
    CHECK(exact.category == "alpha");
    CHECK(exact.margin > 0.0);

    q[0] = 0.5;
    q[8] = 0.5;
    const auto tie = classify(sig_from(q, 0.2), models);
    CHECK(tie.category == "alpha");
    CHECK(tie.margin == 0.0);

    CHECK_THROWS_WITH_AS((void)classify(sig_from(q, 0.2), {}), doctest::Contains("NoModels"), Error);
}

TEST_CASE("classify agrees with brute-force enumeration and ignores model order") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<CategoryModel> models;
        for (const char* label : {"c", "a", "b"}) {
            CategoryModel m{label, {}};
            for (auto& v : m.centroid) v = u(rng);
            models.push_back(m);
        }
        EdgeSignature s;
        for (auto& v : s.orientation_hist) v = u(rng);
        s.edge_density = u(rng);
        std::string best;
        double bd = 1e300;
        for (const auto& m : models) {
            const double d = euclid(m.centroid, s.as_vector());
            if (d < bd || (d == bd && m.category < best)) {
                bd = d;
                best = m.category;
            }
        }
        const auto r = classify(s, models);
        CHECK(r.category == best);
        std::reverse(models.begin(), models.end());
        CHECK(classify(s, models).category == best);
        std::rotate(models.begin(), models.begin() + 1, models.end());
        CHECK(classify(s, models).category == best);
    }
}
