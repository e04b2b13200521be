#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cbir/error.hpp"
#include "cbir/matchpoint.hpp"
#include "cbir/synth.hpp"
#include "oracles.hpp"

using namespace cbir;

namespace {

FeatureSet random_set(std::size_t m, std::mt19937_64& rng, int dim = 81) {
    std::normal_distribution<double> d;
    FeatureSet f;
    f.dim = dim;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> row(dim);
        double mean = 0;
        for (auto& v : row) mean += (v = d(rng));
        mean /= dim;
        double norm = 0;
        for (auto& v : row) {
            v -= mean;
            norm += v * v;
        }
        for (auto& v : row) f.descriptors.push_back(v / std::sqrt(norm));
        f.points.push_back({int(i), 0, 1.0});
    }
    return f;
}

RasterImage crop(const RasterImage& img, int x0, int y0, int w, int h) {
    std::vector<std::uint8_t> px;
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) px.push_back(img.at(x, y));
    return RasterImage(w, h, PixelFormat::GRAY8, px);
}

void check_injective(const MatchList& m) {
    std::set<std::size_t> left, right;
    for (auto [i, j] : m) {
        CHECK(left.insert(i).second);
        CHECK(right.insert(j).second);
    }
}

}  // namespace

TEST_CASE("harris on the white square") {
    const auto img = synth::white_square(128, 32);
    const auto corners = harris_corners(img);
    REQUIRE(corners.size() == 4);
    // The square spans pixels 48..79; its vertices sit at 47.5 and 79.5.
    const std::array<std::pair<double, double>, 4> vertices{{{47.5, 47.5}, {79.5, 47.5}, {47.5, 79.5}, {79.5, 79.5}}};
    for (const auto& [vx, vy] : vertices) {
        const bool near = std::any_of(corners.begin(), corners.end(), [&](const Corner& c) {
            return std::abs(c.x - vx) <= 2.0 && std::abs(c.y - vy) <= 2.0;
        });
        CHECK(near);
    }
    for (std::size_t i = 1; i < corners.size(); ++i) CHECK(corners[i - 1].response >= corners[i].response);
}

TEST_CASE("harris finds nothing on flat or single-edge images") {
    CHECK(harris_corners(RasterImage::filled(64, 64, PixelFormat::GRAY8, 128)).empty());
    CHECK(harris_corners(synth::vertical_step(64, 64)).empty());
    CHECK_THROWS_WITH_AS((void)harris_corners(RasterImage::filled(6, 20, PixelFormat::GRAY8, 0)),
                         doctest::Contains("ImageTooSmall"), Error);
}

TEST_CASE("harris ignores brightness offsets") {
    const auto scene = to_grayscale(synth::desk_scene("vehicle", 3));
    std::vector<std::uint8_t> dim(scene.pixels().begin(), scene.pixels().end());
    for (auto& v : dim) v = static_cast<std::uint8_t>(v * 3 / 4);
    const RasterImage base(scene.width(), scene.height(), PixelFormat::GRAY8, dim);
    std::vector<std::uint8_t> lifted(dim);
    for (auto& v : lifted) v = static_cast<std::uint8_t>(v + 40);
    const RasterImage shifted(scene.width(), scene.height(), PixelFormat::GRAY8, lifted);
    const auto a = harris_corners(base);
    const auto b = harris_corners(shifted);
    CHECK(a == b);
    CHECK(!a.empty());
}

TEST_CASE("corner count is monotone in the threshold") {
    for (const char* cat : {"animal", "flower"}) {
        const auto gray = to_grayscale(synth::desk_scene(cat, 1));
        std::size_t prev = SIZE_MAX;
        for (double t : {0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3, 0.9}) {
            HarrisParams p;
            p.rel_threshold = t;
            const auto n = harris_corners(gray, p).size();
            CHECK(n <= prev);
            prev = n;
        }
    }
}

TEST_CASE("extract_descriptors") {
    const auto img = to_grayscale(synth::desk_scene("face", 2));
    std::vector<Corner> corners{{0, 0, 1.0}, {3, 100, 1.0}, {128, 128, 1.0}, {60, 60, 1.0}};
    const auto flat = RasterImage::filled(32, 32, PixelFormat::GRAY8, 10);
    CHECK(extract_descriptors(flat, std::vector<Corner>{{16, 16, 1.0}}).size() == 0);

    const auto fs = extract_descriptors(img, corners);
    CHECK(fs.dim == 81);
    for (const auto& p : fs.points) CHECK_FALSE((p.x == 0 && p.y == 0));
    CHECK_FALSE(std::any_of(fs.points.begin(), fs.points.end(), [](const Corner& c) { return c.x == 3; }));

    const auto all = extract_descriptors(img, harris_corners(img));
    REQUIRE(all.size() > 0);
    for (std::size_t i = 0; i < all.size(); ++i) {
        double mean = 0, norm = 0;
        for (double v : all.row(i)) {
            mean += v;
            norm += v * v;
        }
        CHECK(std::abs(mean / all.dim) <= 1e-9);
        CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-9);
    }
    CHECK_THROWS_WITH_AS((void)extract_descriptors(img, corners, 8), doctest::Contains("EvenPatch"), Error);
}

TEST_CASE("match_features edge cases") {
    std::mt19937_64 rng(1);
    const auto a = random_set(12, rng);
    const auto self = match_features(a, a);
    REQUIRE(self.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(self[i] == std::pair<std::size_t, std::size_t>{i, i});

    FeatureSet empty;
    CHECK(match_features(a, empty).empty());
    CHECK(match_features(empty, a).empty());

    const auto other = random_set(3, rng, 25);
    CHECK_THROWS_WITH_AS((void)match_features(a, other), doctest::Contains("DimensionMismatch"), Error);
    CHECK_THROWS_AS((void)match_features(a, a, 1.0), Error);
}

TEST_CASE("match_features on hand-built descriptors") {
    FeatureSet a, b;
    a.dim = b.dim = 3;
    a.descriptors = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    b.descriptors = {0.9, 0.1, 0, 0, 0, 1, 0.5, 0.5, 0};
    a.points = {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}};
    b.points = a.points;
    // Squared distances (rows a, columns b):
    //   a0: .02  2    .5
    //   a1: 1.62 2    .5
    //   a2: 1.82 0    1.5
    // a1's nearest is b2, but b2 is equidistant from a0 and a1, so it fails the
    // reverse ratio test and the tie resolves to a0 anyway.
    const auto m = match_features(a, b);
    const auto ref = oracle::match(a.descriptors, b.descriptors, 3, 0.8);
    CHECK(m == ref);
    CHECK(m == MatchList{{0, 0}, {2, 1}});
}

TEST_CASE("match_features equals the exhaustive oracle") {
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<int> size(0, 20);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_set(size(rng), rng);
        auto b = random_set(size(rng), rng);
        // Plant near-duplicates so that matches actually occur.
        std::normal_distribution<double> noise(0.0, 0.05);
        for (std::size_t i = 0; i < std::min(a.size(), b.size()) / 2; ++i)
            for (int k = 0; k < 81; ++k) b.descriptors[i * 81 + k] = a.descriptors[(a.size() - 1 - i) * 81 + k] + noise(rng);
        for (double ratio : {0.6, 0.8, 0.95}) {
            const auto m = match_features(a, b, ratio);
            CHECK(m == oracle::match(a.descriptors, b.descriptors, 81, ratio));
            check_injective(m);
            auto back = match_features(b, a, ratio);
            for (auto& p : back) std::swap(p.first, p.second);
            std::sort(back.begin(), back.end());
            auto fwd = m;
            std::sort(fwd.begin(), fwd.end());
            CHECK(fwd == back);
        }
    }
}

TEST_CASE("match_score") {
    std::mt19937_64 rng(2);
    const auto a = random_set(7, rng);
    const auto s = match_score(a, a);
    CHECK(s.matches == 7);
    CHECK(s.distance == doctest::Approx(1.0 / 8.0));
    FeatureSet empty;
    CHECK(match_score(a, empty).matches == 0);
    CHECK(match_score(a, empty).distance == 1.0);
}

TEST_CASE("overlapping crops share most of their corners") {
    for (const auto& cat : synth::desk_categories()) {
        CAPTURE(cat);
        const auto gray = to_grayscale(synth::desk_scene(cat, 5));
        const auto left = crop(gray, 0, 0, 200, 200);
        const auto right = crop(gray, 24, 16, 200, 200);
        const auto fa = extract_descriptors(left, harris_corners(left));
        const auto fb = extract_descriptors(right, harris_corners(right));
        const auto s = match_score(fa, fb);
        CHECK(static_cast<double>(s.matches) >= 0.5 * static_cast<double>(std::min(fa.size(), fb.size())));
    }
}

TEST_CASE("image_features tolerates small inputs") {
    CHECK(image_features(RasterImage::filled(4, 4, PixelFormat::RGB8, 9)).size() == 0);
    const auto f = image_features(synth::desk_scene("animal", 0, 512));
    CHECK(f.size() > 0);
    for (const auto& p : f.points) {
        CHECK(p.x < 256);
        CHECK(p.y < 256);
    }
}
