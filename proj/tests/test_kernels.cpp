#include <doctest.h>

#include <cmath>
#include <random>

#include "cbir/kernels.hpp"
#include "cbir/parallel.hpp"
#include "cbir/synth.hpp"

using namespace cbir;
namespace k = cbir::kernels;

namespace {

struct ThreadCap {
    explicit ThreadCap(int n) { set_thread_cap(n); }
    ~ThreadCap() { set_thread_cap(0); }
};

std::vector<double> random_doubles(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

}  // namespace

TEST_CASE("omp kernels agree with serial reference") {
    std::mt19937_64 rng(42);
    for (int threads : {1, 3, 4}) {
        ThreadCap cap(threads);
        CAPTURE(threads);
        const int w = 67, h = 45;
        const k::Extent e{w, h};
        const auto rgb_img = synth::random_rgb(w, h, rng);
        const auto rgb = rgb_img.pixels();

        std::vector<std::uint8_t> g1(e.area()), g2(e.area());
        k::serial::luma(rgb, g1);
        k::omp::luma(rgb, g2);
        CHECK(g1 == g2);

        const k::Extent out{31, 52};
        std::vector<std::uint8_t> r1(out.area() * 3), r2(out.area() * 3);
        k::serial::resize_bilinear(rgb, e, 3, r1, out);
        k::omp::resize_bilinear(rgb, e, 3, r2, out);
        CHECK(r1 == r2);

        HsvQuantization q;
        std::vector<std::uint64_t> c1(q.total()), c2(q.total());
        k::serial::hsv_bin_counts(rgb, q, c1);
        k::omp::hsv_bin_counts(rgb, q, c2);
        CHECK(c1 == c2);

        std::vector<double> gx1(e.area()), gy1(e.area()), gx2(e.area()), gy2(e.area());
        k::serial::sobel(g1, e, gx1, gy1);
        k::omp::sobel(g1, e, gx2, gy2);
        CHECK(gx1 == gx2);
        CHECK(gy1 == gy2);

        std::vector<double> m1(e.area()), o1(e.area()), m2(e.area()), o2(e.area());
        k::serial::gradient_polar(gx1, gy1, m1, o1);
        k::omp::gradient_polar(gx1, gy1, m2, o2);
        CHECK(m1 == m2);
        CHECK(o1 == o2);

        const int side = 23;
        const auto a = random_doubles(side * side, rng);
        std::vector<double> gram1(a.size()), gram2(a.size());
        k::serial::gram(a, side, gram1);
        k::omp::gram(a, side, gram2);
        CHECK(gram1 == gram2);

        const std::vector<double> kern{0.1, 0.2, 0.4, 0.2, 0.1};
        std::vector<double> h1(e.area()), h2(e.area());
        k::serial::harris_response(gx1, gy1, e, kern, 0.04, h1);
        k::omp::harris_response(gx1, gy1, e, kern, 0.04, h2);
        double scale = 0;
        for (double v : h1) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < h1.size(); ++i) CHECK(std::abs(h1[i] - h2[i]) <= 1e-9 * scale);

        const auto da = random_doubles(13 * 81, rng);
        const auto db = random_doubles(9 * 81, rng);
        std::vector<double> t1(13 * 9), t2(13 * 9);
        k::serial::sq_distance_table(da, db, 81, t1);
        k::omp::sq_distance_table(da, db, 81, t2);
        CHECK(t1 == t2);
    }
}

TEST_CASE("thread env parsing") {
    CHECK(parse_thread_env("0") == 0);
    CHECK(parse_thread_env("4") == 4);
    CHECK_FALSE(parse_thread_env("-1").has_value());
    CHECK_FALSE(parse_thread_env("two").has_value());
    CHECK_FALSE(parse_thread_env("").has_value());
}
