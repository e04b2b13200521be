#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cbir/error.hpp"
#include "cbir/synth.hpp"

namespace cbir::synth {

namespace {

using Rgb = std::array<int, 3>;

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h * 3, 0) {}

    int width() const { return w_; }
    int height() const { return h_; }

    void set(int x, int y, const Rgb& c) {
        if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
        auto* p = &px_[(static_cast<std::size_t>(y) * w_ + x) * 3];
        for (int k = 0; k < 3; ++k) p[k] = static_cast<std::uint8_t>(std::clamp(c[k], 0, 255));
    }

    void vertical_gradient(const Rgb& top, const Rgb& bottom, int y0 = 0, int y1 = -1) {
        if (y1 < 0) y1 = h_;
        for (int y = y0; y < y1; ++y) {
            const double t = y1 - y0 > 1 ? double(y - y0) / (y1 - y0 - 1) : 0.0;
            Rgb c;
            for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(top[k] + t * (bottom[k] - top[k])));
            for (int x = 0; x < w_; ++x) set(x, y, c);
        }
    }

    void rect(double x0, double y0, double x1, double y1, const Rgb& c) {
        for (int y = std::max(0, int(std::ceil(y0))); y < std::min(h_, int(std::ceil(y1))); ++y)
            for (int x = std::max(0, int(std::ceil(x0))); x < std::min(w_, int(std::ceil(x1))); ++x) set(x, y, c);
    }

    // Ellipse with semi-axes (a, b) rotated by `angle` radians.
    void ellipse(double cx, double cy, double a, double b, double angle, const Rgb& c) {
        const double r = std::max(a, b);
        const double ca = std::cos(angle), sa = std::sin(angle);
        for (int y = std::max(0, int(cy - r) - 1); y <= std::min(h_ - 1, int(cy + r) + 1); ++y) {
            for (int x = std::max(0, int(cx - r) - 1); x <= std::min(w_ - 1, int(cx + r) + 1); ++x) {
                const double dx = x - cx, dy = y - cy;
                const double u = dx * ca + dy * sa;
                const double v = -dx * sa + dy * ca;
                if ((u * u) / (a * a) + (v * v) / (b * b) <= 1.0) set(x, y, c);
            }
        }
    }

    void disc(double cx, double cy, double r, const Rgb& c) { ellipse(cx, cy, r, r, 0.0, c); }

    void triangle(double x0, double y0, double x1, double y1, double x2, double y2, const Rgb& c) {
        const int minx = std::max(0, int(std::floor(std::min({x0, x1, x2}))));
        const int maxx = std::min(w_ - 1, int(std::ceil(std::max({x0, x1, x2}))));
        const int miny = std::max(0, int(std::floor(std::min({y0, y1, y2}))));
        const int maxy = std::min(h_ - 1, int(std::ceil(std::max({y0, y1, y2}))));
        auto edge = [](double ax, double ay, double bx, double by, double px, double py) {
            return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
        };
        for (int y = miny; y <= maxy; ++y) {
            for (int x = minx; x <= maxx; ++x) {
                const double e0 = edge(x0, y0, x1, y1, x, y);
                const double e1 = edge(x1, y1, x2, y2, x, y);
                const double e2 = edge(x2, y2, x0, y0, x, y);
                if ((e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0)) set(x, y, c);
            }
        }
    }

    void noise(std::mt19937_64& rng, int amplitude) {
        std::uniform_int_distribution<int> d(-amplitude, amplitude);
        for (auto& v : px_) v = static_cast<std::uint8_t>(std::clamp(int(v) + d(rng), 0, 255));
    }

    RasterImage finish() && { return RasterImage(w_, h_, PixelFormat::RGB8, std::move(px_)); }

private:
    int w_;
    int h_;
    std::vector<std::uint8_t> px_;
};

std::uint64_t seed_for(std::string_view category, int variant) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : category) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    return h ^ (static_cast<std::uint64_t>(variant) * 0x9e3779b97f4a7c15ull);
}

Rgb jitter(std::mt19937_64& rng, const Rgb& base, int amount) {
    std::uniform_int_distribution<int> d(-amount, amount);
    return {base[0] + d(rng), base[1] + d(rng), base[2] + d(rng)};
}

double uni(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void draw_flower(Canvas& cv, std::mt19937_64& rng) {
    const double s = cv.width() / 256.0;
    cv.vertical_gradient(jitter(rng, {70, 130, 60}, 20), jitter(rng, {30, 80, 30}, 15));
    // A few leaves.
    for (int i = 0; i < 3; ++i) {
        cv.ellipse(uni(rng, 20, 236) * s, uni(rng, 150, 240) * s, 40 * s, 12 * s, uni(rng, 0, std::numbers::pi),
                   jitter(rng, {40, 110, 40}, 15));
    }
    static const std::array<Rgb, 5> petal_colours{{{220, 40, 60}, {230, 120, 180}, {150, 60, 190}, {240, 210, 40}, {245, 245, 240}}};
    const int flowers = 1 + static_cast<int>(rng() % 2);
    for (int f = 0; f < flowers; ++f) {
        const double cx = (flowers == 1 ? 128 : 80 + 96 * f) * s + uni(rng, -15, 15) * s;
        const double cy = uni(rng, 95, 150) * s;
        const double radius = (flowers == 1 ? uni(rng, 60, 80) : uni(rng, 40, 55)) * s;
        const int petals = 5 + static_cast<int>(rng() % 4);
        const Rgb colour = jitter(rng, petal_colours[rng() % petal_colours.size()], 15);
        const double phase = uni(rng, 0, std::numbers::pi);
        for (int p = 0; p < petals; ++p) {
            const double a = phase + 2.0 * std::numbers::pi * p / petals;
            cv.ellipse(cx + std::cos(a) * radius * 0.55, cy + std::sin(a) * radius * 0.55, radius * 0.5, radius * 0.22, a,
                       colour);
        }
        cv.disc(cx, cy, radius * 0.25, jitter(rng, {200, 150, 30}, 20));
        cv.disc(cx, cy, radius * 0.12, jitter(rng, {110, 70, 20}, 15));
    }
}

void draw_face(Canvas& cv, std::mt19937_64& rng) {
    const double s = cv.width() / 256.0;
    cv.vertical_gradient(jitter(rng, {90, 110, 160}, 30), jitter(rng, {60, 70, 110}, 20));
    static const std::array<Rgb, 4> skins{{{235, 200, 170}, {210, 160, 120}, {170, 120, 85}, {120, 80, 55}}};
    static const std::array<Rgb, 4> hairs{{{30, 20, 15}, {90, 60, 30}, {200, 170, 90}, {130, 40, 20}}};
    const Rgb skin = jitter(rng, skins[rng() % skins.size()], 10);
    const Rgb hair = jitter(rng, hairs[rng() % hairs.size()], 10);
    const double cx = 128 * s + uni(rng, -10, 10) * s;
    const double cy = 135 * s + uni(rng, -8, 8) * s;
    const double fw = uni(rng, 62, 75) * s;
    const double fh = uni(rng, 85, 100) * s;
    cv.rect(cx - fw * 0.9, cy + fh * 0.7, cx + fw * 0.9, 256 * s, jitter(rng, {60, 60, 70}, 40));
    cv.ellipse(cx, cy - fh * 0.25, fw * 1.08, fh * 0.85, 0.0, hair);
    cv.ellipse(cx, cy, fw, fh, 0.0, skin);
    const double ey = cy - fh * 0.2;
    const double ex = fw * 0.42;
    for (int side : {-1, 1}) {
        cv.ellipse(cx + side * ex, ey, fw * 0.2, fh * 0.08, 0.0, {245, 245, 245});
        cv.disc(cx + side * ex, ey, fh * 0.065, jitter(rng, {60, 90, 60}, 40));
        cv.disc(cx + side * ex, ey, fh * 0.03, {15, 15, 15});
        cv.rect(cx + side * ex - fw * 0.2, ey - fh * 0.2, cx + side * ex + fw * 0.2, ey - fh * 0.15, hair);
    }
    cv.triangle(cx, cy - fh * 0.05, cx - fw * 0.12, cy + fh * 0.22, cx + fw * 0.12, cy + fh * 0.22,
                {skin[0] - 35, skin[1] - 35, skin[2] - 35});
    cv.ellipse(cx, cy + fh * 0.5, fw * 0.35, fh * 0.08, 0.0, jitter(rng, {170, 50, 60}, 20));
}

void draw_vehicle(Canvas& cv, std::mt19937_64& rng) {
    const double s = cv.width() / 256.0;
    const int horizon = static_cast<int>(uni(rng, 140, 165) * s);
    cv.vertical_gradient(jitter(rng, {120, 170, 230}, 20), jitter(rng, {200, 220, 240}, 10), 0, horizon);
    cv.vertical_gradient(jitter(rng, {90, 90, 95}, 10), jitter(rng, {60, 60, 65}, 10), horizon, cv.height());
    for (double x = uni(rng, 0, 30) * s; x < cv.width(); x += 48 * s) {
        cv.rect(x, 225 * s, x + 24 * s, 231 * s, {235, 235, 225});
    }
    static const std::array<Rgb, 5> paints{{{200, 30, 30}, {30, 60, 180}, {230, 230, 230}, {30, 30, 30}, {240, 190, 20}}};
    const Rgb paint = jitter(rng, paints[rng() % paints.size()], 12);
    const double x0 = uni(rng, 18, 40) * s;
    const double x1 = 256 * s - uni(rng, 18, 40) * s;
    const double body_top = horizon - uni(rng, 10, 25) * s;
    const double body_bottom = horizon + uni(rng, 35, 50) * s;
    cv.rect(x0, body_top, x1, body_bottom, paint);
    const double cab0 = x0 + (x1 - x0) * uni(rng, 0.2, 0.3);
    const double cab1 = x1 - (x1 - x0) * uni(rng, 0.15, 0.25);
    const double cab_top = body_top - uni(rng, 35, 50) * s;
    cv.rect(cab0, cab_top, cab1, body_top + 1, paint);
    const double mid = (cab0 + cab1) / 2;
    const Rgb glass{150, 200, 225};
    cv.rect(cab0 + 6 * s, cab_top + 6 * s, mid - 3 * s, body_top - 2 * s, glass);
    cv.rect(mid + 3 * s, cab_top + 6 * s, cab1 - 6 * s, body_top - 2 * s, glass);
    cv.rect(x1 - 10 * s, body_top + 6 * s, x1, body_top + 16 * s, {250, 240, 170});
    const double wheel_r = uni(rng, 20, 26) * s;
    for (double wx : {x0 + (x1 - x0) * 0.2, x1 - (x1 - x0) * 0.2}) {
        cv.disc(wx, body_bottom, wheel_r, {20, 20, 20});
        cv.disc(wx, body_bottom, wheel_r * 0.45, {170, 170, 175});
    }
}

void draw_animal(Canvas& cv, std::mt19937_64& rng) {
    const double s = cv.width() / 256.0;
    cv.vertical_gradient(jitter(rng, {180, 200, 225}, 15), jitter(rng, {210, 215, 200}, 10), 0, static_cast<int>(110 * s));
    cv.vertical_gradient(jitter(rng, {190, 170, 90}, 20), jitter(rng, {150, 130, 60}, 20), static_cast<int>(110 * s),
                         cv.height());
    static const std::array<Rgb, 4> furs{{{215, 140, 50}, {235, 235, 230}, {200, 170, 110}, {120, 80, 45}}};
    const int kind = static_cast<int>(rng() % furs.size());
    const Rgb fur = jitter(rng, furs[kind], 10);
    const Rgb mark = kind == 1 ? Rgb{20, 20, 20} : Rgb{45, 30, 20};
    const double cx = 120 * s + uni(rng, -12, 12) * s;
    const double cy = 140 * s + uni(rng, -8, 8) * s;
    const double bw = uni(rng, 62, 75) * s;
    const double bh = uni(rng, 30, 38) * s;
    const double dir = rng() % 2 ? 1.0 : -1.0;
    for (int leg = 0; leg < 4; ++leg) {
        const double lx = cx + (-0.75 + 0.5 * leg) * bw;
        cv.rect(lx - 6 * s, cy, lx + 6 * s, cy + bh + uni(rng, 40, 52) * s, fur);
    }
    cv.ellipse(cx, cy, bw, bh, 0.0, fur);
    cv.ellipse(cx - dir * bw * 1.05, cy - bh * 0.6, bw * 0.3, 5 * s, dir * 0.6, fur);
    // Markings: stripes or spots depending on the coat.
    if (kind == 0 || kind == 1) {
        for (double x = cx - bw * 0.85; x < cx + bw * 0.8; x += uni(rng, 11, 15) * s) {
            cv.ellipse(x, cy, 3.5 * s, bh * 0.9, uni(rng, -0.25, 0.25), mark);
        }
        cv.ellipse(cx, cy - bh * 0.92, bw * 0.95, bh * 0.1, 0.0, fur);
    } else {
        for (int i = 0; i < 14; ++i) {
            cv.disc(cx + uni(rng, -0.8, 0.8) * bw, cy + uni(rng, -0.6, 0.6) * bh, uni(rng, 3, 6) * s, mark);
        }
    }
    const double hx = cx + dir * bw * 1.05;
    const double hy = cy - bh * 0.9;
    cv.ellipse(hx - dir * 12 * s, hy + 10 * s, 14 * s, 10 * s, -dir * 0.7, fur);
    cv.disc(hx, hy, 26 * s, fur);
    cv.triangle(hx - 22 * s, hy - 12 * s, hx - 12 * s, hy - 40 * s, hx - 2 * s, hy - 20 * s, fur);
    cv.triangle(hx + 22 * s, hy - 12 * s, hx + 12 * s, hy - 40 * s, hx + 2 * s, hy - 20 * s, fur);
    cv.disc(hx - 9 * s, hy - 5 * s, 3.5 * s, {15, 15, 15});
    cv.disc(hx + 9 * s, hy - 5 * s, 3.5 * s, {15, 15, 15});
    cv.ellipse(hx + dir * 4 * s, hy + 10 * s, 7 * s, 5 * s, 0.0, {40, 25, 20});
}

}  // namespace

RasterImage random_rgb(int width, int height, std::mt19937_64& rng) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height * 3);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& v : px) v = static_cast<std::uint8_t>(d(rng));
    return RasterImage(width, height, PixelFormat::RGB8, std::move(px));
}

RasterImage random_gray(int width, int height, std::mt19937_64& rng, int lo, int hi) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
    std::uniform_int_distribution<int> d(lo, hi);
    for (auto& v : px) v = static_cast<std::uint8_t>(d(rng));
    return RasterImage(width, height, PixelFormat::GRAY8, std::move(px));
}

RasterImage white_square(int side, int square) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(side) * side, 0);
    const int x0 = (side - square) / 2;
    for (int y = x0; y < x0 + square; ++y)
        for (int x = x0; x < x0 + square; ++x) px[static_cast<std::size_t>(y) * side + x] = 255;
    return RasterImage(side, side, PixelFormat::GRAY8, std::move(px));
}

RasterImage vertical_step(int width, int height) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height, 0);
    for (int y = 0; y < height; ++y)
        for (int x = width / 2; x < width; ++x) px[static_cast<std::size_t>(y) * width + x] = 255;
    return RasterImage(width, height, PixelFormat::GRAY8, std::move(px));
}

std::vector<std::string> desk_categories() { return {"animal", "face", "flower", "vehicle"}; }

RasterImage desk_scene(std::string_view category, int variant, int size) {
    std::mt19937_64 rng(seed_for(category, variant));
    Canvas cv(size, size);
    if (category == "animal") {
        draw_animal(cv, rng);
    } else if (category == "face") {
        draw_face(cv, rng);
    } else if (category == "flower") {
        draw_flower(cv, rng);
    } else if (category == "vehicle") {
        draw_vehicle(cv, rng);
    } else {
        throw Error(ErrorCode::UnknownCategory, std::string(category));
    }
    cv.noise(rng, 2);
    return std::move(cv).finish();
}

std::string_view pattern_label(EdgePattern p) {
    switch (p) {
        case EdgePattern::NoisyBlank: return "blank";
        case EdgePattern::HorizontalStripes: return "hstripes";
        case EdgePattern::VerticalStripes: return "vstripes";
        case EdgePattern::Checkerboard: return "checker";
    }
    return "unknown";
}

RasterImage edge_pattern(EdgePattern p, std::uint64_t seed, int size) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(p) + 1);
    const int period = 12 + static_cast<int>(rng() % 12);
    const int offset = static_cast<int>(rng() % period);
    const int lo = 20 + static_cast<int>(rng() % 60);
    const int hi = 170 + static_cast<int>(rng() % 70);
    const int base = 60 + static_cast<int>(rng() % 140);
    const int amp = p == EdgePattern::NoisyBlank ? 10 + static_cast<int>(rng() % 6) : 3;
    std::uniform_int_distribution<int> d(-amp, amp);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(size) * size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            int v = base;
            const bool bx = ((x + offset) / (period / 2)) % 2 == 1;
            const bool by = ((y + offset) / (period / 2)) % 2 == 1;
            switch (p) {
                case EdgePattern::NoisyBlank: break;
                case EdgePattern::HorizontalStripes: v = by ? hi : lo; break;
                case EdgePattern::VerticalStripes: v = bx ? hi : lo; break;
                case EdgePattern::Checkerboard: v = bx != by ? hi : lo; break;
            }
            px[static_cast<std::size_t>(y) * size + x] = static_cast<std::uint8_t>(std::clamp(v + d(rng), 0, 255));
        }
    }
    return RasterImage(size, size, PixelFormat::GRAY8, std::move(px));
}

}  // namespace cbir::synth
