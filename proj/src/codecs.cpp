// PNG and JPEG go through libpng / libjpeg; BMP is parsed here.

#include <png.h>

#include <algorithm>
#include <array>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <string>

// jpeglib.h needs size_t and FILE declared first.
#include <jpeglib.h>

#include "cbir/error.hpp"
#include "cbir/image.hpp"

namespace cbir {

namespace {

bool starts_with(std::span<const std::uint8_t> bytes, std::initializer_list<std::uint8_t> magic) {
    if (bytes.size() < magic.size()) return false;
    return std::equal(magic.begin(), magic.end(), bytes.begin());
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        std::string msg = image.message;
        png_image_free(&image);
        throw Error(ErrorCode::CorruptStream, "png: " + msg);
    }
    if (image.width == 0 || image.height == 0) {
        png_image_free(&image);
        throw Error(ErrorCode::ZeroDimension, "png header declares an empty image");
    }
    image.format = PNG_FORMAT_RGBA;
    std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw Error(ErrorCode::CorruptStream, "png: " + msg);
    }
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0, n = static_cast<std::size_t>(w) * h; i < n; ++i) {
        rgb[3 * i] = rgba[4 * i];
        rgb[3 * i + 1] = rgba[4 * i + 1];
        rgb[3 * i + 2] = rgba[4 * i + 2];
    }
    return RasterImage(w, h, PixelFormat::RGB8, std::move(rgb));
}

struct JpegErrorManager {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_fail(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Warnings (premature end of data, corrupt segments) are fatal: a truncated
// stream must not decode into a gray-padded image.
void jpeg_message(j_common_ptr cinfo, int level) {
    if (level < 0) jpeg_fail(cinfo);
}

RasterImage decode_jpeg(std::span<const std::uint8_t> bytes) {
    jpeg_decompress_struct cinfo;
    JpegErrorManager err;
    std::memset(err.message, 0, sizeof(err.message));
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_fail;
    err.pub.emit_message = jpeg_message;

    std::vector<std::uint8_t> rgb;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw Error(ErrorCode::CorruptStream, std::string("jpeg: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);
    rgb.resize(static_cast<std::size_t>(w) * h * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    if (w == 0 || h == 0) throw Error(ErrorCode::ZeroDimension, "jpeg has an empty frame");
    return RasterImage(w, h, PixelFormat::RGB8, std::move(rgb));
}

std::uint32_t le16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8);
}

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
    return le16(b, at) | (le16(b, at + 2) << 16);
}

// Extracts the masked channel and rescales it to 8 bits.
std::uint8_t take_mask(std::uint32_t value, std::uint32_t mask) {
    if (mask == 0) return 0;
    int shift = 0;
    while (((mask >> shift) & 1u) == 0) ++shift;
    const std::uint32_t bits = mask >> shift;
    const std::uint32_t v = (value & mask) >> shift;
    return static_cast<std::uint8_t>((v * 255u + bits / 2) / bits);
}

RasterImage decode_bmp(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t kFileHeader = 14;
    if (bytes.size() < kFileHeader + 40) throw Error(ErrorCode::CorruptStream, "bmp: header truncated");
    const std::uint32_t pixel_offset = le32(bytes, 10);
    const std::uint32_t dib_size = le32(bytes, 14);
    if (dib_size < 40) throw Error(ErrorCode::UnsupportedFormat, "bmp: core headers are not supported");
    const auto width = static_cast<std::int32_t>(le32(bytes, 18));
    const auto raw_height = static_cast<std::int32_t>(le32(bytes, 22));
    const std::uint32_t bpp = le16(bytes, 28);
    const std::uint32_t compression = le32(bytes, 30);
    std::uint32_t palette_size = le32(bytes, 46);

    if (width == 0 || raw_height == 0) throw Error(ErrorCode::ZeroDimension, "bmp: empty image");
    if (width < 0) throw Error(ErrorCode::CorruptStream, "bmp: negative width");
    const bool top_down = raw_height < 0;
    const std::int64_t height = top_down ? -static_cast<std::int64_t>(raw_height) : raw_height;
    if (compression != 0 && !(compression == 3 && (bpp == 16 || bpp == 32))) {
        throw Error(ErrorCode::UnsupportedFormat, "bmp: compression " + std::to_string(compression));
    }
    if (bpp != 8 && bpp != 16 && bpp != 24 && bpp != 32) {
        throw Error(ErrorCode::UnsupportedFormat, "bmp: " + std::to_string(bpp) + " bits per pixel");
    }

    std::uint32_t rmask = 0x00ff0000u, gmask = 0x0000ff00u, bmask = 0x000000ffu;
    if (bpp == 16) { rmask = 0x7c00u; gmask = 0x03e0u; bmask = 0x001fu; }
    if (compression == 3) {
        const std::size_t at = kFileHeader + 40;
        if (bytes.size() < at + 12) throw Error(ErrorCode::CorruptStream, "bmp: masks truncated");
        rmask = le32(bytes, at);
        gmask = le32(bytes, at + 4);
        bmask = le32(bytes, at + 8);
    }

    std::vector<std::array<std::uint8_t, 3>> palette;
    if (bpp == 8) {
        if (palette_size == 0) palette_size = 256;
        const std::size_t at = kFileHeader + dib_size;
        if (palette_size > 256 || bytes.size() < at + 4 * palette_size) {
            throw Error(ErrorCode::CorruptStream, "bmp: palette truncated");
        }
        for (std::uint32_t i = 0; i < palette_size; ++i) {
            const std::size_t p = at + 4 * i;
            palette.push_back({bytes[p + 2], bytes[p + 1], bytes[p]});
        }
    }

    const std::size_t stride = ((static_cast<std::size_t>(width) * bpp + 31) / 32) * 4;
    if (pixel_offset > bytes.size() || (bytes.size() - pixel_offset) / stride < static_cast<std::size_t>(height)) {
        throw Error(ErrorCode::CorruptStream, "bmp: pixel data truncated");
    }

    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
    for (std::int64_t row = 0; row < height; ++row) {
        const std::int64_t y = top_down ? row : height - 1 - row;
        const std::size_t src = pixel_offset + static_cast<std::size_t>(row) * stride;
        std::uint8_t* out = rgb.data() + static_cast<std::size_t>(y) * width * 3;
        for (std::int32_t x = 0; x < width; ++x, out += 3) {
            switch (bpp) {
            case 8: {
                const std::uint8_t idx = bytes[src + x];
                if (idx >= palette.size()) throw Error(ErrorCode::CorruptStream, "bmp: palette index out of range");
                std::copy(palette[idx].begin(), palette[idx].end(), out);
                break;
            }
            case 24: {
                const std::size_t p = src + 3 * static_cast<std::size_t>(x);
                out[0] = bytes[p + 2];
                out[1] = bytes[p + 1];
                out[2] = bytes[p];
                break;
            }
            default: {
                const std::uint32_t v = bpp == 16 ? le16(bytes, src + 2 * static_cast<std::size_t>(x))
                                                  : le32(bytes, src + 4 * static_cast<std::size_t>(x));
                out[0] = take_mask(v, rmask);
                out[1] = take_mask(v, gmask);
                out[2] = take_mask(v, bmask);
                break;
            }
            }
        }
    }
    return RasterImage(width, static_cast<int>(height), PixelFormat::RGB8, std::move(rgb));
}

}  // namespace

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
    if (starts_with(bytes, {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a})) return decode_png(bytes);
    if (starts_with(bytes, {0xff, 0xd8, 0xff})) return decode_jpeg(bytes);
    if (starts_with(bytes, {'B', 'M'})) return decode_bmp(bytes);
    throw Error(ErrorCode::UnsupportedFormat, "unrecognized magic bytes");
}

}  // namespace cbir
