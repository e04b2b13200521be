#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include <jpeglib.h>

#include "cbir/error.hpp"
#include "cbir/synth.hpp"

namespace cbir::synth {

namespace {

std::vector<std::uint8_t> write_png(png_image& image, const void* pixels) {
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr)) {
        throw Error(ErrorCode::CorruptStream, std::string("png encode: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr)) {
        throw Error(ErrorCode::CorruptStream, std::string("png encode: ") + image.message);
    }
    out.resize(size);
    return out;
}

void put16(std::vector<std::uint8_t>& b, std::uint32_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    put16(b, v & 0xffffu);
    put16(b, v >> 16);
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.format() == PixelFormat::GRAY8 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    return write_png(image, img.pixels().data());
}

std::vector<std::uint8_t> encode_png_rgba(int width, int height, std::span<const std::uint8_t> rgba) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = PNG_FORMAT_RGBA;
    return write_png(image, rgba.data());
}

std::vector<std::uint8_t> encode_jpeg(const RasterImage& img, int quality) {
    jpeg_compress_struct cinfo;
    jpeg_error_mgr jerr;
    cinfo.err = jpeg_std_error(&jerr);
    jpeg_create_compress(&cinfo);
    unsigned char* mem = nullptr;
    unsigned long mem_size = 0;
    jpeg_mem_dest(&cinfo, &mem, &mem_size);
    cinfo.image_width = static_cast<JDIMENSION>(img.width());
    cinfo.image_height = static_cast<JDIMENSION>(img.height());
    cinfo.input_components = img.channels();
    cinfo.in_color_space = img.format() == PixelFormat::GRAY8 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<std::uint8_t*>(img.pixels().data()) + cinfo.next_scanline * stride;
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    std::vector<std::uint8_t> out(mem, mem + mem_size);
    jpeg_destroy_compress(&cinfo);
    std::free(mem);
    return out;
}

std::vector<std::uint8_t> encode_bmp(const RasterImage& img) {
    const int w = img.width();
    const int h = img.height();
    const std::uint32_t stride = (static_cast<std::uint32_t>(w) * 3 + 3) & ~3u;
    const std::uint32_t data_size = stride * static_cast<std::uint32_t>(h);
    std::vector<std::uint8_t> b;
    b.reserve(54 + data_size);
    b.push_back('B');
    b.push_back('M');
    put32(b, 54 + data_size);
    put32(b, 0);
    put32(b, 54);
    put32(b, 40);
    put32(b, static_cast<std::uint32_t>(w));
    put32(b, static_cast<std::uint32_t>(h));
    put16(b, 1);
    put16(b, 24);
    put32(b, 0);
    put32(b, data_size);
    put32(b, 2835);
    put32(b, 2835);
    put32(b, 0);
    put32(b, 0);
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x) {
            const std::uint8_t r = img.at(x, y, 0);
            const std::uint8_t g = img.channels() == 3 ? img.at(x, y, 1) : r;
            const std::uint8_t bl = img.channels() == 3 ? img.at(x, y, 2) : r;
            b.push_back(bl);
            b.push_back(g);
            b.push_back(r);
        }
        for (std::uint32_t pad = static_cast<std::uint32_t>(w) * 3; pad < stride; ++pad) b.push_back(0);
    }
    return b;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace cbir::synth
