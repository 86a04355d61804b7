#include "chartcynics/image.hpp"

#include <png.h>

#include <algorithm>
#include <cstring>

namespace chartcynics {

Image Image::blank(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a) {
    if (w <= 0 || h <= 0) throw ImageError("blank image dimensions must be positive");
    Image img;
    img.width = w;
    img.height = h;
    img.pixels.resize(std::size_t(4) * w * h);
    for (std::size_t i = 0; i < img.pixels.size(); i += 4) {
        img.pixels[i] = r;
        img.pixels[i + 1] = g;
        img.pixels[i + 2] = b;
        img.pixels[i + 3] = a;
    }
    return img;
}

void Image::fill_rect(Rect r, std::uint8_t red, std::uint8_t green, std::uint8_t blue,
                      std::uint8_t alpha) {
    const int x0 = std::max(r.x, 0);
    const int y0 = std::max(r.y, 0);
    const int x1 = std::min(r.x + r.w, width);
    const int y1 = std::min(r.y + r.h, height);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            std::uint8_t* p = at(x, y);
            p[0] = red;
            p[1] = green;
            p[2] = blue;
            p[3] = alpha;
        }
    }
}

Image decode_png(const std::string& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str()))
        throw ImageError("cannot read PNG '" + path + "': " + png.message);
    png.format = PNG_FORMAT_RGBA;

    Image out;
    out.width = static_cast<int>(png.width);
    out.height = static_cast<int>(png.height);
    out.pixels.resize(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, out.pixels.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw ImageError("cannot decode PNG '" + path + "': " + msg);
    }
    return out;
}

Image decode_png_bytes(const std::uint8_t* data, std::size_t size) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&png, data, size))
        throw ImageError(std::string("cannot read PNG bytes: ") + png.message);
    png.format = PNG_FORMAT_RGBA;

    Image out;
    out.width = static_cast<int>(png.width);
    out.height = static_cast<int>(png.height);
    out.pixels.resize(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, out.pixels.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw ImageError("cannot decode PNG bytes: " + msg);
    }
    return out;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != std::size_t(4) * img.width * img.height)
        throw ImageError("encode_png: inconsistent image");

    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width);
    png.height = static_cast<png_uint_32>(img.height);
    png.format = PNG_FORMAT_RGBA;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png, nullptr, &size, 0, img.pixels.data(), 0, nullptr))
        throw ImageError(std::string("cannot size PNG: ") + png.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&png, out.data(), &size, 0, img.pixels.data(), 0, nullptr))
        throw ImageError(std::string("cannot encode PNG: ") + png.message);
    out.resize(size);
    return out;
}

void write_png(const std::string& path, const Image& img) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != std::size_t(4) * img.width * img.height)
        throw ImageError("write_png: inconsistent image");

    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width);
    png.height = static_cast<png_uint_32>(img.height);
    png.format = PNG_FORMAT_RGBA;
    if (!png_image_write_to_file(&png, path.c_str(), 0, img.pixels.data(), 0, nullptr))
        throw ImageError("cannot write PNG '" + path + "': " + png.message);
}

Image crop(const Image& img, Rect rect) {
    if (rect.w <= 0 || rect.h <= 0 || rect.x < 0 || rect.y < 0 || rect.x + rect.w > img.width ||
        rect.y + rect.h > img.height)
        throw ImageError("crop rect out of bounds");
    Image out;
    out.width = rect.w;
    out.height = rect.h;
    out.pixels.resize(std::size_t(4) * rect.w * rect.h);
    for (int y = 0; y < rect.h; ++y) {
        std::memcpy(out.pixels.data() + std::size_t(4) * y * rect.w,
                    img.at(rect.x, rect.y + y), std::size_t(4) * rect.w);
    }
    return out;
}

}  // namespace chartcynics
