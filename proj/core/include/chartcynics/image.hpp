#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chartcynics {

struct ImageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const Rect&) const = default;
};

// RGBA8, row-major, top-left origin.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    static Image blank(int w, int h, std::uint8_t r = 255, std::uint8_t g = 255,
                       std::uint8_t b = 255, std::uint8_t a = 255);

    std::uint8_t* at(int x, int y) { return pixels.data() + 4 * (std::size_t(y) * width + x); }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 4 * (std::size_t(y) * width + x);
    }

    void fill_rect(Rect r, std::uint8_t red, std::uint8_t green, std::uint8_t blue,
                   std::uint8_t alpha = 255);
};

Image decode_png(const std::string& path);
Image decode_png_bytes(const std::uint8_t* data, std::size_t size);
std::vector<std::uint8_t> encode_png(const Image& img);
void write_png(const std::string& path, const Image& img);

// rect must lie fully inside img; the caller clamps beforehand.
Image crop(const Image& img, Rect rect);

}  // namespace chartcynics
