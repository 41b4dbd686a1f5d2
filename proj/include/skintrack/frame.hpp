#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace skintrack {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Integer pixel coordinate, origin at the top-left corner.
struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// A W x H raster of 24-bit colour, stored row-major.
class Frame {
public:
    Frame() = default;
    /// Frame filled with a single colour. Throws ConfigError on a zero dimension.
    Frame(int width, int height, Rgb fill = {});
    /// Throws ConfigError unless pixels.size() == width * height.
    Frame(int width, int height, std::vector<Rgb> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }
    Rgb& at(int x, int y) { return pixels_[index(x, y)]; }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::span<const Rgb> pixels() const noexcept { return pixels_; }
    std::span<Rgb> pixels() noexcept { return pixels_; }

    /// Copy of the w x h window whose top-left corner is (x0, y0). Throws
    /// ConfigError if the window is not fully inside the frame.
    Frame crop(int x0, int y0, int w, int h) const;

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb> pixels_;
};

/// Per-pixel boolean grid with the same geometry as a Frame.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1, row-major

    Mask() = default;
    Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    friend bool operator==(const Mask&, const Mask&) = default;
};

struct Segmentation;

// Binary PPM (P6, maxval 255). Header tokens may be separated by any ASCII
// whitespace and '#' comments running to end of line; exactly one whitespace
// byte separates maxval from the raster. Trailing bytes after the raster are
// ignored.
Frame load_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_ppm(const Frame& frame);

Frame read_ppm_file(const std::filesystem::path& path);
void write_ppm_file(const std::filesystem::path& path, const Frame& frame);

/// Palette colour of a region id: the low 24 bits of id * 2654435761
/// (Knuth's multiplicative constant), split as 0xRRGGBB. The multiplier is
/// odd, so the map is injective for every id below 2^24.
Rgb label_colour(std::uint32_t label) noexcept;

/// Every pixel painted with label_colour of its region.
Frame false_colour(const Segmentation& segmentation);

/// White where the mask is set, black elsewhere.
Frame mask_to_frame(const Mask& mask);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace skintrack
