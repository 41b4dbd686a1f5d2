#include "skintrack/frame.hpp"

#include <fstream>
#include <iterator>
#include <string>

#include "skintrack/error.hpp"
#include "skintrack/segmentation.hpp"

namespace skintrack {

namespace {

void check_dimensions(int width, int height) {
    if (width <= 0 || height <= 0)
        throw ConfigError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
}

bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint(const char* field) {
        skip_separators();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L)
                throw ParseError(std::string("PPM ") + field + " is too large");
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ >= bytes_.size())
                throw ParseError(std::string("PPM header truncated before ") + field);
            throw ParseError(std::string("PPM ") + field + " is not a decimal integer (byte offset " +
                             std::to_string(pos_) + ")");
        }
        return value;
    }

    void expect_single_space(const char* after) {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_]))
            throw ParseError(std::string("PPM expects whitespace after ") + after + " (byte offset " +
                             std::to_string(pos_) + ")");
        ++pos_;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

Frame::Frame(int width, int height, Rgb fill) : width_(width), height_(height) {
    check_dimensions(width, height);
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Frame::Frame(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dimensions(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ConfigError("frame of " + std::to_string(width) + "x" + std::to_string(height) +
                          " cannot hold " + std::to_string(pixels_.size()) + " pixels");
}

Frame Frame::crop(int x0, int y0, int w, int h) const {
    if (w <= 0 || h <= 0 || x0 < 0 || y0 < 0 || x0 + w > width_ || y0 + h > height_)
        throw ConfigError("crop window " + std::to_string(w) + "x" + std::to_string(h) + " at (" +
                          std::to_string(x0) + "," + std::to_string(y0) + ") leaves the " +
                          std::to_string(width_) + "x" + std::to_string(height_) + " frame");
    std::vector<Rgb> out;
    out.reserve(static_cast<std::size_t>(w) * h);
    for (int y = y0; y < y0 + h; ++y) {
        const auto row = pixels_.begin() + static_cast<std::ptrdiff_t>(index(x0, y));
        out.insert(out.end(), row, row + w);
    }
    return Frame(w, h, std::move(out));
}

Frame load_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
        std::string magic;
        for (std::size_t i = 0; i < bytes.size() && i < 2; ++i)
            magic += (bytes[i] >= 0x20 && bytes[i] < 0x7f) ? static_cast<char>(bytes[i]) : '?';
        throw ParseError("unsupported magic '" + magic + "' (expected P6)");
    }
    HeaderReader header(bytes.subspan(2));
    if (!bytes.subspan(2).empty() && !is_space(bytes[2]) && bytes[2] != '#')
        throw ParseError("unsupported magic (expected P6 followed by whitespace)");

    const long width = header.read_uint("width");
    const long height = header.read_uint("height");
    const long maxval = header.read_uint("maxval");
    if (width == 0) throw ParseError("PPM width is zero");
    if (height == 0) throw ParseError("PPM height is zero");
    if (maxval != 255)
        throw ParseError("PPM maxval must be 255, got " + std::to_string(maxval));
    header.expect_single_space("maxval");

    const std::size_t payload_start = 2 + header.offset();
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t needed = count * 3;
    if (bytes.size() - payload_start < needed)
        throw ParseError("truncated pixel payload: expected " + std::to_string(needed) +
                         " bytes from byte offset " + std::to_string(payload_start) + ", file ends at " +
                         std::to_string(bytes.size()));

    std::vector<Rgb> pixels(count);
    const std::uint8_t* p = bytes.data() + payload_start;
    for (std::size_t i = 0; i < count; ++i, p += 3) pixels[i] = Rgb{p[0], p[1], p[2]};
    return Frame(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<std::uint8_t> save_ppm(const Frame& frame) {
    const std::string header =
        "P6\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + frame.size() * 3);
    for (const Rgb& px : frame.pixels()) {
        out.push_back(px.r);
        out.push_back(px.g);
        out.push_back(px.b);
    }
    return out;
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

Frame read_ppm_file(const std::filesystem::path& path) {
    const auto bytes = read_binary_file(path);
    try {
        return load_ppm(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_ppm_file(const std::filesystem::path& path, const Frame& frame) {
    write_binary_file(path, save_ppm(frame));
}

Rgb label_colour(std::uint32_t label) noexcept {
    const std::uint32_t h = (label * 2654435761U) & 0xFFFFFFU;
    return Rgb{static_cast<std::uint8_t>(h >> 16), static_cast<std::uint8_t>(h >> 8),
               static_cast<std::uint8_t>(h)};
}

Frame false_colour(const Segmentation& segmentation) {
    std::vector<Rgb> pixels;
    pixels.reserve(segmentation.labels.size());
    for (std::uint32_t label : segmentation.labels) pixels.push_back(label_colour(label));
    return Frame(segmentation.width, segmentation.height, std::move(pixels));
}

Frame mask_to_frame(const Mask& mask) {
    std::vector<Rgb> pixels;
    pixels.reserve(mask.bits.size());
    for (std::uint8_t bit : mask.bits)
        pixels.push_back(bit ? Rgb{255, 255, 255} : Rgb{0, 0, 0});
    return Frame(mask.width, mask.height, std::move(pixels));
}

} // namespace skintrack
