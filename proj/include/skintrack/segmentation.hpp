#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "skintrack/frame.hpp"

namespace skintrack {

/// Total partition of a frame into 4-connected regions.
///
/// Labels run 1..region_count in order of first seed encounter on a
/// left-to-right, top-to-bottom scan. seeds[k - 1] is the seed pixel of
/// label k.
struct Segmentation {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> labels;
    std::uint32_t region_count = 0;
    std::vector<Pixel> seeds;

    std::uint32_t label_at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }

    friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

struct BoundingBox {
    int min_x = 0;
    int min_y = 0;
    int max_x = 0;
    int max_y = 0;  // inclusive

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct RegionStats {
    std::uint32_t label = 0;
    std::uint64_t pixel_count = 0;
    std::array<double, 3> mean_rgb{};
    BoundingBox bbox;
    Pixel seed;

    friend bool operator==(const RegionStats&, const RegionStats&) = default;
};

/// Work counters collected while growing regions.
struct SegmentProbe {
    std::size_t worklist_insertions = 0;
};

inline constexpr int kMinEta = 0;
inline constexpr int kMaxEta = 256;
inline constexpr int kDefaultEta = 28;

/// Largest absolute per-channel difference (Chebyshev distance in RGB).
inline int channel_distance(const Rgb& a, const Rgb& b) noexcept {
    const int dr = a.r > b.r ? a.r - b.r : b.r - a.r;
    const int dg = a.g > b.g ? a.g - b.g : b.g - a.g;
    const int db = a.b > b.b ? a.b - b.b : b.b - a.b;
    return dr > dg ? (dr > db ? dr : db) : (dg > db ? dg : db);
}

/// Seeded region growing with a FIFO work list.
///
/// Every unlabelled pixel met by the raster scan seeds a new region. A
/// 4-neighbour joins the region when it is still unlabelled and its
/// channel_distance to the region's *seed* colour is strictly below eta.
/// Each pixel enters the work list exactly once, so the pass is linear in
/// the pixel count. eta must lie in [0, 256]; eta = 0 yields one region per
/// pixel and eta = 256 one region per 4-connected component of the frame.
Segmentation segment(const Frame& frame, int eta, SegmentProbe* probe = nullptr);

/// One entry per label, ordered by label. Channel sums are accumulated in
/// integers and divided once. Throws ConfigError on a dimension mismatch.
std::vector<RegionStats> region_stats(const Segmentation& segmentation, const Frame& frame);

/// `x,y,label` rows with a header line, in raster order.
std::string labels_to_csv(const Segmentation& segmentation);
/// Inverse of labels_to_csv. Throws ParseError on malformed input.
Segmentation labels_from_csv(const std::string& text);

} // namespace skintrack
