#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skintrack/frame.hpp"
#include "skintrack/segmentation.hpp"
#include "skintrack/skin_mlp.hpp"

namespace skintrack {

struct Point2d {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2d&, const Point2d&) = default;
};

struct DetectOptions {
    int eta = kDefaultEta;
    double rho = kDefaultRho;
    /// Regions with fewer pixels are scored but never marked skin.
    std::uint64_t min_region = 1;
};

struct Detection {
    std::vector<std::uint32_t> skin_labels;  // ascending
    std::uint64_t skin_pixel_count = 0;
    Mask mask;
    std::optional<Point2d> centroid;
    std::map<std::uint32_t, double> scores;  // label -> network output
    std::vector<RegionStats> regions;

    bool is_skin(std::uint32_t label) const;
};

/// Mean coordinate of the set pixels; nullopt for an empty mask.
std::optional<Point2d> centroid(const Mask& mask);

/// Classifies already-segmented regions and builds mask and centroid.
Detection classify_regions(const Segmentation& segmentation, std::vector<RegionStats> regions,
                           const Mlp& net, const DetectOptions& options);

/// segment -> region_stats -> classify -> mask -> centroid.
Detection detect(const Frame& frame, const Mlp& net, const DetectOptions& options = {});

/// `label,pixels,mean_r,mean_g,mean_b,score,is_skin` rows with a header.
std::string scores_to_csv(const Detection& detection);

} // namespace skintrack
