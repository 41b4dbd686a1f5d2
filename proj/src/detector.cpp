#include "skintrack/detector.hpp"

#include <algorithm>

#include "csv.hpp"
#include "skintrack/error.hpp"

namespace skintrack {

bool Detection::is_skin(std::uint32_t label) const {
    return std::binary_search(skin_labels.begin(), skin_labels.end(), label);
}

std::optional<Point2d> centroid(const Mask& mask) {
    std::uint64_t count = 0, sum_x = 0, sum_y = 0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                ++count;
                sum_x += static_cast<std::uint64_t>(x);
                sum_y += static_cast<std::uint64_t>(y);
            }
    if (count == 0) return std::nullopt;
    const double n = static_cast<double>(count);
    return Point2d{static_cast<double>(sum_x) / n, static_cast<double>(sum_y) / n};
}

Detection classify_regions(const Segmentation& segmentation, std::vector<RegionStats> regions,
                           const Mlp& net, const DetectOptions& options) {
    validate_rho(options.rho);

    Detection det;
    // Region k is decided independently of every other region.
    std::vector<std::uint8_t> skin(regions.size() + 1, 0);
    for (const RegionStats& r : regions) {
        const double score = forward(net, r.mean_rgb);
        det.scores.emplace(r.label, score);
        if (r.pixel_count >= options.min_region && score > options.rho) {
            skin[r.label] = 1;
            det.skin_labels.push_back(r.label);
            det.skin_pixel_count += r.pixel_count;
        }
    }

    det.mask = Mask(segmentation.width, segmentation.height);
    for (std::size_t i = 0; i < segmentation.labels.size(); ++i)
        det.mask.bits[i] = skin[segmentation.labels[i]];
    det.centroid = centroid(det.mask);
    det.regions = std::move(regions);
    return det;
}

Detection detect(const Frame& frame, const Mlp& net, const DetectOptions& options) {
    validate_rho(options.rho);
    const Segmentation seg = segment(frame, options.eta);
    return classify_regions(seg, region_stats(seg, frame), net, options);
}

std::string scores_to_csv(const Detection& detection) {
    std::string out = "label,pixels,mean_r,mean_g,mean_b,score,is_skin\n";
    for (const RegionStats& r : detection.regions) {
        out += std::to_string(r.label) + "," + std::to_string(r.pixel_count);
        for (double m : r.mean_rgb) out += "," + csv::format_double(m);
        out += "," + csv::format_double(detection.scores.at(r.label));
        out += detection.is_skin(r.label) ? ",1\n" : ",0\n";
    }
    return out;
}

} // namespace skintrack
