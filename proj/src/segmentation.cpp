#include "skintrack/segmentation.hpp"

#include <algorithm>
#include <sstream>

#include "csv.hpp"
#include "skintrack/error.hpp"

namespace skintrack {

Segmentation segment(const Frame& frame, int eta, SegmentProbe* probe) {
    if (eta < kMinEta || eta > kMaxEta)
        throw ConfigError("eta must be in [0, 256], got " + std::to_string(eta));
    if (frame.empty()) throw ConfigError("cannot segment an empty frame");

    const int w = frame.width();
    const int h = frame.height();
    const std::size_t n = frame.size();
    const auto pixels = frame.pixels();

    Segmentation seg;
    seg.width = w;
    seg.height = h;
    seg.labels.assign(n, 0);
    seg.seeds.reserve(n);  // worst case one region per pixel; untouched capacity stays virtual

    // Flat FIFO with a moving head, emptied after each region so the hot
    // part of the buffer stays small.
    std::vector<std::uint32_t> worklist;
    worklist.reserve(n);
    std::size_t head = 0;
    std::size_t insertions = 0;

    std::uint32_t next_label = 1;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (seg.labels[seed] != 0) continue;

        const std::uint32_t label = next_label++;
        const Rgb ref = pixels[seed];
        seg.seeds.push_back(Pixel{static_cast<int>(seed % w), static_cast<int>(seed / w)});
        seg.labels[seed] = label;
        worklist.push_back(static_cast<std::uint32_t>(seed));

        auto admit = [&](std::size_t q) {
            if (seg.labels[q] == 0 && channel_distance(pixels[q], ref) < eta) {
                seg.labels[q] = label;
                worklist.push_back(static_cast<std::uint32_t>(q));
            }
        };

        while (head < worklist.size()) {
            const std::size_t p = worklist[head++];
            const int x = static_cast<int>(p % w);
            const int y = static_cast<int>(p / w);
            if (x > 0) admit(p - 1);
            if (x + 1 < w) admit(p + 1);
            if (y > 0) admit(p - w);
            if (y + 1 < h) admit(p + w);
        }
        insertions += worklist.size();
        worklist.clear();
        head = 0;
    }

    seg.region_count = next_label - 1;
    if (probe) probe->worklist_insertions += insertions;
    return seg;
}

std::vector<RegionStats> region_stats(const Segmentation& segmentation, const Frame& frame) {
    if (segmentation.width != frame.width() || segmentation.height != frame.height() ||
        segmentation.labels.size() != frame.size())
        throw ConfigError("segmentation is " + std::to_string(segmentation.width) + "x" +
                          std::to_string(segmentation.height) + " but frame is " +
                          std::to_string(frame.width()) + "x" + std::to_string(frame.height()));

    struct Accum {
        std::uint64_t count = 0;
        std::uint64_t sum[3] = {0, 0, 0};
        BoundingBox box{};
    };
    const std::size_t k = segmentation.region_count;
    std::vector<Accum> acc(k);

    const auto pixels = frame.pixels();
    const int w = segmentation.width;
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const std::uint32_t label = segmentation.labels[i];
        if (label == 0 || label > k)
            throw ConfigError("label " + std::to_string(label) + " outside 1.." + std::to_string(k));
        Accum& a = acc[label - 1];
        const int x = static_cast<int>(i % w);
        const int y = static_cast<int>(i / w);
        if (a.count == 0) {
            a.box = BoundingBox{x, y, x, y};
        } else {
            a.box.min_x = std::min(a.box.min_x, x);
            a.box.max_x = std::max(a.box.max_x, x);
            a.box.max_y = y;  // raster order: y never decreases
        }
        ++a.count;
        a.sum[0] += pixels[i].r;
        a.sum[1] += pixels[i].g;
        a.sum[2] += pixels[i].b;
    }

    std::vector<RegionStats> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Accum& a = acc[i];
        if (a.count == 0) throw ConfigError("label " + std::to_string(i + 1) + " has no pixels");
        RegionStats s;
        s.label = static_cast<std::uint32_t>(i + 1);
        s.pixel_count = a.count;
        const double count = static_cast<double>(a.count);
        s.mean_rgb = {static_cast<double>(a.sum[0]) / count, static_cast<double>(a.sum[1]) / count,
                      static_cast<double>(a.sum[2]) / count};
        s.bbox = a.box;
        s.seed = i < segmentation.seeds.size() ? segmentation.seeds[i]
                                               : Pixel{a.box.min_x, a.box.min_y};
        out.push_back(s);
    }
    return out;
}

std::string labels_to_csv(const Segmentation& segmentation) {
    std::string out = "x,y,label\n";
    out.reserve(segmentation.labels.size() * 12);
    for (int y = 0; y < segmentation.height; ++y)
        for (int x = 0; x < segmentation.width; ++x) {
            out += std::to_string(x);
            out += ',';
            out += std::to_string(y);
            out += ',';
            out += std::to_string(segmentation.label_at(x, y));
            out += '\n';
        }
    return out;
}

Segmentation labels_from_csv(const std::string& text) {
    const auto rows = csv::parse(text, "x,y,label");
    if (rows.empty()) throw ParseError("label map has no rows");

    long max_x = -1, max_y = -1;
    for (const auto& row : rows) {
        max_x = std::max(max_x, csv::to_long(row, 0, "x"));
        max_y = std::max(max_y, csv::to_long(row, 1, "y"));
    }
    Segmentation seg;
    seg.width = static_cast<int>(max_x + 1);
    seg.height = static_cast<int>(max_y + 1);
    if (rows.size() != static_cast<std::size_t>(seg.width) * seg.height)
        throw ParseError("label map has " + std::to_string(rows.size()) + " rows but spans " +
                         std::to_string(seg.width) + "x" + std::to_string(seg.height));
    seg.labels.assign(rows.size(), 0);
    for (const auto& row : rows) {
        const long x = csv::to_long(row, 0, "x");
        const long y = csv::to_long(row, 1, "y");
        const long label = csv::to_long(row, 2, "label");
        if (x < 0 || y < 0) throw ParseError("line " + std::to_string(row.line) + ": negative coordinate");
        if (label <= 0) throw ParseError("line " + std::to_string(row.line) + ": label must be positive");
        auto& slot = seg.labels[static_cast<std::size_t>(y) * seg.width + x];
        if (slot != 0) throw ParseError("line " + std::to_string(row.line) + ": duplicate pixel");
        slot = static_cast<std::uint32_t>(label);
    }

    // Seeds are the first raster-order pixel of each label.
    for (std::size_t i = 0; i < seg.labels.size(); ++i) {
        const std::uint32_t label = seg.labels[i];
        if (label > seg.seeds.size()) {
            if (label != seg.seeds.size() + 1)
                throw ParseError("labels are not numbered in scan order at pixel " + std::to_string(i));
            seg.seeds.push_back(Pixel{static_cast<int>(i % seg.width), static_cast<int>(i / seg.width)});
        }
    }
    seg.region_count = static_cast<std::uint32_t>(seg.seeds.size());
    return seg;
}

} // namespace skintrack
