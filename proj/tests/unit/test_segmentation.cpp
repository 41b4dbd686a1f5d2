#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "skintrack/error.hpp"
#include "skintrack/segmentation.hpp"

using namespace skintrack;

#ifndef SKINTRACK_DATA_DIR
#error "SKINTRACK_DATA_DIR must point at the data/ directory"
#endif

namespace {

const std::filesystem::path kData = SKINTRACK_DATA_DIR;

std::vector<Frame> mixed_frames(int count, int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Frame> out;
    for (int i = 0; i < count; ++i)
        out.push_back(i % 2 ? ref::random_frame(size, size, rng) : ref::blobby_frame(size, size, rng));
    return out;
}

} // namespace

TEST(Segment, UniformFrameIsOneRegion) {
    const Segmentation s = segment(Frame(4, 4, Rgb{7, 7, 7}), 1);
    EXPECT_EQ(s.region_count, 1u);
    EXPECT_TRUE(std::all_of(s.labels.begin(), s.labels.end(), [](auto l) { return l == 1; }));
}

TEST(Segment, EtaZeroGivesSingletons) {
    std::mt19937_64 rng(1);
    for (const Frame& f : {Frame(4, 4), ref::random_frame(9, 5, rng)}) {
        const Segmentation s = segment(f, 0);
        EXPECT_EQ(s.region_count, f.size());
    }
}

TEST(Segment, ThresholdIsStrict) {
    Frame f(2, 1);
    f.at(1, 0) = Rgb{30, 30, 30};
    EXPECT_EQ(segment(f, 28).region_count, 2u);
    EXPECT_EQ(segment(f, 30).region_count, 2u);  // 30 < 30 is false
    EXPECT_EQ(segment(f, 31).region_count, 1u);
}

TEST(Segment, UsesLargestChannelDifference) {
    Frame f(2, 1);
    f.at(1, 0) = Rgb{0, 0, 40};
    EXPECT_EQ(segment(f, 40).region_count, 2u);
    EXPECT_EQ(segment(f, 41).region_count, 1u);
}

TEST(Segment, ComparesAgainstSeedNotNeighbour) {
    // A ramp of 10-level steps: every neighbour pair differs by 10 < 28, but
    // growth stops once the distance to the seed reaches 28.
    Frame f(8, 1);
    for (int x = 0; x < 8; ++x) f.at(x, 0) = Rgb{static_cast<std::uint8_t>(10 * x), 0, 0};
    const Segmentation s = segment(f, 28);
    const std::vector<std::uint32_t> expected = {1, 1, 1, 2, 2, 2, 3, 3};
    EXPECT_EQ(s.labels, expected);
    EXPECT_EQ(s.seeds[1], (Pixel{3, 0}));
}

TEST(Segment, DiagonalsAreNotConnected) {
    Frame f(2, 2, Rgb{0, 0, 0});
    f.at(1, 0) = f.at(0, 1) = Rgb{255, 255, 255};
    const Segmentation s = segment(f, 10);
    EXPECT_EQ(s.region_count, 4u);
}

TEST(Segment, Eta256MergesEverything) {
    std::mt19937_64 rng(2);
    EXPECT_EQ(segment(ref::random_frame(16, 16, rng), 256).region_count, 1u);
}

TEST(Segment, RejectsEtaOutOfRange) {
    EXPECT_THROW(segment(Frame(1, 1), -1), ConfigError);
    EXPECT_THROW(segment(Frame(1, 1), 257), ConfigError);
}

TEST(Segment, MatchesNaiveFloodFill) {
    for (int eta : {0, 1, 5, 28, 64, 255, 256})
        for (const Frame& f : mixed_frames(10, 24, 100 + eta)) {
            const ref::NaiveFloodFill oracle(f, eta);
            const Segmentation s = segment(f, eta);
            ASSERT_EQ(s.labels, oracle.labels()) << "eta " << eta;
            ASSERT_EQ(s.region_count, oracle.count());
        }
}

TEST(Segment, PartitionConnectivityAndPredicateInvariants) {
    for (int eta : {1, 28, 64})
        for (const Frame& f : mixed_frames(6, 32, 7 * eta)) {
            const Segmentation s = segment(f, eta);
            const std::uint32_t k = s.region_count;
            ASSERT_GE(k, 1u);
            ASSERT_LE(k, f.size());
            ASSERT_EQ(s.seeds.size(), k);

            std::vector<std::size_t> members(k + 1, 0);
            std::uint32_t max_seen = 0;
            for (int y = 0; y < s.height; ++y)
                for (int x = 0; x < s.width; ++x) {
                    const std::uint32_t l = s.label_at(x, y);
                    ASSERT_GE(l, 1u);
                    ASSERT_LE(l, k);
                    // Scan-order numbering: labels first appear in increasing order.
                    if (l > max_seen) {
                        ASSERT_EQ(l, max_seen + 1);
                        ASSERT_EQ(s.seeds[l - 1], (Pixel{x, y}));
                        max_seen = l;
                    }
                    const Pixel seed = s.seeds[l - 1];
                    if (!(seed == Pixel{x, y})) ASSERT_LT(channel_distance(f.at(x, y), f.at(seed.x, seed.y)), eta);
                    ++members[l];
                }

            // Each region is reachable from its seed through its own pixels.
            std::vector<std::uint8_t> seen(f.size(), 0);
            for (std::uint32_t l = 1; l <= k; ++l) {
                std::deque<Pixel> q{s.seeds[l - 1]};
                std::size_t reached = 0;
                seen[static_cast<std::size_t>(q.front().y) * s.width + q.front().x] = 1;
                while (!q.empty()) {
                    const Pixel p = q.front();
                    q.pop_front();
                    ++reached;
                    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                        const int x = p.x + dx, y = p.y + dy;
                        if (!f.contains(x, y) || s.label_at(x, y) != l) continue;
                        auto& flag = seen[static_cast<std::size_t>(y) * s.width + x];
                        if (!flag) {
                            flag = 1;
                            q.push_back({x, y});
                        }
                    }
                }
                ASSERT_EQ(reached, members[l]) << "region " << l << " is not 4-connected";
            }
        }
}

TEST(Segment, WorklistInsertionsNeverExceedPixelCount) {
    for (int eta : {0, 28, 256})
        for (const Frame& f : mixed_frames(4, 48, 3)) {
            SegmentProbe probe;
            segment(f, eta, &probe);
            EXPECT_LE(probe.worklist_insertions, f.size());
            EXPECT_EQ(probe.worklist_insertions, f.size());  // every pixel enters exactly once
        }
}

TEST(Segment, IsDeterministic) {
    for (const Frame& f : mixed_frames(3, 40, 9)) EXPECT_EQ(segment(f, 28), segment(f, 28));
}

TEST(Segment, ReferenceFrameMatchesGoldenLabelMap) {
    const Frame frame = read_ppm_file(kData / "reference_320x240.ppm");
    const auto bytes = read_binary_file(kData / "reference_320x240_eta28_labels.csv");
    const Segmentation golden = labels_from_csv(std::string(bytes.begin(), bytes.end()));
    const Segmentation s = segment(frame, 28);
    EXPECT_EQ(s.region_count, 755u);
    EXPECT_EQ(s.labels, golden.labels);
    EXPECT_EQ(s.seeds, golden.seeds);
    // The golden map is itself checked against the independent oracle.
    const ref::NaiveFloodFill oracle(frame, 28);
    EXPECT_EQ(golden.labels, oracle.labels());
}

TEST(RegionStats, TwoPixelAverage) {
    Frame f(2, 1);
    f.at(0, 0) = Rgb{10, 20, 30};
    f.at(1, 0) = Rgb{20, 30, 40};
    const auto stats = region_stats(segment(f, 28), f);
    ASSERT_EQ(stats.size(), 1u);
    EXPECT_EQ(stats[0].pixel_count, 2u);
    EXPECT_EQ(stats[0].mean_rgb, (std::array<double, 3>{15.0, 25.0, 35.0}));
    EXPECT_EQ(stats[0].bbox, (BoundingBox{0, 0, 1, 0}));
}

TEST(RegionStats, SinglePixelRegionMeanIsThePixel) {
    Frame f(3, 1, Rgb{0, 0, 0});
    f.at(1, 0) = Rgb{200, 100, 50};
    const auto stats = region_stats(segment(f, 10), f);
    ASSERT_EQ(stats.size(), 3u);
    EXPECT_EQ(stats[1].mean_rgb, (std::array<double, 3>{200.0, 100.0, 50.0}));
    EXPECT_EQ(stats[1].seed, (Pixel{1, 0}));
}

TEST(RegionStats, MatchesIndependentAccumulation) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Frame f = trial % 2 ? ref::random_frame(32, 32, rng) : ref::blobby_frame(32, 32, rng);
        const Segmentation s = segment(f, 28);
        const auto stats = region_stats(s, f);
        ASSERT_EQ(stats.size(), s.region_count);
        for (const RegionStats& r : stats) {
            long sum[3] = {0, 0, 0}, n = 0;
            int lo[3] = {255, 255, 255}, hi[3] = {0, 0, 0};
            BoundingBox box{32, 32, -1, -1};
            for (int y = 0; y < 32; ++y)
                for (int x = 0; x < 32; ++x)
                    if (s.label_at(x, y) == r.label) {
                        const Rgb p = f.at(x, y);
                        const int c[3] = {p.r, p.g, p.b};
                        for (int i = 0; i < 3; ++i) {
                            sum[i] += c[i];
                            lo[i] = std::min(lo[i], c[i]);
                            hi[i] = std::max(hi[i], c[i]);
                        }
                        ++n;
                        box = {std::min(box.min_x, x), std::min(box.min_y, y), std::max(box.max_x, x),
                               std::max(box.max_y, y)};
                    }
            ASSERT_EQ(r.pixel_count, static_cast<std::uint64_t>(n));
            ASSERT_EQ(r.bbox, box);
            for (int i = 0; i < 3; ++i) {
                ASSERT_EQ(r.mean_rgb[i], static_cast<double>(sum[i]) / static_cast<double>(n));
                ASSERT_GE(r.mean_rgb[i], lo[i]);
                ASSERT_LE(r.mean_rgb[i], hi[i]);
            }
        }
    }
}

TEST(RegionStats, RejectsDimensionMismatch) {
    const Segmentation s = segment(Frame(3, 3), 28);
    EXPECT_THROW(region_stats(s, Frame(3, 4)), ConfigError);
}

TEST(LabelCsv, RoundTripsAndRejectsGaps) {
    std::mt19937_64 rng(4);
    const Segmentation s = segment(ref::blobby_frame(12, 9, rng), 28);
    const std::string text = labels_to_csv(s);
    EXPECT_EQ(text.rfind("x,y,label\n", 0), 0u);
    EXPECT_EQ(labels_from_csv(text), s);
    EXPECT_THROW(labels_from_csv("x,y,label\n0,0,1\n1,0,3\n"), ParseError);
    EXPECT_THROW(labels_from_csv("x,y,label\n0,0,1\n"
                                 "0,0,1\n"),
                 ParseError);
}
