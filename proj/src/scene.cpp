#include "skintrack/scene.hpp"

#include <algorithm>

#include "skintrack/error.hpp"

namespace skintrack {

std::vector<SkinSample> skin_samples() {
    return {
        {{35, 126, 183}, 1}, {{85, 144, 190}, 1}, {{64, 128, 178}, 1}, {{80, 128, 160}, 1},
        {{38, 106, 132}, 1}, {{38, 121, 152}, 1}, {{18, 108, 144}, 1}, {{0, 63, 102}, 1},
    };
}

std::vector<SkinSample> reference_training_set(std::uint64_t seed, int negatives) {
    const auto positives = skin_samples();
    return interleave_classes(positives, generate_negatives(positives, negatives, seed));
}

const std::vector<Rgb>& backdrop_palette() {
    static const std::vector<Rgb> palette = {
        {200, 60, 40},   {230, 200, 90},  {60, 150, 60},   {120, 120, 120},
        {240, 240, 235}, {30, 30, 30},    {150, 90, 40},   {250, 150, 50},
        {180, 40, 110},  {110, 170, 40},  {200, 180, 150}, {90, 60, 30},
    };
    return palette;
}

Frame make_backdrop(int width, int height, int tile, int noise, std::uint64_t seed) {
    if (tile < 1) throw ConfigError("tile size must be at least 1");
    if (noise < 0) throw ConfigError("noise must be non-negative");
    Frame frame(width, height);
    const auto& palette = backdrop_palette();
    const int tiles_x = (width + tile - 1) / tile;
    const int tiles_y = (height + tile - 1) / tile;

    SplitMix64 rng(seed);
    std::vector<Rgb> tile_colour(static_cast<std::size_t>(tiles_x) * tiles_y);
    for (auto& c : tile_colour) c = palette[rng.next() % palette.size()];

    const auto jitter = [&](std::uint8_t v) {
        if (noise == 0) return v;
        const int span = 2 * noise + 1;
        const int d = static_cast<int>(rng.next() % static_cast<std::uint64_t>(span)) - noise;
        return static_cast<std::uint8_t>(std::clamp(v + d, 0, 255));
    };
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const Rgb base = tile_colour[static_cast<std::size_t>(y / tile) * tiles_x + x / tile];
            const std::uint8_t r = jitter(base.r);
            const std::uint8_t g = jitter(base.g);
            const std::uint8_t b = jitter(base.b);
            frame.at(x, y) = Rgb{r, g, b};
        }
    return frame;
}

Frame make_reference_frame() {
    Frame frame = make_backdrop(320, 240, 40, 5, 2024);

    // A horizontal red ramp: seed-referenced growth splits it into bands.
    for (int y = 100; y < 130; ++y)
        for (int x = 0; x < 320; ++x)
            frame.at(x, y) = Rgb{static_cast<std::uint8_t>(x * 255 / 319), 40, 40};

    // Coarse texture: jitter well above eta / 2 fragments this patch.
    const Frame texture = make_backdrop(64, 48, 64, 24, 99);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 64; ++x) frame.at(16 + x, 170 + y) = texture.at(x, y);

    Target face;
    face.shape = TargetShape::Disc;
    face.radius = 18;
    face.colour = Rgb{85, 144, 190};
    face.waypoints = {{0, 100.0, 60.0}};
    Target hand;
    hand.shape = TargetShape::Rect;
    hand.width = 30;
    hand.height = 40;
    hand.colour = Rgb{35, 126, 183};
    hand.waypoints = {{0, 240.0, 180.0}};
    for (const Target* t : {&face, &hand})
        t->rasterize(0, [&](int x, int y) {
            if (frame.contains(x, y)) frame.at(x, y) = t->colour;
        });
    return frame;
}

PanTiltState fit_state(const World& world, int pixels_per_step, int deadband) {
    if (pixels_per_step < 1) throw ConfigError("pixels_per_step (gain) must be at least 1");
    const int slack_x = world.image.width() - world.view_w - world.home.x;
    const int slack_y = world.image.height() - world.view_h - world.home.y;
    if (world.home.x < 0 || world.home.y < 0 || slack_x < 0 || slack_y < 0)
        throw ConfigError("home view window does not fit inside the world image");
    PanTiltState s;
    s.pixels_per_step = pixels_per_step;
    s.deadband = deadband;
    s.pan_limits = {-(world.home.x / pixels_per_step), slack_x / pixels_per_step};
    s.tilt_limits = {-(world.home.y / pixels_per_step), slack_y / pixels_per_step};
    return s;
}

TrackingScenario make_scenario(int world_w, int world_h, int offset_x, int offset_y, double vx,
                               double vy, int frames, int radius, Rgb colour, int gain,
                               int deadband) {
    TrackingScenario sc;
    sc.world.image = make_backdrop(world_w, world_h, 40, 4, 7);
    sc.world.home = Pixel{(world_w - sc.world.view_w) / 2, (world_h - sc.world.view_h) / 2};

    Target t;
    t.id = 1;
    t.shape = TargetShape::Disc;
    t.radius = radius;
    t.colour = colour;
    const double x0 = sc.world.home.x + sc.world.view_w / 2.0 + offset_x;
    const double y0 = sc.world.home.y + sc.world.view_h / 2.0 + offset_y;
    t.waypoints.push_back({0, x0, y0});
    if ((vx != 0.0 || vy != 0.0) && frames > 0)
        t.waypoints.push_back({frames, x0 + vx * frames, y0 + vy * frames});
    sc.world.targets.push_back(t);

    sc.state = fit_state(sc.world, gain, deadband);
    return sc;
}

} // namespace skintrack
