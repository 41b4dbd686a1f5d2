#pragma once

// Deterministic synthetic imagery for demos, fixtures and tests.

#include <cstdint>
#include <vector>

#include "skintrack/frame.hpp"
#include "skintrack/pantilt.hpp"
#include "skintrack/skin_mlp.hpp"

namespace skintrack {

/// The eight skin colours of the reference skin database, label 1.
std::vector<SkinSample> skin_samples();

/// skin_samples() interleaved with `negatives` generated colours drawn
/// with generate_negatives(..., seed).
std::vector<SkinSample> reference_training_set(std::uint64_t seed, int negatives = 42);

/// Non-skin colours used to paint synthetic backdrops.
const std::vector<Rgb>& backdrop_palette();

/// Tiles of backdrop_palette colours with +/-`noise` per-channel jitter.
/// With noise below eta / 2 every tile segments as a single region.
Frame make_backdrop(int width, int height, int tile, int noise, std::uint64_t seed);

/// A 320x240 cluttered scene: backdrop, gradient band, and two skin blobs.
Frame make_reference_frame();

/// Widest step limits whose reachable view windows stay inside the world.
PanTiltState fit_state(const World& world, int pixels_per_step, int deadband);

struct TrackingScenario {
    World world;
    PanTiltState state;
};

/// A world with one skin disc of `radius`, initially centred in the home
/// view plus (offset_x, offset_y), moving by (vx, vy) pixels per frame.
/// The home view sits in the middle of the world image.
TrackingScenario make_scenario(int world_w, int world_h, int offset_x, int offset_y, double vx,
                               double vy, int frames, int radius = 20, Rgb colour = {35, 126, 183},
                               int gain = 4, int deadband = 4);

} // namespace skintrack
