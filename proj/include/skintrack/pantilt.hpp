#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skintrack/detector.hpp"
#include "skintrack/frame.hpp"
#include "skintrack/skin_mlp.hpp"

namespace skintrack {

// Simulated pan/tilt head.
//
// The camera sees a view_w x view_h window of a larger world image. The
// window's top-left corner sits at
//
//     home + (pan_steps * pixels_per_step, tilt_steps * pixels_per_step)
//
//          world x ->
//     +--------------------------------------+
//     |  home                                |
//     |   +--------+   pan +1: window moves  |
//     |   | view   |-->  +s in x, so targets |
//     |   |        |     drift -s on screen  |
//     |   +--------+                         |
//     |       | tilt +1: window moves +s in y|
//     |       v                              |
//     +--------------------------------------+
//
// A target right of centre (dx > 0) is followed by stepping pan +1; a
// target below centre (dy > 0) by stepping tilt +1.

struct StepLimits {
    int min = -1000;
    int max = 1000;

    friend bool operator==(const StepLimits&, const StepLimits&) = default;
};

struct PanTiltState {
    int pan_steps = 0;
    int tilt_steps = 0;
    StepLimits pan_limits;
    StepLimits tilt_limits;
    int pixels_per_step = 4;
    int deadband = 4;

    friend bool operator==(const PanTiltState&, const PanTiltState&) = default;
};

/// Throws ConfigError when limits are inverted, steps sit outside them,
/// the gain is below 1 or the deadband negative.
void validate_state(const PanTiltState& state);

struct Displacement {
    double dx = 0.0;
    double dy = 0.0;
};

/// Signed offset of a centroid from the view centre (view_w / 2, view_h / 2).
Displacement displacement(const Point2d& centroid, int view_w, int view_h);

/// One unit step per axis toward the sign of the displacement when its
/// magnitude exceeds the deadband, clamped to the limits.
PanTiltState step(const PanTiltState& state, const Displacement& d);

enum class TargetShape { Disc, Rect };

struct Waypoint {
    int frame = 0;
    double x = 0.0;  // world coordinates of the target centre
    double y = 0.0;
};

struct Target {
    int id = 0;
    TargetShape shape = TargetShape::Disc;
    int radius = 20;  // Disc
    int width = 40;   // Rect
    int height = 40;  // Rect
    Rgb colour{35, 126, 183};
    std::vector<Waypoint> waypoints;  // ascending frame, non-empty

    /// Linear interpolation between waypoints, held constant outside them.
    Point2d position_at(int frame_index) const;
    /// Rasterizes the target at frame_index, calling paint(x, y) per pixel
    /// in world coordinates (unclipped).
    void rasterize(int frame_index, const std::function<void(int, int)>& paint) const;
};

struct World {
    Frame image;
    int view_w = 320;
    int view_h = 240;
    Pixel home;
    std::vector<Target> targets;
};

/// Throws ConfigError when any view window reachable under the state's
/// limits and gain leaves the world image.
void validate_world(const World& world, const PanTiltState& state);

/// Top-left of the view window in world coordinates.
Pixel view_origin(const World& world, const PanTiltState& state);

/// Targets composited at frame_index (in list order), then cropped to the
/// view window.
Frame render_view(const World& world, const PanTiltState& state, int frame_index);

struct TraceRow {
    int frame_index = 0;
    int pan_steps = 0;   // state the frame was rendered with
    int tilt_steps = 0;
    std::optional<Point2d> centroid;
    std::optional<Displacement> d;
    std::uint64_t skin_pixel_count = 0;
    bool stepped = false;  // whether this frame issued a step
};

struct TrackingRun {
    std::vector<TraceRow> rows;
    PanTiltState final_state;
    /// First frame index from which no step occurs through the end of the
    /// run; nullopt when the last frame still stepped.
    std::optional<int> converged_at;
};

using ViewSink = std::function<void(int frame_index, const Frame& view)>;

/// Closed loop: render -> detect -> displacement -> step, once per frame.
/// Frames without a centroid hold the current state.
TrackingRun run_tracking(const World& world, const Mlp& net, const DetectOptions& options,
                         const PanTiltState& state0, int frames, const ViewSink& sink = {});

/// `frame,pan_steps,tilt_steps,mu_x,mu_y,dx,dy,skin_pixels`; an absent
/// centroid leaves mu and d fields empty.
std::string trace_to_csv(const std::vector<TraceRow>& rows);

/// Parses `frame,target_id,x,y` rows. Each target id becomes a Target
/// copied from `style`, with waypoints sorted by frame.
std::vector<Target> targets_from_script_csv(const std::string& text, const Target& style);
std::string script_to_csv(const std::vector<Target>& targets);

} // namespace skintrack
