#include "skintrack/pantilt.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "csv.hpp"
#include "skintrack/error.hpp"

namespace skintrack {

namespace {

int step_axis(int steps, const StepLimits& limits, double d, int deadband) {
    if (std::abs(d) <= static_cast<double>(deadband)) return steps;
    const int next = steps + (d > 0.0 ? 1 : -1);
    return std::clamp(next, limits.min, limits.max);
}

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

std::string range_text(long long lo, long long hi) {
    return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

} // namespace

void validate_state(const PanTiltState& s) {
    if (s.pan_limits.min > s.pan_limits.max) throw ConfigError("pan limits are inverted");
    if (s.tilt_limits.min > s.tilt_limits.max) throw ConfigError("tilt limits are inverted");
    if (s.pan_steps < s.pan_limits.min || s.pan_steps > s.pan_limits.max)
        throw ConfigError("pan_steps " + std::to_string(s.pan_steps) + " outside limits " +
                          range_text(s.pan_limits.min, s.pan_limits.max));
    if (s.tilt_steps < s.tilt_limits.min || s.tilt_steps > s.tilt_limits.max)
        throw ConfigError("tilt_steps " + std::to_string(s.tilt_steps) + " outside limits " +
                          range_text(s.tilt_limits.min, s.tilt_limits.max));
    if (s.pixels_per_step < 1) throw ConfigError("pixels_per_step (gain) must be at least 1");
    if (s.deadband < 0) throw ConfigError("deadband must be non-negative");
}

Displacement displacement(const Point2d& c, int view_w, int view_h) {
    return Displacement{c.x - view_w / 2.0, c.y - view_h / 2.0};
}

PanTiltState step(const PanTiltState& state, const Displacement& d) {
    PanTiltState next = state;
    next.pan_steps = step_axis(state.pan_steps, state.pan_limits, d.dx, state.deadband);
    next.tilt_steps = step_axis(state.tilt_steps, state.tilt_limits, d.dy, state.deadband);
    return next;
}

Point2d Target::position_at(int frame_index) const {
    if (waypoints.empty()) throw ConfigError("target " + std::to_string(id) + " has no waypoints");
    if (frame_index <= waypoints.front().frame) return {waypoints.front().x, waypoints.front().y};
    if (frame_index >= waypoints.back().frame) return {waypoints.back().x, waypoints.back().y};
    const auto next = std::upper_bound(waypoints.begin(), waypoints.end(), frame_index,
                                       [](int f, const Waypoint& w) { return f < w.frame; });
    const Waypoint& b = *next;
    const Waypoint& a = *(next - 1);
    const double t = static_cast<double>(frame_index - a.frame) / static_cast<double>(b.frame - a.frame);
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

void Target::rasterize(int frame_index, const std::function<void(int, int)>& paint) const {
    const Point2d c = position_at(frame_index);
    const int cx = round_half_up(c.x);
    const int cy = round_half_up(c.y);
    switch (shape) {
    case TargetShape::Disc: {
        const int r2 = radius * radius;
        for (int dy = -radius; dy <= radius; ++dy)
            for (int dx = -radius; dx <= radius; ++dx)
                if (dx * dx + dy * dy <= r2) paint(cx + dx, cy + dy);
        break;
    }
    case TargetShape::Rect: {
        const int left = cx - width / 2;
        const int top = cy - height / 2;
        for (int y = top; y < top + height; ++y)
            for (int x = left; x < left + width; ++x) paint(x, y);
        break;
    }
    }
}

void validate_world(const World& world, const PanTiltState& state) {
    validate_state(state);
    if (world.image.empty()) throw ConfigError("world image is empty");
    if (world.view_w <= 0 || world.view_h <= 0) throw ConfigError("view dimensions must be positive");
    for (const Target& t : world.targets) {
        if (t.waypoints.empty()) throw ConfigError("target " + std::to_string(t.id) + " has no waypoints");
        if (t.shape == TargetShape::Disc && t.radius < 0)
            throw ConfigError("target " + std::to_string(t.id) + " has a negative radius");
        if (t.shape == TargetShape::Rect && (t.width <= 0 || t.height <= 0))
            throw ConfigError("target " + std::to_string(t.id) + " has a non-positive size");
    }

    const long long s = state.pixels_per_step;
    const long long x_lo = world.home.x + state.pan_limits.min * s;
    const long long x_hi = world.home.x + state.pan_limits.max * s + world.view_w;
    const long long y_lo = world.home.y + state.tilt_limits.min * s;
    const long long y_hi = world.home.y + state.tilt_limits.max * s + world.view_h;
    if (x_lo < 0 || x_hi > world.image.width() || y_lo < 0 || y_hi > world.image.height())
        throw ConfigError("reachable view envelope x" + range_text(x_lo, x_hi) + " y" +
                          range_text(y_lo, y_hi) + " exceeds the " +
                          std::to_string(world.image.width()) + "x" +
                          std::to_string(world.image.height()) + " world image");
}

Pixel view_origin(const World& world, const PanTiltState& state) {
    return Pixel{world.home.x + state.pan_steps * state.pixels_per_step,
                 world.home.y + state.tilt_steps * state.pixels_per_step};
}

Frame render_view(const World& world, const PanTiltState& state, int frame_index) {
    const Pixel o = view_origin(world, state);
    Frame view = world.image.crop(o.x, o.y, world.view_w, world.view_h);
    // Same result as compositing onto the whole world, then cropping.
    for (const Target& t : world.targets)
        t.rasterize(frame_index, [&](int wx, int wy) {
            const int x = wx - o.x;
            const int y = wy - o.y;
            if (view.contains(x, y) && world.image.contains(wx, wy)) view.at(x, y) = t.colour;
        });
    return view;
}

TrackingRun run_tracking(const World& world, const Mlp& net, const DetectOptions& options,
                         const PanTiltState& state0, int frames, const ViewSink& sink) {
    validate_world(world, state0);
    validate_rho(options.rho);
    if (frames < 1) throw ConfigError("frames must be at least 1");

    TrackingRun run;
    run.rows.reserve(static_cast<std::size_t>(frames));
    PanTiltState state = state0;
    int last_step = -1;
    for (int t = 0; t < frames; ++t) {
        const Frame view = render_view(world, state, t);
        if (sink) sink(t, view);
        const Detection det = detect(view, net, options);

        TraceRow row;
        row.frame_index = t;
        row.pan_steps = state.pan_steps;
        row.tilt_steps = state.tilt_steps;
        row.centroid = det.centroid;
        row.skin_pixel_count = det.skin_pixel_count;
        if (det.centroid) {
            row.d = displacement(*det.centroid, world.view_w, world.view_h);
            const PanTiltState next = step(state, *row.d);
            row.stepped = next != state;
            state = next;
        }
        if (row.stepped) last_step = t;
        run.rows.push_back(row);
    }
    run.final_state = state;
    if (last_step < frames - 1) run.converged_at = last_step + 1;
    return run;
}

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
    std::string out = "frame,pan_steps,tilt_steps,mu_x,mu_y,dx,dy,skin_pixels\n";
    for (const TraceRow& r : rows) {
        out += std::to_string(r.frame_index) + "," + std::to_string(r.pan_steps) + "," +
               std::to_string(r.tilt_steps) + ",";
        if (r.centroid)
            out += csv::format_double(r.centroid->x) + "," + csv::format_double(r.centroid->y) + ",";
        else
            out += ",,";
        if (r.d)
            out += csv::format_double(r.d->dx) + "," + csv::format_double(r.d->dy) + ",";
        else
            out += ",,";
        out += std::to_string(r.skin_pixel_count) + "\n";
    }
    return out;
}

std::vector<Target> targets_from_script_csv(const std::string& text, const Target& style) {
    std::map<int, Target> by_id;
    for (const auto& row : csv::parse(text, "frame,target_id,x,y")) {
        const long frame = csv::to_long(row, 0, "frame");
        const long id = csv::to_long(row, 1, "target_id");
        if (frame < 0) throw ParseError("line " + std::to_string(row.line) + ": frame must be non-negative");
        auto [it, inserted] = by_id.try_emplace(static_cast<int>(id), style);
        if (inserted) {
            it->second.id = static_cast<int>(id);
            it->second.waypoints.clear();
        }
        it->second.waypoints.push_back(
            Waypoint{static_cast<int>(frame), csv::to_double(row, 2, "x"), csv::to_double(row, 3, "y")});
    }
    std::vector<Target> out;
    for (auto& [id, target] : by_id) {
        auto& wps = target.waypoints;
        std::stable_sort(wps.begin(), wps.end(),
                         [](const Waypoint& a, const Waypoint& b) { return a.frame < b.frame; });
        for (std::size_t i = 1; i < wps.size(); ++i)
            if (wps[i].frame == wps[i - 1].frame)
                throw ParseError("target " + std::to_string(id) + " lists frame " +
                                 std::to_string(wps[i].frame) + " twice");
        out.push_back(std::move(target));
    }
    return out;
}

std::string script_to_csv(const std::vector<Target>& targets) {
    std::string out = "frame,target_id,x,y\n";
    for (const Target& t : targets)
        for (const Waypoint& w : t.waypoints)
            out += std::to_string(w.frame) + "," + std::to_string(t.id) + "," + csv::format_double(w.x) +
                   "," + csv::format_double(w.y) + "\n";
    return out;
}

} // namespace skintrack
