#include <gtest/gtest.h>

#include <cmath>

#include "skintrack/error.hpp"
#include "skintrack/pantilt.hpp"
#include "skintrack/scene.hpp"

using namespace skintrack;

namespace {

const Mlp& trained_net() {
    static const Mlp net = train_from_seed(reference_training_set(kDefaultSeed), TrainConfig{}).net;
    return net;
}

PanTiltState free_state(int deadband = 4) {
    PanTiltState s;
    s.pan_limits = {-10, 10};
    s.tilt_limits = {-10, 10};
    s.deadband = deadband;
    return s;
}

} // namespace

TEST(Displacement, SignedOffsetFromViewCentre) {
    auto d = displacement({160, 120}, 320, 240);
    EXPECT_EQ(d.dx, 0.0);
    EXPECT_EQ(d.dy, 0.0);
    d = displacement({200, 150}, 320, 240);
    EXPECT_EQ(d.dx, 40.0);
    EXPECT_EQ(d.dy, 30.0);
    d = displacement({0, 0}, 320, 240);
    EXPECT_EQ(d.dx, -160.0);
    EXPECT_EQ(d.dy, -120.0);
}

TEST(Step, OneUnitTowardTheTarget) {
    const PanTiltState s = free_state();
    const PanTiltState n = step(s, {40, 0});
    EXPECT_EQ(n.pan_steps, 1);
    EXPECT_EQ(n.tilt_steps, 0);
    const PanTiltState m = step(s, {-300, -4.5});
    EXPECT_EQ(m.pan_steps, -1);
    EXPECT_EQ(m.tilt_steps, -1);
}

TEST(Step, HoldsInsideDeadband) {
    const PanTiltState s = free_state();
    EXPECT_EQ(step(s, {4, -4}), s);
    EXPECT_EQ(step(s, {0.5, 3.99}), s);
    EXPECT_NE(step(s, {4.01, 0}), s);
}

TEST(Step, ClampsAtLimits) {
    PanTiltState s = free_state();
    s.pan_steps = s.pan_limits.max;
    s.tilt_steps = s.tilt_limits.min;
    EXPECT_EQ(step(s, {100, -100}), s);
}

TEST(Step, AxesAreIndependent) {
    PanTiltState s = free_state();
    for (double dx : {-50.0, -5.0, 0.0, 5.0, 50.0}) EXPECT_EQ(step(s, {dx, 0}).tilt_steps, s.tilt_steps);
    for (double dy : {-50.0, -5.0, 0.0, 5.0, 50.0}) EXPECT_EQ(step(s, {0, dy}).pan_steps, s.pan_steps);
}

TEST(State, Validation) {
    PanTiltState s = free_state();
    EXPECT_NO_THROW(validate_state(s));
    s.pixels_per_step = 0;
    EXPECT_THROW(validate_state(s), ConfigError);
    s = free_state();
    s.deadband = -1;
    EXPECT_THROW(validate_state(s), ConfigError);
    s = free_state();
    s.pan_steps = 11;
    EXPECT_THROW(validate_state(s), ConfigError);
    s = free_state();
    s.tilt_limits = {3, 2};
    EXPECT_THROW(validate_state(s), ConfigError);
}

TEST(Target, InterpolatesLinearlyAndHoldsOutsideWaypoints) {
    Target t;
    t.waypoints = {{10, 0.0, 0.0}, {20, 10.0, -20.0}, {30, 10.0, 0.0}};
    EXPECT_EQ(t.position_at(0), (Point2d{0, 0}));
    EXPECT_EQ(t.position_at(15), (Point2d{5, -10}));
    EXPECT_EQ(t.position_at(20), (Point2d{10, -20}));
    EXPECT_EQ(t.position_at(25), (Point2d{10, -10}));
    EXPECT_EQ(t.position_at(99), (Point2d{10, 0}));
}

TEST(Target, RasterShapes) {
    Target disc;
    disc.radius = 2;
    disc.waypoints = {{0, 10.0, 10.0}};
    int n = 0;
    double sx = 0, sy = 0;
    disc.rasterize(0, [&](int x, int y) {
        ++n;
        sx += x;
        sy += y;
    });
    EXPECT_EQ(n, 13);
    EXPECT_EQ(sx / n, 10.0);
    EXPECT_EQ(sy / n, 10.0);

    Target rect;
    rect.shape = TargetShape::Rect;
    rect.width = 10;
    rect.height = 10;
    rect.waypoints = {{0, 160.0, 120.0}};
    int lo_x = 1000, hi_x = -1;
    rect.rasterize(0, [&](int x, int) {
        lo_x = std::min(lo_x, x);
        hi_x = std::max(hi_x, x);
    });
    EXPECT_EQ(lo_x, 155);
    EXPECT_EQ(hi_x, 164);
}

TEST(World, RejectsUnreachableEnvelope) {
    World w;
    w.image = Frame(400, 300);
    w.home = {40, 30};
    PanTiltState s;
    s.pan_limits = {-10, 10};
    s.tilt_limits = {-7, 7};
    EXPECT_NO_THROW(validate_world(w, s));
    s.pan_limits = {-11, 10};
    EXPECT_THROW(validate_world(w, s), ConfigError);
    s.pan_limits = {-10, 11};
    EXPECT_THROW(validate_world(w, s), ConfigError);
    s.pan_limits = {-10, 10};
    s.tilt_limits = {-7, 8};
    EXPECT_THROW(validate_world(w, s), ConfigError);
}

TEST(World, FitStateIsWidestValidEnvelope) {
    World w;
    w.image = Frame(961, 723);
    w.home = {321, 241};
    const PanTiltState s = fit_state(w, 4, 4);
    EXPECT_NO_THROW(validate_world(w, s));
    PanTiltState wider = s;
    ++wider.pan_limits.max;
    EXPECT_THROW(validate_world(w, wider), ConfigError);
    wider = s;
    --wider.tilt_limits.min;
    EXPECT_THROW(validate_world(w, wider), ConfigError);
}

TEST(RenderView, CropsAtHomePlusGainTimesSteps) {
    World w;
    w.image = make_backdrop(480, 360, 16, 10, 5);
    w.home = {80, 60};
    PanTiltState s = fit_state(w, 4, 4);
    EXPECT_EQ(render_view(w, s, 0), w.image.crop(80, 60, 320, 240));
    s.pan_steps = 1;
    EXPECT_EQ(render_view(w, s, 0), w.image.crop(84, 60, 320, 240));
    s.tilt_steps = -2;
    EXPECT_EQ(render_view(w, s, 0), w.image.crop(84, 52, 320, 240));
}

TEST(RenderView, CompositesTargetsAndIsDeterministic) {
    const auto sc = make_scenario(960, 720, 0, 0, 1.0, 0.0, 50);
    const Frame a = render_view(sc.world, sc.state, 7);
    EXPECT_EQ(a, render_view(sc.world, sc.state, 7));
    // Disc centre at view (160 + 7, 120).
    EXPECT_EQ(a.at(167, 120), sc.world.targets[0].colour);
    EXPECT_NE(a, render_view(sc.world, sc.state, 8));
}

TEST(Tracking, CentredStaticTargetNeverSteps) {
    const auto sc = make_scenario(960, 720, 0, 0, 0, 0, 0);
    const TrackingRun run = run_tracking(sc.world, trained_net(), {}, sc.state, 20);
    for (const auto& r : run.rows) {
        EXPECT_FALSE(r.stepped);
        EXPECT_EQ(r.pan_steps, 0);
        EXPECT_EQ(r.tilt_steps, 0);
    }
    EXPECT_EQ(run.converged_at, 0);
}

TEST(Tracking, StaticOffsetConvergesInClosedFormSteps) {
    const auto sc = make_scenario(960, 720, 40, 0, 0, 0, 0);
    const TrackingRun run = run_tracking(sc.world, trained_net(), {}, sc.state, 30);
    // ceil((40 - 4) / 4) = 9 steps, one per frame.
    for (int t = 0; t <= 9; ++t) EXPECT_EQ(run.rows[t].pan_steps, t);
    for (int t = 9; t < 30; ++t) EXPECT_EQ(run.rows[t].pan_steps, 9);
    EXPECT_EQ(run.converged_at, 9);
    ASSERT_TRUE(run.rows.back().d.has_value());
    EXPECT_LE(std::abs(run.rows.back().d->dx), 4.0);
}

TEST(Tracking, HoldsWhenNothingIsDetected) {
    auto sc = make_scenario(960, 720, 60, 60, 0, 0, 0);
    sc.world.targets.clear();
    const TrackingRun run = run_tracking(sc.world, trained_net(), {}, sc.state, 10);
    for (const auto& r : run.rows) {
        EXPECT_FALSE(r.centroid.has_value());
        EXPECT_EQ(r.pan_steps, 0);
        EXPECT_EQ(r.tilt_steps, 0);
    }
    EXPECT_EQ(run.converged_at, 0);
}

TEST(Tracking, ReportsNeverWhenStillSteppingAtTheEnd) {
    const auto sc = make_scenario(960, 720, 100, 0, 0, 0, 0);
    const TrackingRun run = run_tracking(sc.world, trained_net(), {}, sc.state, 5);
    EXPECT_FALSE(run.converged_at.has_value());
}

TEST(Tracking, ClampedAxisDoesNotCountAsAStep) {
    auto sc = make_scenario(960, 720, 100, 0, 0, 0, 0);
    sc.state.pan_limits = {0, 0};
    const TrackingRun run = run_tracking(sc.world, trained_net(), {}, sc.state, 5);
    EXPECT_EQ(run.converged_at, 0);
}

TEST(Tracking, IsDeterministic) {
    const auto sc = make_scenario(960, 720, -70, 35, 0.5, -0.25, 60);
    const auto a = run_tracking(sc.world, trained_net(), {}, sc.state, 60);
    const auto b = run_tracking(sc.world, trained_net(), {}, sc.state, 60);
    EXPECT_EQ(trace_to_csv(a.rows), trace_to_csv(b.rows));
}

TEST(Trace, CsvLeavesAbsentCentroidFieldsEmpty) {
    TraceRow with;
    with.frame_index = 0;
    with.centroid = Point2d{164, 124};
    with.d = Displacement{4, 4};
    with.skin_pixel_count = 1257;
    TraceRow without;
    without.frame_index = 1;
    without.pan_steps = -2;
    const std::string csv = trace_to_csv({with, without});
    EXPECT_EQ(csv,
              "frame,pan_steps,tilt_steps,mu_x,mu_y,dx,dy,skin_pixels\n"
              "0,0,0,164,124,4,4,1257\n"
              "1,-2,0,,,,,0\n");
}

TEST(Script, ParsesGroupsAndSortsWaypoints) {
    Target style;
    style.radius = 7;
    const auto targets = targets_from_script_csv(
        "frame,target_id,x,y\n10,2,5,5\n0,1,1.5,2\n0,2,0,0\n20,1,3,4\n", style);
    ASSERT_EQ(targets.size(), 2u);
    EXPECT_EQ(targets[0].id, 1);
    EXPECT_EQ(targets[0].radius, 7);
    EXPECT_EQ(targets[1].waypoints.front().frame, 0);
    EXPECT_EQ(targets_from_script_csv(script_to_csv(targets), style)[0].waypoints.size(), 2u);
    EXPECT_THROW(targets_from_script_csv("frame,target_id,x,y\n0,1,0,0\n0,1,2,2\n", style), ParseError);
    EXPECT_THROW(targets_from_script_csv("frame,target_id,x,y\n-1,1,0,0\n", style), ParseError);
    EXPECT_THROW(targets_from_script_csv("frame,id,x,y\n", style), ParseError);
}
