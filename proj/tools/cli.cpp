#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "skintrack/detector.hpp"
#include "skintrack/error.hpp"
#include "skintrack/frame.hpp"
#include "skintrack/pantilt.hpp"
#include "skintrack/scene.hpp"
#include "skintrack/segmentation.hpp"
#include "skintrack/skin_mlp.hpp"

namespace skintrack::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_text(const fs::path& path, const std::string& text) {
    write_binary_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text(const fs::path& path) {
    const auto bytes = read_binary_file(path);
    return std::string(bytes.begin(), bytes.end());
}

const auto kEtaRange = CLI::Range(kMinEta, kMaxEta);
const auto kOpenUnit = CLI::Validator(
    [](std::string& s) -> std::string {
        double v = 0;
        if (!CLI::detail::lexical_cast(s, v) || !(v > 0.0 && v < 1.0)) return "must be in (0, 1)";
        return {};
    },
    "in (0,1)");

// --- segment ---------------------------------------------------------------

struct SegmentArgs {
    std::string input;
    int eta = kDefaultEta;
    std::string labels;
    std::string falsecolor;
};

void cmd_segment(const SegmentArgs& a, std::ostream& out) {
    const Frame frame = read_ppm_file(a.input);
    const Segmentation seg = segment(frame, a.eta);
    if (!a.labels.empty()) write_text(a.labels, labels_to_csv(seg));
    if (!a.falsecolor.empty()) write_ppm_file(a.falsecolor, false_colour(seg));
    out << "regions=" << seg.region_count << "\n";
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
    std::string samples;
    std::string negatives;
    int gen_negatives = -1;
    std::string model;
    TrainConfig cfg;
    double rho = kDefaultRho;
};

void cmd_train(const TrainArgs& a, std::ostream& out) {
    std::vector<SkinSample> positives, negatives;
    for (const auto& s : read_samples_file(a.samples)) (s.target == 1 ? positives : negatives).push_back(s);
    std::string negative_source = negatives.empty() ? "none" : "samples file";
    if (!a.negatives.empty()) {
        for (const auto& s : read_samples_file(a.negatives)) {
            if (s.target != 0)
                throw ConfigError(a.negatives + ": negatives file must only contain label 0 rows");
            negatives.push_back(s);
        }
        negative_source = "file";
    }
    int generated = 0;
    if (a.gen_negatives > 0) {
        const auto extra = generate_negatives(positives, a.gen_negatives, a.cfg.seed);
        negatives.insert(negatives.end(), extra.begin(), extra.end());
        generated = a.gen_negatives;
        negative_source = "generated";
    }
    if (positives.empty() || negatives.empty())
        throw ConfigError("training needs both skin (label 1) and non-skin (label 0) samples; a "
                          "skin-only set saturates the network. Pass --negatives <csv> or "
                          "--gen-negatives <n>");

    const auto dataset = interleave_classes(positives, negatives);
    const TrainResult result = train_from_seed(dataset, a.cfg);

    SkinModel model;
    model.net = result.net;
    model.rho = a.rho;
    model.metadata = {
        {"samples", dataset.size()},
        {"positives", positives.size()},
        {"negatives", negatives.size()},
        {"generated_negatives", generated},
        {"negative_source", negative_source},
        {"order", "interleaved"},
        {"seed", a.cfg.seed},
        {"epochs", a.cfg.epochs},
        {"learning_rate", a.cfg.learning_rate},
        {"momentum", a.cfg.momentum},
        {"initial_mse", result.initial_mse},
        {"final_mse", result.mse_history.back()},
    };
    write_model_file(a.model, model);

    std::size_t correct = 0;
    for (const auto& s : dataset)
        correct += classify(model.net, {double(s.rgb.r), double(s.rgb.g), double(s.rgb.b)}, a.rho) ==
                   (s.target == 1);
    out << "samples=" << dataset.size() << "\n";
    out << "mse_initial=" << fmt(result.initial_mse) << "\n";
    out << "mse_first=" << fmt(result.mse_history.front()) << "\n";
    out << "mse_last=" << fmt(result.mse_history.back()) << "\n";
    out << "train_accuracy=" << fmt(static_cast<double>(correct) / static_cast<double>(dataset.size()))
        << "\n";
}

// --- detect ----------------------------------------------------------------

struct DetectArgs {
    std::string input;
    std::string model;
    int eta = kDefaultEta;
    double rho = kDefaultRho;
    bool rho_given = false;
    std::string mask;
    std::string scores;
    std::uint64_t min_region = 1;
};

void cmd_detect(const DetectArgs& a, std::ostream& out) {
    const SkinModel model = read_model_file(a.model);
    const Frame frame = read_ppm_file(a.input);
    DetectOptions opt;
    opt.eta = a.eta;
    opt.rho = a.rho_given ? a.rho : model.rho;
    opt.min_region = a.min_region;
    const Detection det = detect(frame, model.net, opt);

    if (!a.mask.empty()) write_ppm_file(a.mask, mask_to_frame(det.mask));
    if (!a.scores.empty()) write_text(a.scores, scores_to_csv(det));
    out << "regions=" << det.regions.size() << "\n";
    out << "skin_regions=" << det.skin_labels.size() << "\n";
    out << "skin_pixels=" << det.skin_pixel_count << "\n";
    if (det.centroid)
        out << "centroid=" << fmt(det.centroid->x) << "," << fmt(det.centroid->y) << "\n";
    else
        out << "centroid=none\n";
}

// --- track -----------------------------------------------------------------

struct TrackArgs {
    std::string world;
    std::string script;
    std::string model;
    int frames = 100;
    std::string trace;
    int eta = kDefaultEta;
    double rho = kDefaultRho;
    bool rho_given = false;
    int gain = 4;
    int deadband = 4;
    std::vector<int> limits;  // pan_min pan_max tilt_min tilt_max
    std::vector<int> home;
    std::vector<int> view{320, 240};
    std::string dump_frames;
    std::string shape = "disc";
    int radius = 20;
    std::vector<int> size{40, 40};
    std::vector<int> colour{35, 126, 183};
};

void cmd_track(const TrackArgs& a, std::ostream& out) {
    const SkinModel model = read_model_file(a.model);

    Target style;
    style.shape = a.shape == "rect" ? TargetShape::Rect : TargetShape::Disc;
    style.radius = a.radius;
    style.width = a.size[0];
    style.height = a.size[1];
    style.colour = Rgb{static_cast<std::uint8_t>(a.colour[0]), static_cast<std::uint8_t>(a.colour[1]),
                       static_cast<std::uint8_t>(a.colour[2])};

    World world;
    world.image = read_ppm_file(a.world);
    world.view_w = a.view[0];
    world.view_h = a.view[1];
    world.home = a.home.empty() ? Pixel{(world.image.width() - world.view_w) / 2,
                                        (world.image.height() - world.view_h) / 2}
                                : Pixel{a.home[0], a.home[1]};
    try {
        world.targets = targets_from_script_csv(read_text(a.script), style);
    } catch (const ParseError& e) {
        throw ParseError(a.script + ": " + e.what());
    }

    PanTiltState state;
    if (a.limits.empty()) {
        state = fit_state(world, a.gain, a.deadband);
    } else {
        state.pixels_per_step = a.gain;
        state.deadband = a.deadband;
        state.pan_limits = {a.limits[0], a.limits[1]};
        state.tilt_limits = {a.limits[2], a.limits[3]};
    }
    validate_world(world, state);

    DetectOptions opt;
    opt.eta = a.eta;
    opt.rho = a.rho_given ? a.rho : model.rho;

    ViewSink sink;
    if (!a.dump_frames.empty()) {
        fs::create_directories(a.dump_frames);
        sink = [dir = fs::path(a.dump_frames)](int t, const Frame& view) {
            char name[32];
            std::snprintf(name, sizeof name, "view_%05d.ppm", t);
            write_ppm_file(dir / name, view);
        };
    }

    const TrackingRun run = run_tracking(world, model.net, opt, state, a.frames, sink);
    write_text(a.trace, trace_to_csv(run.rows));

    out << "frames=" << run.rows.size() << "\n";
    out << "final_pan=" << run.final_state.pan_steps << "\n";
    out << "final_tilt=" << run.final_state.tilt_steps << "\n";
    const TraceRow& last = run.rows.back();
    if (last.centroid)
        out << "last_centroid=" << fmt(last.centroid->x) << "," << fmt(last.centroid->y) << "\n";
    else
        out << "last_centroid=none\n";
    out << "converged_at=" << (run.converged_at ? std::to_string(*run.converged_at) : "never") << "\n";
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
    std::string reference;
    std::string world;
    std::string script;
    std::vector<int> world_size{960, 720};
    std::vector<int> offset{120, 60};
    std::vector<double> velocity{0.0, 0.0};
    int frames = 100;
};

void cmd_synth(const SynthArgs& a, std::ostream& out) {
    if (!a.reference.empty()) {
        write_ppm_file(a.reference, make_reference_frame());
        out << "reference=" << a.reference << "\n";
    }
    if (!a.world.empty() || !a.script.empty()) {
        const auto sc = make_scenario(a.world_size[0], a.world_size[1], a.offset[0], a.offset[1],
                                      a.velocity[0], a.velocity[1], a.frames);
        if (!a.world.empty()) write_ppm_file(a.world, sc.world.image);
        if (!a.script.empty()) write_text(a.script, script_to_csv(sc.world.targets));
        out << "home=" << sc.world.home.x << "," << sc.world.home.y << "\n";
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Skin-colour region detection and pan/tilt tracking"};
    app.name(args.empty() ? "skintrack" : fs::path(args[0]).filename().string());
    app.require_subcommand(1);

    SegmentArgs seg;
    auto* s = app.add_subcommand("segment", "Region-grow a PPM frame and report the region count");
    s->add_option("--input", seg.input, "Input binary PPM (P6)")->required()->check(CLI::ExistingFile);
    s->add_option("--eta", seg.eta,
                  "Region threshold: max channel difference to the seed must be < eta "
                  "(default 28)")
        ->check(kEtaRange);
    s->add_option("--labels", seg.labels, "Write the label map as x,y,label CSV");
    s->add_option("--falsecolor", seg.falsecolor, "Write a false-colour PPM of the regions");

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train the 3-3-1 skin classifier");
    t->add_option("--samples", tr.samples, "Sample CSV with header r,g,b,label")
        ->required()
        ->check(CLI::ExistingFile);
    auto* neg_file = t->add_option("--negatives", tr.negatives, "Extra non-skin samples (label 0 CSV)")
                         ->check(CLI::ExistingFile);
    auto* neg_gen = t->add_option("--gen-negatives", tr.gen_negatives,
                                  "Generate N uniform random non-skin colours")
                        ->check(CLI::Range(1, 1'000'000));
    neg_file->excludes(neg_gen);
    t->add_option("--model", tr.model, "Output model JSON")->required();
    t->add_option("--lr", tr.cfg.learning_rate, "Learning rate (default 0.6)")
        ->check(CLI::PositiveNumber);
    t->add_option("--momentum", tr.cfg.momentum,
                  "Momentum / acceleration factor in [0,1) (default 0.7)")
        ->check(CLI::Validator(
            [](std::string& v) -> std::string {
                double m = 0;
                if (!CLI::detail::lexical_cast(v, m) || !(m >= 0.0 && m < 1.0)) return "must be in [0, 1)";
                return {};
            },
            "in [0,1)"));
    t->add_option("--epochs", tr.cfg.epochs, "Full passes over the data (default 200)")
        ->check(CLI::Range(1, 100'000'000));
    t->add_option("--seed", tr.cfg.seed,
                  "Seed for weight init and negative generation (default 10)");
    t->add_option("--rho", tr.rho, "Skin threshold stored in the model (default 0.5)")
        ->check(kOpenUnit);

    DetectArgs de;
    auto* d = app.add_subcommand("detect", "Detect skin regions in a PPM frame");
    d->add_option("--input", de.input, "Input binary PPM (P6)")->required()->check(CLI::ExistingFile);
    d->add_option("--model", de.model, "Model JSON from `train`")->required()->check(CLI::ExistingFile);
    d->add_option("--eta", de.eta, "Region threshold (default 28)")
        ->check(kEtaRange);
    auto* d_rho = d->add_option("--rho", de.rho,
                                "Skin iff network output > rho (default: the model's rho, 0.5)")
                      ->check(kOpenUnit);
    d->add_option("--mask", de.mask, "Write the skin mask as PPM (white = skin)");
    d->add_option("--scores", de.scores, "Write per-region scores CSV");
    d->add_option("--min-region", de.min_region,
                  "Regions smaller than this are never skin (default 1, i.e. no filter)")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));

    TrackArgs tk;
    auto* k = app.add_subcommand("track", "Run the simulated pan/tilt tracking loop");
    k->add_option("--world", tk.world, "World image PPM")->required()->check(CLI::ExistingFile);
    k->add_option("--script", tk.script, "Motion script CSV frame,target_id,x,y")
        ->required()
        ->check(CLI::ExistingFile);
    k->add_option("--model", tk.model, "Model JSON from `train`")->required()->check(CLI::ExistingFile);
    k->add_option("--frames", tk.frames, "Frames to simulate")->required()->check(CLI::Range(1, 10'000'000));
    k->add_option("--trace", tk.trace, "Output trace CSV")->required();
    k->add_option("--eta", tk.eta, "Region threshold (default 28)")
        ->check(kEtaRange);
    auto* k_rho = k->add_option("--rho", tk.rho, "Skin threshold (default: the model's rho, 0.5)")
                      ->check(kOpenUnit);
    k->add_option("--gain", tk.gain, "View pixels per motor step (default 4)")
        ->check(CLI::Range(1, 100'000));
    k->add_option("--deadband", tk.deadband, "No step while |displacement| <= deadband (default 4)")
        ->check(CLI::Range(0, 100'000));
    k->add_option("--limits", tk.limits,
                  "Step limits PAN_MIN,PAN_MAX,TILT_MIN,TILT_MAX (default: widest that keep the view "
                  "inside the world)")
        ->expected(4)
        ->delimiter(',');
    k->add_option("--home", tk.home, "Top-left of the zero-step view X,Y (default: world centre)")
        ->expected(2)
        ->delimiter(',');
    k->add_option("--view", tk.view, "View size W,H (default 320,240)")
        ->expected(2)
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    k->add_option("--dump-frames", tk.dump_frames, "Directory for numbered per-frame view PPMs");
    k->add_option("--target-shape", tk.shape, "Scripted target shape (default disc)")
        ->check(CLI::IsMember({"disc", "rect"}));
    k->add_option("--target-radius", tk.radius, "Disc radius in pixels (default 20)")
        ->check(CLI::Range(0, 100'000));
    k->add_option("--target-size", tk.size, "Rect size W,H (default 40,40)")
        ->expected(2)
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    k->add_option("--target-colour", tk.colour, "Target colour R,G,B (default 35,126,183)")
        ->expected(3)
        ->delimiter(',')
        ->check(CLI::Range(0, 255));

    SynthArgs sy;
    auto* y = app.add_subcommand("synth", "Write synthetic fixtures: reference frame, tracking world");
    y->add_option("--reference", sy.reference, "Write the 320x240 reference frame PPM");
    y->add_option("--world", sy.world, "Write a tracking world PPM");
    y->add_option("--script", sy.script, "Write the matching motion script CSV");
    y->add_option("--world-size", sy.world_size, "World size W,H (default 960,720)")
        ->expected(2)
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    y->add_option("--offset", sy.offset, "Initial target offset from the home view centre (default 120,60)")
        ->expected(2)
        ->delimiter(',');
    y->add_option("--velocity", sy.velocity, "Target velocity in px/frame VX,VY (default 0,0)")
        ->expected(2)
        ->delimiter(',');
    y->add_option("--frames", sy.frames, "Length of the scripted motion (default 100)")
        ->check(CLI::Range(1, 10'000'000));

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*s) cmd_segment(seg, out);
        if (*t) cmd_train(tr, out);
        if (*d) {
            de.rho_given = d_rho->count() > 0;
            cmd_detect(de, out);
        }
        if (*k) {
            tk.rho_given = k_rho->count() > 0;
            cmd_track(tk, out);
        }
        if (*y) cmd_synth(sy, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace skintrack::cli
