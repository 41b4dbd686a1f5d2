#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "skintrack/detector.hpp"
#include "skintrack/error.hpp"
#include "skintrack/frame.hpp"
#include "skintrack/pantilt.hpp"
#include "skintrack/scene.hpp"
#include "skintrack/segmentation.hpp"
#include "skintrack/skin_mlp.hpp"

namespace py = pybind11;
using namespace skintrack;

namespace {

using Image = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Frame to_frame(const Image& image) {
    if (image.ndim() != 3 || image.shape(2) != 3)
        throw ConfigError("expected an HxWx3 uint8 array");
    const int h = static_cast<int>(image.shape(0));
    const int w = static_cast<int>(image.shape(1));
    std::vector<Rgb> pixels(static_cast<std::size_t>(w) * h);
    static_assert(sizeof(Rgb) == 3);
    std::memcpy(pixels.data(), image.data(), pixels.size() * 3);
    return Frame(w, h, std::move(pixels));
}

py::array_t<std::uint8_t> to_array(const Frame& frame) {
    py::array_t<std::uint8_t> out({frame.height(), frame.width(), 3});
    std::memcpy(out.mutable_data(), frame.pixels().data(), frame.size() * 3);
    return out;
}

py::array_t<std::uint32_t> labels_array(const Segmentation& s) {
    py::array_t<std::uint32_t> out({s.height, s.width});
    std::memcpy(out.mutable_data(), s.labels.data(), s.labels.size() * sizeof(std::uint32_t));
    return out;
}

Segmentation from_labels(const py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast>& labels) {
    if (labels.ndim() != 2) throw ConfigError("expected an HxW label array");
    Segmentation s;
    s.height = static_cast<int>(labels.shape(0));
    s.width = static_cast<int>(labels.shape(1));
    s.labels.assign(labels.data(), labels.data() + labels.size());
    std::uint32_t k = 0;
    for (std::uint32_t l : s.labels) k = std::max(k, l);
    s.region_count = k;
    return s;
}

std::vector<SkinSample> to_samples(const py::iterable& rows) {
    std::vector<SkinSample> out;
    for (const auto& row : rows) {
        const auto t = row.cast<std::array<int, 4>>();
        for (int i = 0; i < 3; ++i)
            if (t[i] < 0 || t[i] > 255) throw ConfigError("sample channel out of 0..255");
        if (t[3] != 0 && t[3] != 1) throw ConfigError("sample label must be 0 or 1");
        out.push_back({Rgb{static_cast<std::uint8_t>(t[0]), static_cast<std::uint8_t>(t[1]),
                           static_cast<std::uint8_t>(t[2])},
                       t[3]});
    }
    return out;
}

py::list from_samples(const std::vector<SkinSample>& samples) {
    py::list out;
    for (const auto& s : samples) out.append(py::make_tuple(s.rgb.r, s.rgb.g, s.rgb.b, s.target));
    return out;
}

py::dict params_dict(const MlpParams& p) {
    py::dict d;
    d["w_ih"] = p.w_ih;
    d["b_h"] = p.b_h;
    d["w_ho"] = p.w_ho;
    d["b_o"] = p.b_o;
    return d;
}

py::object optional_point(const std::optional<Point2d>& p) {
    if (!p) return py::none();
    return py::make_tuple(p->x, p->y);
}

py::dict detection_dict(const Detection& d) {
    py::dict out;
    out["centroid"] = optional_point(d.centroid);
    out["skin_labels"] = d.skin_labels;
    out["skin_pixels"] = d.skin_pixel_count;
    out["regions"] = d.regions.size();
    out["scores"] = d.scores;
    py::array_t<bool> mask({d.mask.height, d.mask.width});
    auto* m = mask.mutable_data();
    for (std::size_t i = 0; i < d.mask.bits.size(); ++i) m[i] = d.mask.bits[i] != 0;
    out["mask"] = mask;
    return out;
}

py::dict run_dict(const TrackingRun& run) {
    py::list rows;
    for (const auto& r : run.rows) {
        py::dict row;
        row["frame"] = r.frame_index;
        row["pan_steps"] = r.pan_steps;
        row["tilt_steps"] = r.tilt_steps;
        row["centroid"] = optional_point(r.centroid);
        row["d"] = r.d ? py::object(py::make_tuple(r.d->dx, r.d->dy)) : py::none();
        row["skin_pixels"] = r.skin_pixel_count;
        row["stepped"] = r.stepped;
        rows.append(row);
    }
    py::dict out;
    out["rows"] = rows;
    out["final_pan"] = run.final_state.pan_steps;
    out["final_tilt"] = run.final_state.tilt_steps;
    out["converged_at"] = run.converged_at ? py::object(py::int_(*run.converged_at)) : py::none();
    out["trace_csv"] = trace_to_csv(run.rows);
    return out;
}

DetectOptions options(int eta, std::optional<double> rho, const SkinModel& model, std::uint64_t min_region) {
    DetectOptions o;
    o.eta = eta;
    o.rho = rho.value_or(model.rho);
    o.min_region = min_region;
    return o;
}

} // namespace

PYBIND11_MODULE(_skintrack, m) {
    m.doc() = "Skin-region detection and pan/tilt tracking simulator";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<SchemaError>(m, "SchemaError", base.ptr());

    m.attr("DEFAULT_ETA") = kDefaultEta;
    m.attr("DEFAULT_RHO") = kDefaultRho;
    m.attr("DEFAULT_SEED") = kDefaultSeed;

    // --- frames ---------------------------------------------------------------
    m.def("read_ppm", [](const std::filesystem::path& p) { return to_array(read_ppm_file(p)); }, py::arg("path"));
    m.def("write_ppm", [](const std::filesystem::path& p, const Image& img) { write_ppm_file(p, to_frame(img)); },
          py::arg("path"), py::arg("image"));
    m.def("decode_ppm", [](const py::bytes& b) {
        const std::string s = b;
        return to_array(load_ppm(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size())));
    });
    m.def("encode_ppm", [](const Image& img) {
        const auto bytes = save_ppm(to_frame(img));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    });
    m.def("false_colour", [](const py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast>& labels) {
        return to_array(false_colour(from_labels(labels)));
    });
    m.def("reference_frame", [] { return to_array(make_reference_frame()); });

    // --- segmentation ---------------------------------------------------------
    m.def(
        "segment", [](const Image& img, int eta) { return labels_array(segment(to_frame(img), eta)); },
        py::arg("image"), py::arg("eta") = kDefaultEta,
        "4-connected region growing; returns an HxW uint32 label map numbered 1..K in scan order.");
    m.def(
        "region_stats",
        [](const Image& img, int eta) {
            const Frame f = to_frame(img);
            py::list out;
            for (const auto& r : region_stats(segment(f, eta), f)) {
                py::dict d;
                d["label"] = r.label;
                d["pixels"] = r.pixel_count;
                d["mean_rgb"] = r.mean_rgb;
                d["bbox"] = py::make_tuple(r.bbox.min_x, r.bbox.min_y, r.bbox.max_x, r.bbox.max_y);
                d["seed"] = py::make_tuple(r.seed.x, r.seed.y);
                out.append(d);
            }
            return out;
        },
        py::arg("image"), py::arg("eta") = kDefaultEta);

    // --- classifier -----------------------------------------------------------
    py::class_<SkinModel>(m, "Model")
        .def_static(
            "from_seed",
            [](std::uint64_t seed) {
                SkinModel model;
                model.net = init_mlp(seed);
                return model;
            },
            py::arg("seed") = kDefaultSeed)
        .def_static("load", &read_model_file, py::arg("path"))
        .def_static("loads", &load_model, py::arg("text"))
        .def("save", [](const SkinModel& model, const std::filesystem::path& p) { write_model_file(p, model); })
        .def("dumps", &save_model)
        .def_readwrite("rho", &SkinModel::rho)
        .def_property_readonly("params", [](const SkinModel& model) { return params_dict(model.net.params); })
        .def_property_readonly("metadata", [](const SkinModel& model) { return model.metadata.dump(); })
        .def(
            "forward",
            [](const SkinModel& model, double r, double g, double b) { return forward(model.net, std::array<double, 3>{r, g, b}); },
            py::arg("r"), py::arg("g"), py::arg("b"))
        .def(
            "classify",
            [](const SkinModel& model, double r, double g, double b) {
                return classify(model.net, {r, g, b}, model.rho);
            },
            py::arg("r"), py::arg("g"), py::arg("b"));

    m.def("skin_samples", [] { return from_samples(skin_samples()); });
    m.def(
        "reference_training_set",
        [](std::uint64_t seed, int negatives) { return from_samples(reference_training_set(seed, negatives)); },
        py::arg("seed") = kDefaultSeed, py::arg("negatives") = 42);
    m.def(
        "train",
        [](const py::iterable& rows, double lr, double momentum, int epochs, std::uint64_t seed, double rho) {
            TrainConfig cfg;
            cfg.learning_rate = lr;
            cfg.momentum = momentum;
            cfg.epochs = epochs;
            cfg.seed = seed;
            validate_rho(rho);
            const TrainResult r = train_from_seed(to_samples(rows), cfg);
            SkinModel model;
            model.net = r.net;
            model.net.velocity = {};
            model.rho = rho;
            model.metadata["seed"] = seed;
            model.metadata["epochs"] = epochs;
            model.metadata["initial_mse"] = r.initial_mse;
            return py::make_tuple(model, r.mse_history);
        },
        py::arg("samples"), py::arg("lr") = 0.6, py::arg("momentum") = 0.7, py::arg("epochs") = 200,
        py::arg("seed") = kDefaultSeed, py::arg("rho") = kDefaultRho,
        "Trains from a seeded init on (r, g, b, label) rows in the given order; returns (model, mse_history).");

    // --- detection ------------------------------------------------------------
    m.def(
        "detect",
        [](const Image& img, const SkinModel& model, int eta, std::optional<double> rho,
           std::uint64_t min_region) {
            return detection_dict(detect(to_frame(img), model.net, options(eta, rho, model, min_region)));
        },
        py::arg("image"), py::arg("model"), py::arg("eta") = kDefaultEta, py::arg("rho") = py::none(),
        py::arg("min_region") = 1);

    // --- pan/tilt -------------------------------------------------------------
    m.def(
        "displacement",
        [](double x, double y, int view_w, int view_h) {
            const auto d = displacement({x, y}, view_w, view_h);
            return py::make_tuple(d.dx, d.dy);
        },
        py::arg("x"), py::arg("y"), py::arg("view_w") = 320, py::arg("view_h") = 240);
    m.def(
        "step",
        [](int pan, int tilt, double dx, double dy, int deadband, std::array<int, 4> limits) {
            PanTiltState s;
            s.pan_steps = pan;
            s.tilt_steps = tilt;
            s.deadband = deadband;
            s.pan_limits = {limits[0], limits[1]};
            s.tilt_limits = {limits[2], limits[3]};
            validate_state(s);
            const PanTiltState n = step(s, {dx, dy});
            return py::make_tuple(n.pan_steps, n.tilt_steps);
        },
        py::arg("pan"), py::arg("tilt"), py::arg("dx"), py::arg("dy"), py::arg("deadband") = 4,
        py::arg("limits") = std::array<int, 4>{-1000, 1000, -1000, 1000},
        "One control update; returns the new (pan_steps, tilt_steps).");
    m.def(
        "track",
        [](const Image& world_image, const std::string& script_csv, const SkinModel& model, int frames, int gain,
           int deadband, int eta, std::optional<double> rho, int radius) {
            World world;
            world.image = to_frame(world_image);
            world.home = {(world.image.width() - world.view_w) / 2, (world.image.height() - world.view_h) / 2};
            Target style;
            style.radius = radius;
            world.targets = targets_from_script_csv(script_csv, style);
            const PanTiltState state = fit_state(world, gain, deadband);
            return run_dict(run_tracking(world, model.net, options(eta, rho, model, 1), state, frames));
        },
        py::arg("world"), py::arg("script_csv"), py::arg("model"), py::arg("frames"), py::arg("gain") = 4,
        py::arg("deadband") = 4, py::arg("eta") = kDefaultEta, py::arg("rho") = py::none(),
        py::arg("radius") = 20,
        "Tracks disc targets scripted as frame,target_id,x,y CSV; the view starts centred in the world.");
    m.def(
        "track_scenario",
        [](const SkinModel& model, int frames, std::array<int, 2> world_size, std::array<int, 2> offset,
           std::array<double, 2> velocity, int gain, int deadband) {
            const auto sc = make_scenario(world_size[0], world_size[1], offset[0], offset[1], velocity[0],
                                          velocity[1], frames, 20, {35, 126, 183}, gain, deadband);
            DetectOptions o;
            o.rho = model.rho;
            return run_dict(run_tracking(sc.world, model.net, o, sc.state, frames));
        },
        py::arg("model"), py::arg("frames"), py::arg("world_size") = std::array<int, 2>{960, 720},
        py::arg("offset") = std::array<int, 2>{120, 60}, py::arg("velocity") = std::array<double, 2>{0.0, 0.0},
        py::arg("gain") = 4, py::arg("deadband") = 4,
        "Synthetic world with one skin-coloured disc offset from the home view centre.");
}
