#include "skintrack/skin_mlp.hpp"

#include <cmath>
#include <string>

#include "csv.hpp"
#include "skintrack/error.hpp"
#include "skintrack/segmentation.hpp"

namespace skintrack {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::array<double, 3> to_real(const Rgb& rgb) {
    return {static_cast<double>(rgb.r), static_cast<double>(rgb.g), static_cast<double>(rgb.b)};
}

} // namespace

Mlp init_mlp(std::uint64_t seed) {
    SplitMix64 rng(seed);
    Mlp net;
    net.params.for_each([&](double& w) { w = rng.next_unit() - 0.5; });
    return net;
}

ForwardTrace forward_trace(const MlpParams& p, const std::array<double, 3>& rgb) {
    ForwardTrace t;
    for (int i = 0; i < kInputs; ++i) t.input[i] = rgb[i] / 255.0;
    double z_out = p.b_o;
    for (int j = 0; j < kHidden; ++j) {
        double z = p.b_h[j];
        for (int i = 0; i < kInputs; ++i) z += p.w_ih[j][i] * t.input[i];
        t.hidden[j] = sigmoid(z);
        z_out += p.w_ho[j] * t.hidden[j];
    }
    t.output = sigmoid(z_out);
    return t;
}

double forward(const Mlp& net, const std::array<double, 3>& rgb) {
    return forward_trace(net.params, rgb).output;
}

double forward(const Mlp& net, const Rgb& rgb) { return forward(net, to_real(rgb)); }

MlpParams gradient(const Mlp& net, const SkinSample& sample) {
    const ForwardTrace t = forward_trace(net.params, to_real(sample.rgb));
    const double target = static_cast<double>(sample.target);
    const double delta_out = (t.output - target) * t.output * (1.0 - t.output);

    MlpParams g;
    g.b_o = delta_out;
    for (int j = 0; j < kHidden; ++j) {
        g.w_ho[j] = delta_out * t.hidden[j];
        const double delta_h = delta_out * net.params.w_ho[j] * t.hidden[j] * (1.0 - t.hidden[j]);
        g.b_h[j] = delta_h;
        for (int i = 0; i < kInputs; ++i) g.w_ih[j][i] = delta_h * t.input[i];
    }
    return g;
}

double mean_squared_error(const Mlp& net, const std::vector<SkinSample>& samples) {
    if (samples.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : samples) {
        const double e = static_cast<double>(s.target) - forward(net, s.rgb);
        sum += e * e;
    }
    return sum / static_cast<double>(samples.size());
}

void validate_train_config(const TrainConfig& cfg) {
    if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
        throw ConfigError("learning rate must be a positive finite number");
    if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0))
        throw ConfigError("momentum must be in [0, 1)");
    if (cfg.epochs < 1) throw ConfigError("epochs must be at least 1");
}

void validate_rho(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must be in (0, 1)");
}

void train_step(Mlp& net, const SkinSample& sample, const TrainConfig& cfg) {
    const MlpParams g = gradient(net, sample);
    MlpParams::zip(net.velocity, g, [&](double& v, double grad) {
        v = -cfg.learning_rate * grad + cfg.momentum * v;
    });
    MlpParams::zip(net.params, net.velocity, [](double& w, double v) { w += v; });
}

TrainResult train(const Mlp& net, const std::vector<SkinSample>& samples, const TrainConfig& cfg) {
    validate_train_config(cfg);
    if (samples.empty()) throw ConfigError("training set is empty");
    bool has_pos = false, has_neg = false;
    for (const auto& s : samples) {
        if (s.target != 0 && s.target != 1)
            throw ConfigError("sample target must be 0 or 1, got " + std::to_string(s.target));
        (s.target == 1 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg)
        throw ConfigError(
            "training set must contain both skin (1) and non-skin (0) samples; a single-class set "
            "saturates the output unit. Supply negatives or generate them");

    TrainResult result;
    result.net = net;
    result.initial_mse = mean_squared_error(net, samples);
    result.mse_history.reserve(static_cast<std::size_t>(cfg.epochs));

    Mlp& m = result.net;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto& s : samples) train_step(m, s, cfg);
        result.mse_history.push_back(mean_squared_error(m, samples));
    }
    return result;
}

TrainResult train_from_seed(const std::vector<SkinSample>& samples, const TrainConfig& cfg) {
    return train(init_mlp(cfg.seed), samples, cfg);
}

bool classify(const Mlp& net, const std::array<double, 3>& mean_rgb, double rho) {
    return forward(net, mean_rgb) > rho;
}

std::vector<SkinSample> samples_from_csv(const std::string& text) {
    std::vector<SkinSample> out;
    for (const auto& row : csv::parse(text, "r,g,b,label")) {
        SkinSample s;
        const char* names[] = {"r", "g", "b"};
        long ch[3];
        for (int c = 0; c < 3; ++c) {
            ch[c] = csv::to_long(row, c, names[c]);
            if (ch[c] < 0 || ch[c] > 255)
                throw ParseError("line " + std::to_string(row.line) + ": column '" + names[c] +
                                 "' out of [0, 255]");
        }
        s.rgb = Rgb{static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]),
                    static_cast<std::uint8_t>(ch[2])};
        const long label = csv::to_long(row, 3, "label");
        if (label != 0 && label != 1)
            throw ParseError("line " + std::to_string(row.line) + ": label must be 0 or 1");
        s.target = static_cast<int>(label);
        out.push_back(s);
    }
    return out;
}

std::string samples_to_csv(const std::vector<SkinSample>& samples) {
    std::string out = "r,g,b,label\n";
    for (const auto& s : samples)
        out += std::to_string(s.rgb.r) + "," + std::to_string(s.rgb.g) + "," + std::to_string(s.rgb.b) +
               "," + std::to_string(s.target) + "\n";
    return out;
}

std::vector<SkinSample> read_samples_file(const std::filesystem::path& path) {
    const auto bytes = read_binary_file(path);
    try {
        return samples_from_csv(std::string(bytes.begin(), bytes.end()));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<SkinSample> generate_negatives(const std::vector<SkinSample>& positives, int count,
                                           std::uint64_t seed) {
    if (count < 0) throw ConfigError("negative sample count must be non-negative");
    SplitMix64 rng(seed);
    std::vector<SkinSample> out;
    out.reserve(static_cast<std::size_t>(count));
    std::uint64_t attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 100'000'000ULL)
            throw ConfigError("could not draw enough colours outside the skin exclusion zone");
        Rgb c;
        c.r = static_cast<std::uint8_t>(rng.next() >> 56);
        c.g = static_cast<std::uint8_t>(rng.next() >> 56);
        c.b = static_cast<std::uint8_t>(rng.next() >> 56);
        bool near = false;
        for (const auto& p : positives) {
            if (p.target == 1 && channel_distance(c, p.rgb) <= kNegativeExclusionRadius) {
                near = true;
                break;
            }
        }
        if (!near) out.push_back(SkinSample{c, 0});
    }
    return out;
}

std::vector<SkinSample> interleave_classes(const std::vector<SkinSample>& positives,
                                           const std::vector<SkinSample>& negatives) {
    const std::size_t p = positives.size();
    const std::size_t n = p + negatives.size();
    std::vector<SkinSample> out;
    out.reserve(n);
    std::size_t pi = 0, ni = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (pi < (k + 1) * p / n)
            out.push_back(positives[pi++]);
        else
            out.push_back(negatives[ni++]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model documents

namespace {

constexpr const char* kNormalization = "div255";

double finite_number(const nlohmann::json& v, const std::string& field) {
    if (!v.is_number()) throw SchemaError(field, v.is_null() ? "non-finite or null value" : "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(field, "non-finite value");
    return d;
}

const nlohmann::json& require(const nlohmann::json& doc, const std::string& field) {
    const auto it = doc.find(field);
    if (it == doc.end()) throw SchemaError(field, "missing");
    return *it;
}

template <std::size_t N>
std::array<double, N> vector_field(const nlohmann::json& v, const std::string& field) {
    if (!v.is_array() || v.size() != N)
        throw SchemaError(field, "wrong shape, expected an array of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = finite_number(v[i], field + "[" + std::to_string(i) + "]");
    return out;
}

} // namespace

std::string save_model(const SkinModel& model) {
    const MlpParams& p = model.net.params;
    nlohmann::json doc;
    doc["w_ih"] = p.w_ih;
    doc["b_h"] = p.b_h;
    doc["w_ho"] = p.w_ho;
    doc["b_o"] = p.b_o;
    doc["rho"] = model.rho;
    doc["normalization"] = kNormalization;
    doc["metadata"] = model.metadata;
    return doc.dump(2) + "\n";
}

SkinModel load_model(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("<document>", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("<document>", "expected a JSON object");

    SkinModel model;
    MlpParams& p = model.net.params;

    const auto& w_ih = require(doc, "w_ih");
    if (!w_ih.is_array() || w_ih.size() != kHidden)
        throw SchemaError("w_ih", "wrong shape, expected 3x3");
    for (int j = 0; j < kHidden; ++j) {
        if (!w_ih[j].is_array() || w_ih[j].size() != kInputs)
            throw SchemaError("w_ih", "wrong shape, expected 3x3");
        p.w_ih[j] = vector_field<kInputs>(w_ih[j], "w_ih[" + std::to_string(j) + "]");
    }
    p.b_h = vector_field<kHidden>(require(doc, "b_h"), "b_h");
    p.w_ho = vector_field<kHidden>(require(doc, "w_ho"), "w_ho");
    p.b_o = finite_number(require(doc, "b_o"), "b_o");
    model.rho = finite_number(require(doc, "rho"), "rho");
    if (!(model.rho > 0.0 && model.rho < 1.0)) throw SchemaError("rho", "must be in (0, 1)");

    const auto& norm = require(doc, "normalization");
    if (!norm.is_string() || norm.get<std::string>() != kNormalization)
        throw SchemaError("normalization", "expected \"div255\"");

    if (const auto it = doc.find("metadata"); it != doc.end()) {
        if (!it->is_object()) throw SchemaError("metadata", "expected an object");
        model.metadata = *it;
    }
    return model;
}

SkinModel read_model_file(const std::filesystem::path& path) {
    const auto bytes = read_binary_file(path);
    return load_model(std::string(bytes.begin(), bytes.end()));
}

void write_model_file(const std::filesystem::path& path, const SkinModel& model) {
    const std::string text = save_model(model);
    write_binary_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

} // namespace skintrack
