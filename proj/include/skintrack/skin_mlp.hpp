#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skintrack/frame.hpp"

namespace skintrack {

inline constexpr int kInputs = 3;
inline constexpr int kHidden = 3;

/// Weights and biases of the 3-3-1 network. Also used for gradients and
/// momentum buffers, which share the parameter shape.
struct MlpParams {
    std::array<std::array<double, kInputs>, kHidden> w_ih{};  // [hidden][input]
    std::array<double, kHidden> b_h{};
    std::array<double, kHidden> w_ho{};
    double b_o = 0.0;

    friend bool operator==(const MlpParams&, const MlpParams&) = default;

    /// Visits every scalar in a fixed order: w_ih row-major, b_h, w_ho, b_o.
    template <typename Fn>
    void for_each(Fn&& fn) { visit(*this, fn); }
    template <typename Fn>
    void for_each(Fn&& fn) const { visit(*this, fn); }

    /// Applies fn(a_i, b_i) to matching scalars of two parameter sets.
    template <typename Fn>
    static void zip(MlpParams& a, const MlpParams& b, Fn&& fn) {
        for (int j = 0; j < kHidden; ++j)
            for (int i = 0; i < kInputs; ++i) fn(a.w_ih[j][i], b.w_ih[j][i]);
        for (int j = 0; j < kHidden; ++j) fn(a.b_h[j], b.b_h[j]);
        for (int j = 0; j < kHidden; ++j) fn(a.w_ho[j], b.w_ho[j]);
        fn(a.b_o, b.b_o);
    }

    static constexpr int kCount = kHidden * kInputs + kHidden + kHidden + 1;

private:
    template <typename Self, typename Fn>
    static void visit(Self& self, Fn& fn) {
        for (auto& row : self.w_ih)
            for (auto& w : row) fn(w);
        for (auto& b : self.b_h) fn(b);
        for (auto& w : self.w_ho) fn(w);
        fn(self.b_o);
    }
};

struct Mlp {
    MlpParams params;
    MlpParams velocity;  // previous update of every parameter

    friend bool operator==(const Mlp&, const Mlp&) = default;
};

struct SkinSample {
    Rgb rgb;
    int target = 0;  // 1 = skin, 0 = non-skin

    friend bool operator==(const SkinSample&, const SkinSample&) = default;
};

/// Seed used for initialization and negative sampling when none is given.
inline constexpr std::uint64_t kDefaultSeed = 10;

struct TrainConfig {
    double learning_rate = 0.6;
    double momentum = 0.7;
    int epochs = 200;
    std::uint64_t seed = kDefaultSeed;  // consumed by train_from_seed
};

struct TrainResult {
    Mlp net;
    double initial_mse = 0.0;          // before the first update
    std::vector<double> mse_history;   // dataset MSE after each epoch
};

inline constexpr double kDefaultRho = 0.5;

/// SplitMix64 generator. Each call advances the state by 0x9E3779B97F4A7C15
/// and returns the mixed state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Top 53 bits scaled to [0, 1).
    double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Parameters drawn as next_unit() - 0.5 from SplitMix64(seed) in
/// MlpParams::for_each order; velocity zeroed.
Mlp init_mlp(std::uint64_t seed);

struct ForwardTrace {
    std::array<double, kInputs> input{};
    std::array<double, kHidden> hidden{};
    double output = 0.0;
};

/// Channels are divided by 255 before the hidden layer; both layers use
/// the logistic sigmoid.
ForwardTrace forward_trace(const MlpParams& params, const std::array<double, 3>& rgb);
double forward(const Mlp& net, const std::array<double, 3>& rgb);
double forward(const Mlp& net, const Rgb& rgb);

/// Gradient of E = 0.5 * (target - output)^2 with respect to every parameter.
MlpParams gradient(const Mlp& net, const SkinSample& sample);

/// One online update from a single sample: for each parameter,
/// delta = -lr * dE/dw + momentum * previous_delta; w += delta.
void train_step(Mlp& net, const SkinSample& sample, const TrainConfig& cfg);

/// Online momentum backpropagation in fixed dataset order. For each
/// parameter: delta = -lr * dE/dw + momentum * previous_delta; w += delta.
/// Throws ConfigError on an empty or single-class dataset or an invalid
/// config.
TrainResult train(const Mlp& net, const std::vector<SkinSample>& samples, const TrainConfig& cfg);

/// train(init_mlp(cfg.seed), samples, cfg).
TrainResult train_from_seed(const std::vector<SkinSample>& samples, const TrainConfig& cfg);

/// Mean of (target - output)^2 over the dataset.
double mean_squared_error(const Mlp& net, const std::vector<SkinSample>& samples);

/// Skin iff forward output is strictly greater than rho.
bool classify(const Mlp& net, const std::array<double, 3>& mean_rgb, double rho);

void validate_train_config(const TrainConfig& cfg);
void validate_rho(double rho);

// Sample datasets: CSV with header `r,g,b,label`, label in {0, 1}.
std::vector<SkinSample> samples_from_csv(const std::string& text);
std::string samples_to_csv(const std::vector<SkinSample>& samples);
std::vector<SkinSample> read_samples_file(const std::filesystem::path& path);

/// Uniform random non-skin colours. Candidates come from the top byte of
/// successive SplitMix64(seed) outputs (r, g, b in that order) and are
/// rejected when within channel distance 20 of any positive sample.
std::vector<SkinSample> generate_negatives(const std::vector<SkinSample>& positives, int count,
                                           std::uint64_t seed);

inline constexpr int kNegativeExclusionRadius = 20;

/// Merges the two classes so positives are spread evenly through the
/// epoch: slot k holds a positive iff floor((k + 1) * P / N) grows, where P
/// is the positive count and N the total. Relative order within each class
/// is kept.
std::vector<SkinSample> interleave_classes(const std::vector<SkinSample>& positives,
                                           const std::vector<SkinSample>& negatives);

/// Serialized model: network parameters, threshold and free-form metadata.
struct SkinModel {
    Mlp net;
    double rho = kDefaultRho;
    nlohmann::json metadata = nlohmann::json::object();
};

/// JSON with w_ih (3x3), b_h, w_ho, b_o, rho, normalization "div255" and
/// metadata. Doubles are written with round-trip precision.
std::string save_model(const SkinModel& model);
/// Throws SchemaError naming the first offending field. Momentum buffers
/// are not stored and load as zero.
SkinModel load_model(const std::string& text);

SkinModel read_model_file(const std::filesystem::path& path);
void write_model_file(const std::filesystem::path& path, const SkinModel& model);

} // namespace skintrack
