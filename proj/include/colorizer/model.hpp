#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "colorizer/nn/layers.hpp"
#include "colorizer/quantizer.hpp"

namespace colorizer {

enum class HeadKind { Regression, Classification };

// conv -> optional batchnorm -> optional relu
struct ConvSpec {
    int out_channels = 0;
    int kernel = 3;
    int stride = 1;
    int pad = 1;
    int dilation = 1;
    bool batchnorm = true;
    bool relu = true;

    bool operator==(const ConvSpec&) const = default;
};

struct UpsampleSpec {
    int factor = 2;
    nn::UpsampleMode mode = nn::UpsampleMode::Nearest;

    bool operator==(const UpsampleSpec&) const = default;
};

using LayerSpec = std::variant<ConvSpec, UpsampleSpec>;

// Downsample by two stride-2 stages, a dilated 128-channel trunk, one nearest x2 upsample and a
// final 64-channel conv; the head (1x1 conv to 2 or Q channels) is appended by the network.
std::vector<LayerSpec> default_trunk();

struct NetConfig {
    int input_size = 64;
    HeadKind head = HeadKind::Regression;
    int num_bins = 0;  // classification only
    bool final_tanh = true;  // regression only
    std::uint64_t seed = 0;
    std::vector<LayerSpec> layers = default_trunk();

    bool operator==(const NetConfig&) const = default;
};

std::string to_json(const NetConfig& config);
NetConfig net_config_from_json(const std::string& text);

std::string head_name(HeadKind head);
HeadKind parse_head(const std::string& name);

class Network {
public:
    // Throws ConfigError on an inconsistent config (odd input size, channel or size mismatches).
    explicit Network(NetConfig config);

    const NetConfig& config() const { return config_; }

    // Training-mode forward caches activations for backward and updates BN running stats.
    nn::Tensor forward(const nn::Tensor& input, nn::Mode mode);
    nn::Tensor backward(const nn::Tensor& grad_output);
    // Eval-mode forward that touches no layer state; safe to call concurrently.
    nn::Tensor infer(const nn::Tensor& input) const;

    std::vector<nn::NamedTensor> tensors();
    std::vector<nn::ParamRef> parameters();
    void zero_grad();

    int output_channels() const;
    int output_size() const { return output_size_; }
    // input_size / output_size
    int output_stride() const { return config_.input_size / output_size_; }
    std::vector<std::string> describe() const;

private:
    NetConfig config_;
    std::vector<std::unique_ptr<nn::Layer>> layers_;
    int output_size_ = 0;
};

// He-scaled Gaussian conv weights N(0, 2/fan_in), zero biases, BN gamma=1 beta=0, running
// mean 0 and variance 1.
void init_weights(Network& network, std::uint64_t seed);

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct LoadedModel {
    std::unique_ptr<Network> network;
    std::optional<ColorBinGrid> grid;
};

// Layout, little-endian: "ACLR", u32 version, u32 length + UTF-8 JSON header (network config and
// bin grid), u32 tensor count, then per tensor: u32 length + UTF-8 name, u32 ndim, u32 dims,
// raw float32 values.
void save_checkpoint(Network& network, const ColorBinGrid* grid, const std::filesystem::path& path);
std::vector<std::uint8_t> serialize_checkpoint(Network& network, const ColorBinGrid* grid);

// Throws CheckpointError whose kind() tells bad magic, unsupported version and corrupt apart.
LoadedModel load_checkpoint(const std::filesystem::path& path);
LoadedModel deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

}  // namespace colorizer
