#include "colorizer/model.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "colorizer/errors.hpp"

namespace colorizer {

using nlohmann::json;

std::vector<LayerSpec> default_trunk() {
    return {
        ConvSpec{32, 3, 1, 1, 1},                  // 64^2
        ConvSpec{32, 3, 2, 1, 1},                  // -> 32^2
        ConvSpec{64, 3, 1, 1, 1},
        ConvSpec{64, 3, 2, 1, 1},                  // -> 16^2
        ConvSpec{128, 3, 1, 2, 2},                 // dilated trunk
        ConvSpec{128, 3, 1, 2, 2},
        UpsampleSpec{2, nn::UpsampleMode::Nearest},  // -> 32^2
        ConvSpec{64, 3, 1, 1, 1},
    };
}

std::string head_name(HeadKind head) { return head == HeadKind::Regression ? "regression" : "classification"; }

HeadKind parse_head(const std::string& name) {
    if (name == "regression") return HeadKind::Regression;
    if (name == "classification") return HeadKind::Classification;
    throw ConfigError("unknown head '" + name + "' (expected regression or classification)");
}

namespace {

json spec_to_json(const LayerSpec& spec) {
    if (const auto* c = std::get_if<ConvSpec>(&spec))
        return {{"type", "conv"},       {"out_channels", c->out_channels}, {"kernel", c->kernel},
                {"stride", c->stride},  {"pad", c->pad},                   {"dilation", c->dilation},
                {"batchnorm", c->batchnorm}, {"relu", c->relu}};
    const auto& u = std::get<UpsampleSpec>(spec);
    return {{"type", "upsample"},
            {"factor", u.factor},
            {"mode", u.mode == nn::UpsampleMode::Nearest ? "nearest" : "bilinear"}};
}

LayerSpec spec_from_json(const json& j) {
    const std::string type = j.at("type");
    if (type == "conv")
        return ConvSpec{j.at("out_channels"), j.at("kernel"),    j.at("stride"), j.at("pad"),
                        j.at("dilation"),     j.at("batchnorm"), j.at("relu")};
    if (type == "upsample") {
        const std::string mode = j.at("mode");
        if (mode != "nearest" && mode != "bilinear") throw ConfigError("unknown upsample mode '" + mode + "'");
        return UpsampleSpec{j.at("factor"), mode == "nearest" ? nn::UpsampleMode::Nearest : nn::UpsampleMode::Bilinear};
    }
    throw ConfigError("unknown layer type '" + type + "'");
}

}  // namespace

std::string to_json(const NetConfig& config) {
    json layers = json::array();
    for (const auto& spec : config.layers) layers.push_back(spec_to_json(spec));
    const json j{{"input_size", config.input_size}, {"head", head_name(config.head)},
                 {"num_bins", config.num_bins},     {"final_tanh", config.final_tanh},
                 {"seed", config.seed},             {"layers", layers}};
    return j.dump();
}

NetConfig net_config_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        NetConfig c;
        c.input_size = j.at("input_size");
        c.head = parse_head(j.at("head"));
        c.num_bins = j.at("num_bins");
        c.final_tanh = j.at("final_tanh");
        c.seed = j.at("seed");
        c.layers.clear();
        for (const auto& l : j.at("layers")) c.layers.push_back(spec_from_json(l));
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed network config: ") + e.what());
    }
}

Network::Network(NetConfig config) : config_(std::move(config)) {
    if (config_.input_size < 4 || config_.input_size % 4 != 0)
        throw ConfigError("input_size must be a positive multiple of 4, got " + std::to_string(config_.input_size));
    if (config_.head == HeadKind::Classification && config_.num_bins < 1)
        throw ConfigError("classification head needs num_bins >= 1");

    int channels = 1;
    int size = config_.input_size;
    int conv_index = 0;
    for (const auto& spec : config_.layers) {
        if (const auto* c = std::get_if<ConvSpec>(&spec)) {
            if (c->out_channels < 1 || c->kernel < 1) throw ConfigError("conv layer needs positive channels and kernel");
            ++conv_index;
            const nn::ConvGeometry g{c->stride, c->pad, c->dilation};
            try {
                size = nn::conv_output_size(size, c->kernel, g);
            } catch (const DimensionError& e) {
                throw ConfigError("layer conv" + std::to_string(conv_index) + ": " + e.what());
            }
            layers_.push_back(std::make_unique<nn::Conv2dLayer>("conv" + std::to_string(conv_index), channels,
                                                                c->out_channels, c->kernel, g));
            channels = c->out_channels;
            if (c->batchnorm)
                layers_.push_back(std::make_unique<nn::BatchNormLayer>("bn" + std::to_string(conv_index), channels));
            if (c->relu) layers_.push_back(std::make_unique<nn::ReluLayer>());
        } else {
            const auto& u = std::get<UpsampleSpec>(spec);
            if (u.factor < 1) throw ConfigError("upsample factor must be >= 1");
            layers_.push_back(std::make_unique<nn::UpsampleLayer>(u.factor, u.mode));
            size *= u.factor;
        }
    }
    const int out_channels = config_.head == HeadKind::Regression ? 2 : config_.num_bins;
    layers_.push_back(std::make_unique<nn::Conv2dLayer>("head", channels, out_channels, 1, nn::ConvGeometry{}));
    if (config_.head == HeadKind::Regression && config_.final_tanh) layers_.push_back(std::make_unique<nn::TanhLayer>());

    if (size < 1 || size > config_.input_size || config_.input_size % size != 0)
        throw ConfigError("network output size " + std::to_string(size) + " does not evenly divide input size " +
                          std::to_string(config_.input_size));
    output_size_ = size;
}

nn::Tensor Network::forward(const nn::Tensor& input, nn::Mode mode) {
    if (mode == nn::Mode::Eval) return infer(input);
    nn::Tensor x = input;
    for (auto& layer : layers_) x = layer->forward(x, mode);
    return x;
}

nn::Tensor Network::backward(const nn::Tensor& grad_output) {
    nn::Tensor g = grad_output;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
}

nn::Tensor Network::infer(const nn::Tensor& input) const {
    const nn::Shape& s = input.shape();
    if (s.c != 1 || s.h != config_.input_size || s.w != config_.input_size)
        throw DimensionError("network expects [N,1," + std::to_string(config_.input_size) + "," +
                             std::to_string(config_.input_size) + "] input, got " + s.str());
    nn::Tensor x = input;
    for (const auto& layer : layers_) x = layer->infer(x);
    return x;
}

std::vector<nn::NamedTensor> Network::tensors() {
    std::vector<nn::NamedTensor> out;
    for (auto& layer : layers_) layer->tensors(out);
    return out;
}

std::vector<nn::ParamRef> Network::parameters() {
    std::vector<nn::ParamRef> out;
    for (const auto& t : tensors())
        if (t.trainable) out.push_back({t.name, t.tensor});
    return out;
}

void Network::zero_grad() {
    for (const auto& p : parameters()) {
        p.tensor->grad();
        p.tensor->zero_grad();
    }
}

int Network::output_channels() const { return config_.head == HeadKind::Regression ? 2 : config_.num_bins; }

std::vector<std::string> Network::describe() const {
    std::vector<std::string> lines;
    for (const auto& layer : layers_) lines.push_back(layer->describe());
    return lines;
}

void init_weights(Network& network, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (const auto& t : network.tensors()) {
        nn::Tensor& tensor = *t.tensor;
        const auto& name = t.name;
        auto ends_with = [&](const std::string& suffix) {
            return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
        };
        if (ends_with(".weight")) {
            const nn::Shape& s = tensor.shape();
            const double fan_in = static_cast<double>(s.c) * s.h * s.w;
            std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
            for (auto& v : tensor.values()) v = static_cast<float>(normal(rng));
        } else if (ends_with(".gamma") || ends_with(".running_var")) {
            tensor.fill(1.0f);
        } else {
            tensor.fill(0.0f);
        }
        tensor.drop_grad();
    }
}

}  // namespace colorizer
