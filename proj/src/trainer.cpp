#include "colorizer/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "colorizer/errors.hpp"
#include "colorizer/image_io.hpp"
#include "colorizer/nn/ops.hpp"
#include "colorizer/resample.hpp"

namespace colorizer {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    in >> out;
    if (!in || !(in >> std::ws).eof()) throw ConfigError("invalid value '" + value + "' for " + key);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "on" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "off" || value == "no" || value == "0") return false;
    throw ConfigError("invalid boolean '" + value + "' for " + key);
}

// Input tensor values for one image: normalized L, row-major.
std::vector<float> normalized_lightness(const std::vector<double>& L) {
    std::vector<float> out(L.size());
    for (std::size_t i = 0; i < L.size(); ++i)
        out[i] = static_cast<float>(normalize(PlaneKind::Lightness, Direction::ToNet, L[i]));
    return out;
}

void write_loss_rows(std::ofstream& log, std::span<const LossRecord> rows) {
    char line[128];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%d,%lld,%.3f,%.9g\n", r.epoch, r.step, r.seconds, r.loss);
        log << line;
    }
    log.flush();
}

}  // namespace

const std::vector<std::string>& train_config_keys() {
    static const std::vector<std::string> keys{
        "data_dir",     "out_dir",   "image_size", "batch_size",        "lr",
        "optimizer",    "momentum",  "epochs",     "head",              "bin_size",
        "neighbors",    "sigma",     "temperature", "seed",             "augment_fake_grayscale",
        "min_chroma_filter", "palette", "palette_size", "kmeans_iterations", "final_tanh"};
    return keys;
}

void apply_config_entry(TrainConfig& c, const std::string& key, const std::string& value) {
    if (key == "data_dir") c.data_dir = value;
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "image_size") c.image_size = parse_number<int>(key, value);
    else if (key == "batch_size") c.batch_size = parse_number<int>(key, value);
    else if (key == "lr") c.lr = parse_number<double>(key, value);
    else if (key == "optimizer") {
        if (value == "adam") c.optimizer = nn::OptimizerKind::Adam;
        else if (value == "sgd") c.optimizer = nn::OptimizerKind::Sgd;
        else throw ConfigError("invalid optimizer '" + value + "' (expected adam or sgd)");
    } else if (key == "momentum") c.momentum = parse_number<double>(key, value);
    else if (key == "epochs") c.epochs = parse_number<int>(key, value);
    else if (key == "head") c.head = parse_head(value);
    else if (key == "bin_size") c.bin_size = parse_number<int>(key, value);
    else if (key == "neighbors") c.neighbors = parse_number<int>(key, value);
    else if (key == "sigma") c.sigma = parse_number<double>(key, value);
    else if (key == "temperature") c.temperature = parse_number<double>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "augment_fake_grayscale") c.augment_fake_grayscale = parse_bool(key, value);
    else if (key == "min_chroma_filter") c.min_chroma_filter = parse_number<double>(key, value);
    else if (key == "palette") {
        if (value == "lattice") c.palette = PaletteKind::Lattice;
        else if (value == "kmeans") c.palette = PaletteKind::KMeans;
        else throw ConfigError("invalid palette '" + value + "' (expected lattice or kmeans)");
    } else if (key == "palette_size") c.palette_size = parse_number<int>(key, value);
    else if (key == "kmeans_iterations") c.kmeans_iterations = parse_number<int>(key, value);
    else if (key == "final_tanh") c.final_tanh = parse_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

TrainConfig parse_train_config(std::istream& in, TrainConfig base) {
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            apply_config_entry(base, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

TrainConfig load_train_config(const fs::path& path, TrainConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    return parse_train_config(in, std::move(base));
}

void validate(const TrainConfig& c) {
    if (c.image_size < 4 || c.image_size % 4 != 0)
        throw ConfigError("image_size must be a positive multiple of 4, got " + std::to_string(c.image_size));
    if (c.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(c.lr > 0.0)) throw ConfigError("lr must be > 0");
    if (c.momentum < 0.0 || c.momentum >= 1.0) throw ConfigError("momentum must be in [0, 1)");
    if (c.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (c.bin_size < 1) throw ConfigError("bin_size must be >= 1");
    if (c.neighbors < 1) throw ConfigError("neighbors must be >= 1");
    if (!(c.sigma > 0.0)) throw ConfigError("sigma must be > 0");
    if (!(c.temperature > 0.0)) throw ConfigError("temperature must be > 0");
    if (!(c.min_chroma_filter >= 0.0)) throw ConfigError("min_chroma_filter must be >= 0");
    if (c.palette_size < 1) throw ConfigError("palette_size must be >= 1");
    if (c.kmeans_iterations < 1) throw ConfigError("kmeans_iterations must be >= 1");
}

void warn_to_stderr(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

double mean_chroma(const AbPlanes& ab) {
    if (ab.a.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < ab.a.size(); ++i) sum += std::hypot(ab.a[i], ab.b[i]);
    return sum / static_cast<double>(ab.a.size());
}

Rgb8Image desaturate(const Rgb8Image& img) {
    Rgb8Image out = img;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double y = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] + 0.114 * img.data[3 * i + 2];
        const auto v = static_cast<std::uint8_t>(std::clamp(std::floor(y + 0.5), 0.0, 255.0));
        out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = v;
    }
    return out;
}

std::vector<Sample> ingest_dataset(const TrainConfig& config, const WarningSink& warn) {
    std::error_code ec;
    if (!fs::is_directory(config.data_dir, ec))
        throw IoError("training data directory does not exist: " + config.data_dir.string());
    const auto files = list_images(config.data_dir);
    if (files.empty()) throw InputError("no image files in " + config.data_dir.string());

    std::vector<Sample> samples;
    const int size = config.image_size;
    for (const auto& path : files) {
        Rgb8Image rgb;
        try {
            rgb = resize_bilinear(center_crop_square(read_image(path).rgb), size, size);
        } catch (const Error& e) {
            if (warn) warn("skipping " + path.string() + ": " + e.what());
            continue;
        }
        auto [lightness, ab] = split_channels(rgb_to_lab(rgb));
        if (mean_chroma(ab) < config.min_chroma_filter) {
            if (warn) warn("skipping " + path.string() + ": below the chroma filter");
            continue;
        }
        Sample sample;
        sample.source = path;
        sample.input = normalized_lightness(lightness.values);
        sample.ab = ab;
        if (config.augment_fake_grayscale) {
            Sample fake;
            fake.source = path;
            fake.fake_grayscale = true;
            fake.input = normalized_lightness(rgb_to_lab(desaturate(rgb)).L);
            fake.ab = std::move(ab);
            samples.push_back(std::move(sample));
            samples.push_back(std::move(fake));
        } else {
            samples.push_back(std::move(sample));
        }
    }
    if (samples.empty()) throw InputError("no usable training images in " + config.data_dir.string());
    return samples;
}

void prepare_targets(std::span<Sample> samples, const TargetSpec& spec) {
    if (spec.head == HeadKind::Classification && !spec.grid)
        throw ConfigError("classification targets need a bin grid");
    for (auto& s : samples) {
        const auto a = area_downsample(s.ab.a, s.ab.width, s.ab.height, spec.output_stride);
        const auto b = area_downsample(s.ab.b, s.ab.width, s.ab.height, spec.output_stride);
        s.target_ab.clear();
        s.target_bins.clear();
        if (spec.head == HeadKind::Regression) {
            s.target_ab.reserve(a.size() * 2);
            for (double v : a) s.target_ab.push_back(static_cast<float>(normalize(PlaneKind::Chroma, Direction::ToNet, v)));
            for (double v : b) s.target_ab.push_back(static_cast<float>(normalize(PlaneKind::Chroma, Direction::ToNet, v)));
        } else {
            s.target_bins.reserve(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                s.target_bins.push_back(soft_encode({a[i], b[i]}, *spec.grid, spec.neighbors, spec.sigma));
        }
    }
}

ColorBinGrid build_palette(const TrainConfig& config, std::span<const Sample> samples) {
    if (config.palette == PaletteKind::Lattice) return build_bin_grid(config.bin_size);
    std::vector<AbPoint> points;
    for (const auto& s : samples) {
        if (s.fake_grayscale) continue;
        const auto a = area_downsample(s.ab.a, s.ab.width, s.ab.height, 2);
        const auto b = area_downsample(s.ab.b, s.ab.width, s.ab.height, 2);
        for (std::size_t i = 0; i < a.size(); ++i) points.push_back({a[i], b[i]});
    }
    return grid_from_centers(kmeans_palette(points, config.palette_size, config.kmeans_iterations, config.seed),
                             config.bin_size);
}

namespace {

NetConfig net_config_for(const TrainConfig& config, const std::optional<ColorBinGrid>& grid) {
    NetConfig net;
    net.input_size = config.image_size;
    net.head = config.head;
    net.num_bins = grid ? grid->size() : 0;
    net.final_tanh = config.final_tanh;
    net.seed = config.seed;
    return net;
}

nn::OptimConfig optim_config_for(const TrainConfig& config) {
    nn::OptimConfig o;
    o.kind = config.optimizer;
    o.lr = config.lr;
    o.momentum = config.optimizer == nn::OptimizerKind::Sgd ? config.momentum : 0.0;
    return o;
}

}  // namespace

Trainer::Trainer(const TrainConfig& config, std::vector<Sample> samples, std::optional<ColorBinGrid> grid)
    : config_(config),
      samples_(std::move(samples)),
      grid_(std::move(grid)),
      network_(net_config_for(config, grid_)),
      optimizer_(optim_config_for(config)) {
    validate(config_);
    if (config_.head == HeadKind::Classification && !grid_)
        throw ConfigError("classification training needs a bin grid");
    init_weights(network_, config_.seed);
    const TargetSpec spec{config_.head, network_.output_stride(), grid_ ? &*grid_ : nullptr, config_.neighbors,
                          config_.sigma};
    for (auto& s : samples_)
        if (s.input.size() != static_cast<std::size_t>(config_.image_size) * config_.image_size)
            throw DimensionError("sample " + s.source.string() + " does not match image_size");
    prepare_targets(samples_, spec);
}

nn::Tensor Trainer::batch_input(std::span<const std::size_t> batch) const {
    const int size = config_.image_size;
    nn::Tensor x(nn::Shape{static_cast<int>(batch.size()), 1, size, size});
    const std::size_t plane = static_cast<std::size_t>(size) * size;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& in = samples_.at(batch[i]).input;
        std::copy(in.begin(), in.end(), x.data() + i * plane);
    }
    return x;
}

nn::Tensor Trainer::batch_target(std::span<const std::size_t> batch) const {
    const int out = network_.output_size();
    const int channels = network_.output_channels();
    const std::size_t plane = static_cast<std::size_t>(out) * out;
    nn::Tensor t(nn::Shape{static_cast<int>(batch.size()), channels, out, out});
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Sample& s = samples_.at(batch[i]);
        float* dst = t.data() + i * channels * plane;
        if (config_.head == HeadKind::Regression) {
            std::copy(s.target_ab.begin(), s.target_ab.end(), dst);
        } else {
            for (std::size_t p = 0; p < plane; ++p)
                for (const auto& e : s.target_bins[p].entries) dst[e.bin * plane + p] += static_cast<float>(e.weight);
        }
    }
    return t;
}

double Trainer::evaluate_loss(std::span<const std::size_t> batch) {
    const nn::Tensor pred = network_.infer(batch_input(batch));
    const nn::Tensor target = batch_target(batch);
    return config_.head == HeadKind::Regression ? nn::euclidean_loss(pred, target).loss
                                                : nn::softmax_cross_entropy(pred, target).loss;
}

double Trainer::step(std::span<const std::size_t> batch) {
    network_.zero_grad();
    const nn::Tensor pred = network_.forward(batch_input(batch), nn::Mode::Train);
    const nn::Tensor target = batch_target(batch);
    auto loss = config_.head == HeadKind::Regression ? nn::euclidean_loss(pred, target)
                                                     : nn::softmax_cross_entropy(pred, target);
    if (!std::isfinite(loss.loss)) return loss.loss;
    network_.backward(loss.grad);
    optimizer_.step(network_.parameters());
    return loss.loss;
}

TrainResult train(const TrainConfig& config, const WarningSink& warn, const ProgressSink& progress) {
    validate(config);
    if (config.out_dir.empty()) throw ConfigError("out_dir is not set");
    auto samples = ingest_dataset(config, warn);

    std::optional<ColorBinGrid> grid;
    if (config.head == HeadKind::Classification) grid = build_palette(config, samples);

    Trainer trainer(config, std::move(samples), std::move(grid));
    fs::create_directories(config.out_dir);
    std::ofstream log(config.out_dir / "loss_log.csv", std::ios::trunc);
    if (!log) throw IoError("cannot write " + (config.out_dir / "loss_log.csv").string());
    log << "epoch,step,seconds,loss\n";

    TrainResult result;
    result.sample_count = trainer.samples().size();
    const std::size_t n = trainer.samples().size();
    const auto batch = static_cast<std::size_t>(config.batch_size);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(config.seed ^ 0x9E3779B97F4A7C15ull);
    const auto start = std::chrono::steady_clock::now();
    long long step = 0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        const std::size_t epoch_begin = result.losses.size();
        for (std::size_t first = 0; first < n; first += batch) {
            const std::span<const std::size_t> ids(order.data() + first, std::min(batch, n - first));
            const double loss = trainer.step(ids);
            ++step;
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (!std::isfinite(loss)) {
                std::ostringstream msg;
                msg << "non-finite loss at epoch " << epoch << " step " << step << " (lr " << config.lr
                    << "); recent losses:";
                const std::size_t tail = result.losses.size() > 10 ? result.losses.size() - 10 : 0;
                for (std::size_t i = tail; i < result.losses.size(); ++i) msg << ' ' << result.losses[i].loss;
                write_loss_rows(log, std::span(result.losses).subspan(epoch_begin));
                throw TrainingDivergedError(msg.str());
            }
            result.losses.push_back({epoch, step, seconds, loss});
        }
        write_loss_rows(log, std::span(result.losses).subspan(epoch_begin));

        char name[32];
        std::snprintf(name, sizeof name, "epoch_%03d.aclr", epoch);
        const fs::path path = config.out_dir / name;
        save_checkpoint(trainer.network(), trainer.grid() ? &*trainer.grid() : nullptr, path);
        result.epoch_checkpoints.push_back(path);
        if (progress) {
            double mean = 0.0;
            for (std::size_t i = epoch_begin; i < result.losses.size(); ++i) mean += result.losses[i].loss;
            mean /= static_cast<double>(result.losses.size() - epoch_begin);
            std::ostringstream msg;
            msg << "epoch " << epoch << "/" << config.epochs << " mean loss " << mean << " -> " << path.string();
            progress(msg.str());
        }
    }
    result.final_checkpoint = config.out_dir / "final.aclr";
    save_checkpoint(trainer.network(), trainer.grid() ? &*trainer.grid() : nullptr, result.final_checkpoint);
    return result;
}

}  // namespace colorizer
