#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colorizer/colorspace.hpp"
#include "colorizer/model.hpp"
#include "colorizer/nn/optimizer.hpp"
#include "colorizer/quantizer.hpp"

namespace colorizer {

enum class PaletteKind { Lattice, KMeans };

struct TrainConfig {
    std::filesystem::path data_dir;
    std::filesystem::path out_dir;
    int image_size = 64;
    int batch_size = 8;
    double lr = 3e-4;
    nn::OptimizerKind optimizer = nn::OptimizerKind::Adam;
    double momentum = 0.9;  // SGD only
    int epochs = 10;
    HeadKind head = HeadKind::Regression;
    int bin_size = 10;
    int neighbors = 5;  // soft-encoding K
    double sigma = 5.0;
    double temperature = 0.38;
    std::uint64_t seed = 0;
    bool augment_fake_grayscale = false;
    double min_chroma_filter = 2.0;  // mean ab chroma below which a source image is skipped
    PaletteKind palette = PaletteKind::Lattice;
    int palette_size = 64;  // k-means palette only
    int kmeans_iterations = 25;
    bool final_tanh = true;
};

// Recognized keys, in the spelling used by config files.
const std::vector<std::string>& train_config_keys();

// Throws ConfigError for unknown keys or unparsable values.
void apply_config_entry(TrainConfig& config, const std::string& key, const std::string& value);

// Flat `key = value` lines; `#` starts a comment. Throws ConfigError naming the line on error.
TrainConfig parse_train_config(std::istream& in, TrainConfig base = {});
TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base = {});

// Throws ConfigError when a field is out of range.
void validate(const TrainConfig& config);

using WarningSink = std::function<void(const std::string&)>;
void warn_to_stderr(const std::string& message);

struct Sample {
    std::filesystem::path source;
    bool fake_grayscale = false;
    // Normalized L at image_size x image_size.
    std::vector<float> input;
    // CIELAB ab of the (cropped, resized) source at image_size.
    AbPlanes ab;
    // Filled by prepare_targets: normalized ab planes [a..., b...] at output resolution
    // (regression) or one soft label per output pixel (classification).
    std::vector<float> target_ab;
    std::vector<SoftLabel> target_bins;
};

double mean_chroma(const AbPlanes& ab);

// Rec. 601 luma replicated into all three channels.
Rgb8Image desaturate(const Rgb8Image& img);

// Sorted directory scan, center crop, bilinear resize, Lab split and normalization, chroma
// filter and optional fake-grayscale pairs. Bad files are reported to `warn` and skipped.
// Throws IoError when data_dir is missing and InputError when no usable image remains.
std::vector<Sample> ingest_dataset(const TrainConfig& config, const WarningSink& warn = warn_to_stderr);

struct TargetSpec {
    HeadKind head = HeadKind::Regression;
    int output_stride = 2;
    const ColorBinGrid* grid = nullptr;  // classification only
    int neighbors = 5;
    double sigma = 5.0;
};

void prepare_targets(std::span<Sample> samples, const TargetSpec& spec);

// Palette for the classification head: the gamut-probed lattice or k-means over training ab.
ColorBinGrid build_palette(const TrainConfig& config, std::span<const Sample> samples);

class Trainer {
public:
    Trainer(const TrainConfig& config, std::vector<Sample> samples, std::optional<ColorBinGrid> grid);

    Network& network() { return network_; }
    const std::optional<ColorBinGrid>& grid() const { return grid_; }
    const std::vector<Sample>& samples() const { return samples_; }

    // Forward, loss, backward and one optimizer update; returns the loss before the update.
    double step(std::span<const std::size_t> batch);
    // Loss of the current weights on a batch, training-mode forward without an update.
    double evaluate_loss(std::span<const std::size_t> batch);

    nn::Tensor batch_input(std::span<const std::size_t> batch) const;
    nn::Tensor batch_target(std::span<const std::size_t> batch) const;

private:
    TrainConfig config_;
    std::vector<Sample> samples_;
    std::optional<ColorBinGrid> grid_;
    Network network_;
    nn::Optimizer optimizer_;
};

struct LossRecord {
    int epoch = 0;
    long long step = 0;
    double seconds = 0.0;
    double loss = 0.0;
};

struct TrainResult {
    std::filesystem::path final_checkpoint;
    std::vector<std::filesystem::path> epoch_checkpoints;
    std::vector<LossRecord> losses;
    std::size_t sample_count = 0;
};

using ProgressSink = std::function<void(const std::string&)>;

// Writes epoch_NNN.aclr after every epoch, final.aclr at the end and loss_log.csv
// (epoch,step,seconds,loss). Throws TrainingDivergedError on a non-finite loss.
TrainResult train(const TrainConfig& config, const WarningSink& warn = warn_to_stderr,
                  const ProgressSink& progress = {});

}  // namespace colorizer
