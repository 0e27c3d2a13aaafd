// colorizer: train, colorize, evaluate, convert, gradcheck, inspect.
//
// Exit codes: 0 success, 1 operational error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "colorizer/colorize.hpp"
#include "colorizer/errors.hpp"
#include "colorizer/evaluate.hpp"
#include "colorizer/image_io.hpp"
#include "colorizer/model.hpp"
#include "colorizer/nn/gradcheck.hpp"
#include "colorizer/parallel.hpp"
#include "colorizer/trainer.hpp"

namespace fs = std::filesystem;
using namespace colorizer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::mutex console_mutex;

void say(std::ostream& out, const std::string& line) {
    std::lock_guard lock(console_mutex);
    out << line << '\n' << std::flush;
}

struct TrainArgs {
    fs::path config;
    std::string data;
    std::string out;
    int epochs = 0;
    long long seed = -1;
};

int run_train(const TrainArgs& args) {
    TrainConfig config = load_train_config(args.config);
    if (!args.data.empty()) config.data_dir = args.data;
    if (!args.out.empty()) config.out_dir = args.out;
    if (args.epochs > 0) config.epochs = args.epochs;
    if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
    if (config.data_dir.empty()) throw ConfigError("data_dir is not set (config key data_dir or --data)");
    if (config.out_dir.empty()) throw ConfigError("out_dir is not set (config key out_dir or --out)");

    const auto result = train(
        config, [](const std::string& m) { say(std::cerr, "warning: " + m); },
        [](const std::string& m) { say(std::cout, m); });
    say(std::cout, "trained on " + std::to_string(result.sample_count) + " samples, " +
                       std::to_string(result.losses.size()) + " steps; wrote " + result.final_checkpoint.string());
    return kExitOk;
}

struct ColorizeArgs {
    fs::path model;
    std::vector<fs::path> inputs;
    fs::path out;
    std::string decode = "anneal";
    double temperature = 0.38;
    double saturation = 1.0;
};

int run_colorize(const ColorizeArgs& args) {
    const LoadedModel model = load_checkpoint(args.model);
    ColorizeOptions opts;
    opts.decode = args.decode == "mode" ? DecodeMethod::Mode : DecodeMethod::AnnealedMean;
    opts.temperature = args.temperature;
    opts.saturation = args.saturation;
    validate(opts);
    fs::create_directories(args.out);

    const ColorBinGrid* grid = model.grid ? &*model.grid : nullptr;
    std::vector<int> failed(args.inputs.size(), 0);
    parallel_for(args.inputs.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const fs::path& input = args.inputs[i];
            try {
                const DecodedImage decoded = read_image(input);
                const Rgb8Image result = colorize(decoded.rgb, *model.network, grid, opts);
                const fs::path target = args.out / input.filename().replace_extension(".png");
                write_png(target, result);
                say(std::cout, input.string() + " -> " + target.string());
            } catch (const std::exception& e) {
                failed[i] = 1;
                say(std::cerr, "error: " + input.string() + ": " + e.what());
            }
        }
    });
    return std::any_of(failed.begin(), failed.end(), [](int f) { return f != 0; }) ? kExitFailure : kExitOk;
}

int run_eval(const fs::path& pred, const fs::path& truth, const fs::path& out) {
    const EvalReport report = eval_report(pred, truth, [](const std::string& m) { say(std::cerr, "warning: " + m); });
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_report_csv(report, out);
    std::cout << format_report(report);
    return kExitOk;
}

// Lab files are 8-bit PNGs: L*255/100, a+128, b+128 per channel.
int run_convert(const std::string& to, const fs::path& in, const fs::path& out) {
    const Rgb8Image src = read_image(in).rgb;
    Rgb8Image dst(src.width, src.height);
    auto encode = [](double v) { return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0)); };
    if (to == "lab") {
        const LabImage lab = rgb_to_lab(src);
        for (std::size_t i = 0; i < lab.pixel_count(); ++i) {
            dst.data[3 * i] = encode(lab.L[i] * 255.0 / 100.0);
            dst.data[3 * i + 1] = encode(lab.a[i] + 128.0);
            dst.data[3 * i + 2] = encode(lab.b[i] + 128.0);
        }
    } else {
        LabImage lab(src.width, src.height);
        for (std::size_t i = 0; i < lab.pixel_count(); ++i) {
            lab.L[i] = src.data[3 * i] * 100.0 / 255.0;
            lab.a[i] = src.data[3 * i + 1] - 128.0;
            lab.b[i] = src.data[3 * i + 2] - 128.0;
        }
        dst = lab_to_rgb(lab);
    }
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_png(out, dst);
    return kExitOk;
}

int run_gradcheck() {
    constexpr double kTolerance = 1e-3;
    bool ok = true;
    for (const auto& entry : nn::run_gradcheck_suite()) {
        char line[160];
        const bool pass = entry.result.max_relative_error < kTolerance;
        ok = ok && pass;
        std::snprintf(line, sizeof line, "%-36s max_rel_err %.3e  %s", entry.name.c_str(),
                      entry.result.max_relative_error, pass ? "ok" : "FAIL");
        say(std::cout, line);
    }
    return ok ? kExitOk : kExitFailure;
}

int run_inspect(const fs::path& path) {
    LoadedModel model = load_checkpoint(path);
    std::cout << "version: " << kCheckpointVersion << '\n';
    std::cout << "config: " << to_json(model.network->config()) << '\n';
    if (model.grid)
        std::cout << "bin grid: " << model.grid->size() << " bins, bin_size " << model.grid->bin_size << ", "
                  << (model.grid->source == ColorBinGrid::Source::Lattice ? "lattice" : "kmeans") << '\n';
    std::cout << "layers:\n";
    for (const auto& line : model.network->describe()) std::cout << "  " << line << '\n';
    std::cout << "tensors:\n";
    for (const auto& t : model.network->tensors()) std::cout << "  " << t.name << ' ' << t.tensor->shape().str() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automatic grayscale image colorizer"};
    app.require_subcommand(1);

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train a network on a directory of color images");
    train_cmd->add_option("--config", train_args.config, "Config file (key = value lines)")->required();
    train_cmd->add_option("--data", train_args.data, "Training image directory (overrides data_dir)");
    train_cmd->add_option("--out", train_args.out, "Output directory (overrides out_dir)");
    train_cmd->add_option("--epochs", train_args.epochs, "Epoch count (overrides epochs)")->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", train_args.seed, "Seed (overrides seed)")->check(CLI::NonNegativeNumber);

    ColorizeArgs colorize_args;
    auto* colorize_cmd = app.add_subcommand("colorize", "Colorize grayscale or color images");
    colorize_cmd->add_option("--model", colorize_args.model, "Checkpoint file")->required();
    colorize_cmd->add_option("inputs", colorize_args.inputs, "Input images")->required();
    colorize_cmd->add_option("--out", colorize_args.out, "Output directory")->required();
    colorize_cmd->add_option("--decode", colorize_args.decode, "Classification decode: mode or anneal")
        ->check(CLI::IsMember({"mode", "anneal"}));
    colorize_cmd->add_option("--temp", colorize_args.temperature, "Annealed-mean temperature")
        ->check(CLI::PositiveNumber);
    colorize_cmd->add_option("--saturation", colorize_args.saturation, "Chroma scale")
        ->check(CLI::NonNegativeNumber);

    fs::path pred_dir, truth_dir, report_path;
    auto* eval_cmd = app.add_subcommand("eval", "Compare predicted images against ground truth");
    eval_cmd->add_option("--pred", pred_dir, "Directory of predictions")->required();
    eval_cmd->add_option("--truth", truth_dir, "Directory of ground-truth images")->required();
    eval_cmd->add_option("--out", report_path, "Report CSV path")->required();

    std::string convert_to;
    fs::path convert_in, convert_out;
    auto* convert_cmd = app.add_subcommand("convert", "Convert between RGB and 8-bit Lab PNG");
    convert_cmd->add_option("--to", convert_to, "Target space: lab or rgb")
        ->required()
        ->check(CLI::IsMember({"lab", "rgb"}));
    convert_cmd->add_option("input", convert_in, "Input image")->required();
    convert_cmd->add_option("output", convert_out, "Output PNG")->required();

    auto* gradcheck_cmd = app.add_subcommand("gradcheck", "Check every layer's backward pass by finite differences");

    fs::path inspect_path;
    auto* inspect_cmd = app.add_subcommand("inspect", "Print a checkpoint's version, config and tensors");
    inspect_cmd->add_option("checkpoint", inspect_path, "Checkpoint file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::cout << app.help();
            return kExitOk;
        }
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*train_cmd) return run_train(train_args);
        if (*colorize_cmd) return run_colorize(colorize_args);
        if (*eval_cmd) return run_eval(pred_dir, truth_dir, report_path);
        if (*convert_cmd) return run_convert(convert_to, convert_in, convert_out);
        if (*gradcheck_cmd) return run_gradcheck();
        if (*inspect_cmd) return run_inspect(inspect_path);
    } catch (const std::exception& e) {
        say(std::cerr, std::string("error: ") + e.what());
        return kExitFailure;
    }
    return kExitUsage;
}
