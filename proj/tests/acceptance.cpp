// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "colorizer/colorize.hpp"
#include "colorizer/errors.hpp"
#include "colorizer/evaluate.hpp"
#include "colorizer/image_io.hpp"
#include "colorizer/model.hpp"
#include "colorizer/nn/gradcheck.hpp"
#include "colorizer/nn/ops.hpp"
#include "colorizer/quantizer.hpp"
#include "colorizer/trainer.hpp"
#include "support/synthetic.hpp"

using namespace colorizer;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr int kRoundTripMaxError = 1;
constexpr double kRoundTripSeconds = 5.0;
constexpr double kNeutralChroma = 1e-9;
constexpr double kGradTolerance = 1e-3;
constexpr double kGradSeconds = 60.0;
constexpr double kSpotLoss = 2.5;
constexpr int kOverfitSteps = 500;
constexpr double kOverfitReduction = 100.0;
constexpr double kOverfitPsnr = 25.0;
constexpr double kOverfitSeconds = 300.0;
constexpr int kTrailingWindow = 50;
constexpr int kDeskTrainImages = 200;
constexpr int kDeskEpochs = 10;
constexpr int kHeldOutImages = 20;
constexpr double kDeskSeconds = 1800.0;
constexpr double kLabelSumTolerance = 1e-6;
constexpr int kQuantizerSamples = 10000;
constexpr double kLightnessTolerance = 2.0;
constexpr double kRedShift = 10.0;
constexpr double kRedShiftTolerance = 0.2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " | " << o.detail << std::endl;
}

void quiet(const std::string&) {}

Outcome color_round_trip() {
    const auto t0 = Clock::now();
    int worst = 0;
    for (int r = 0; r < 256; r += 17)
        for (int g = 0; g < 256; g += 17)
            for (int b = 0; b < 256; b += 17) {
                const auto back = lab_to_rgb(rgb_to_lab(r, g, b));
                worst = std::max({worst, std::abs(back[0] - r), std::abs(back[1] - g), std::abs(back[2] - b)});
            }
    const double secs = seconds_since(t0);
    return {worst <= kRoundTripMaxError && secs < kRoundTripSeconds,
            fmt("max channel error %d (limit %d), %.3f s (limit %.0f s)", worst, kRoundTripMaxError, secs,
                kRoundTripSeconds)};
}

Outcome neutral_axis() {
    double worst = 0.0;
    for (int v = 0; v < 256; ++v) {
        const Lab lab = rgb_to_lab(v, v, v);
        worst = std::max({worst, std::abs(lab.a), std::abs(lab.b)});
    }
    return {worst < kNeutralChroma, fmt("max |a|,|b| = %.3g (limit %.0e)", worst, kNeutralChroma)};
}

Outcome gradient_suite() {
    const auto t0 = Clock::now();
    const auto entries = nn::run_gradcheck_suite();
    const double secs = seconds_since(t0);
    double worst = 0.0;
    std::string worst_name;
    int conv = 0;
    bool has_bn_train = false, has_relu = false, has_nearest = false, has_bilinear = false, has_l2 = false,
         has_ce = false;
    for (const auto& e : entries) {
        if (e.result.max_relative_error >= worst) {
            worst = e.result.max_relative_error;
            worst_name = e.name;
        }
        if (e.name.rfind("conv2d", 0) == 0) ++conv;
        has_bn_train |= e.name.find("batchnorm") != std::string::npos && e.name.find("train") != std::string::npos;
        has_relu |= e.name.find("relu") != std::string::npos;
        has_nearest |= e.name.find("nearest") != std::string::npos;
        has_bilinear |= e.name.find("bilinear") != std::string::npos;
        has_l2 |= e.name.find("euclidean") != std::string::npos;
        has_ce |= e.name.find("cross_entropy") != std::string::npos;
    }
    const bool covered = conv == 12 && has_bn_train && has_relu && has_nearest && has_bilinear && has_l2 && has_ce;
    return {covered && worst < kGradTolerance && secs < kGradSeconds,
            fmt("%zu kernels (%d conv geometries), worst %.2e at %s (limit %.0e), %.2f s (limit %.0f s)",
                entries.size(), conv, worst, worst_name.c_str(), kGradTolerance, secs, kGradSeconds)};
}

Outcome loss_spot_value() {
    const nn::Tensor pred({1, 2, 1, 1}, std::vector<float>{1.0f, 2.0f});
    const nn::Tensor target({1, 2, 1, 1}, 0.0f);
    const double loss = nn::euclidean_loss(pred, target).loss;
    return {loss == kSpotLoss, fmt("loss %.17g (expected exactly %.1f)", loss, kSpotLoss)};
}

double window_mean(const std::vector<double>& v, std::size_t begin) {
    double s = 0.0;
    for (std::size_t i = begin; i < begin + kTrailingWindow; ++i) s += v[i];
    return s / kTrailingWindow;
}

Outcome overfit(const fs::path& root) {
    const fs::path data = root / "overfit";
    testing::write_scenes(data, 1, 64, 42);
    TrainConfig c;
    c.data_dir = data;
    c.out_dir = root / "overfit_out";
    const auto t0 = Clock::now();
    Trainer trainer(c, ingest_dataset(c, quiet), std::nullopt);
    const std::vector<std::size_t> batch{0};
    std::vector<double> losses;
    for (int i = 0; i < kOverfitSteps; ++i) losses.push_back(trainer.step(batch));
    const Rgb8Image img = read_image(data / "scene_000.png").rgb;
    const double db = psnr(colorize(img, trainer.network(), nullptr), img);
    const double secs = seconds_since(t0);
    const double first = losses.front();
    const double last = losses.back();
    const double head = window_mean(losses, 0);
    const double tail = window_mean(losses, losses.size() - kTrailingWindow);
    const bool pass = last <= first / kOverfitReduction && tail < head && db >= kOverfitPsnr && secs < kOverfitSeconds;
    return {pass, fmt("loss %.4g -> %.4g (ratio %.3g, need >= %.0f), 50-step mean %.4g -> %.4g, PSNR %.2f dB "
                      "(need >= %.0f), %.1f s (limit %.0f s)",
                      first, last, first / last, kOverfitReduction, head, tail, db, kOverfitPsnr, secs,
                      kOverfitSeconds)};
}

struct DeskRun {
    fs::path checkpoint;
    fs::path held_out;
};

Outcome desk_scale(const fs::path& root, DeskRun& run) {
    TrainConfig c;
    c.data_dir = root / "desk_train";
    c.out_dir = root / "desk_out";
    c.epochs = kDeskEpochs;
    run.held_out = root / "desk_held_out";
    testing::write_scenes(c.data_dir, kDeskTrainImages, 64, 7);
    testing::write_scenes(run.held_out, kHeldOutImages, 64, 99);
    const auto t0 = Clock::now();
    const TrainResult result = train(c, quiet);
    run.checkpoint = result.final_checkpoint;
    const LoadedModel model = load_checkpoint(result.final_checkpoint);
    double mae = 0.0;
    double gray_mae = 0.0;
    int n = 0;
    for (const auto& p : list_images(run.held_out)) {
        const Rgb8Image truth = read_image(p).rgb;
        LabImage gray = rgb_to_lab(truth);
        std::fill(gray.a.begin(), gray.a.end(), 0.0);
        std::fill(gray.b.begin(), gray.b.end(), 0.0);
        mae += compare_images(p.filename().string(), colorize(truth, *model.network, nullptr), truth).ab_mae;
        gray_mae += compare_images(p.filename().string(), lab_to_rgb(gray), truth).ab_mae;
        ++n;
    }
    mae /= n;
    gray_mae /= n;
    const double secs = seconds_since(t0);
    return {mae < gray_mae && secs < kDeskSeconds,
            fmt("%d train / %d held-out images, %d epochs: ab MAE %.3f vs gray baseline %.3f, %.1f s (limit %.0f s)",
                kDeskTrainImages, n, kDeskEpochs, mae, gray_mae, secs, kDeskSeconds)};
}

Outcome quantizer_laws() {
    const ColorBinGrid grid = build_bin_grid(10);
    int fixed_points = 0;
    for (int i = 0; i < grid.size(); ++i)
        if (quantize_ab(grid.centers[i], grid) == i) ++fixed_points;

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> byte(0, 255);
    const double decode_limit = grid.bin_size * std::sqrt(2.0) / 2.0;
    double worst_sum = 0.0;
    double worst_decode = 0.0;
    for (int n = 0; n < kQuantizerSamples; ++n) {
        const Lab lab = rgb_to_lab(byte(rng), byte(rng), byte(rng));
        const AbPoint ab{lab.a, lab.b};
        const SoftLabel label = soft_encode(ab, grid, 5, 5.0);
        std::vector<double> dense(grid.size(), 0.0);
        double sum = 0.0;
        for (const auto& e : label.entries) {
            dense[e.bin] += e.weight;
            sum += e.weight;
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        const AbPoint d = decode_distribution(std::span<const double>(dense), grid, DecodeMethod::Mode, 1.0);
        worst_decode = std::max(worst_decode, std::hypot(d.a - ab.a, d.b - ab.b));
    }
    const bool pass = fixed_points == grid.size() && worst_sum <= kLabelSumTolerance && worst_decode <= decode_limit;
    return {pass, fmt("Q=%d, %d/%d centers fixed, max |sum-1| %.2e (limit %.0e), max mode-decode error %.3f "
                      "(limit %.3f) over %d samples",
                      grid.size(), fixed_points, grid.size(), worst_sum, kLabelSumTolerance, worst_decode,
                      decode_limit, kQuantizerSamples)};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + COLORIZER_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism(const fs::path& root) {
    const fs::path data = root / "determinism_data";
    testing::write_scenes(data, 12, 48, 31);
    std::ofstream(root / "determinism.cfg") << "data_dir = " << data.string()
                                            << "\nimage_size = 32\nbatch_size = 4\nepochs = 2\nseed = 17\n"
                                               "augment_fake_grayscale = true\n";
    const std::string base = "train --config \"" + (root / "determinism.cfg").string() + "\" --out ";
    const int c1 = run_cli(base + "\"" + (root / "det_a").string() + "\"");
    const int c2 = run_cli(base + "\"" + (root / "det_b").string() + "\"");
    const std::string a = slurp(root / "det_a" / "final.aclr");
    const std::string b = slurp(root / "det_b" / "final.aclr");
    return {c1 == 0 && c2 == 0 && !a.empty() && a == b,
            fmt("exit codes %d/%d, final.aclr %zu vs %zu bytes, %s", c1, c2, a.size(), b.size(),
                a == b ? "bitwise identical" : "different")};
}

Outcome lightness(const DeskRun& run) {
    const LoadedModel model = load_checkpoint(run.checkpoint);
    double worst = 0.0;
    int n = 0;
    for (const auto& p : list_images(run.held_out)) {
        const Rgb8Image img = read_image(p).rgb;
        const LabImage in = rgb_to_lab(img);
        const LabImage out = rgb_to_lab(colorize(img, *model.network, nullptr));
        for (std::size_t i = 0; i < in.L.size(); ++i) worst = std::max(worst, std::abs(in.L[i] - out.L[i]));
        ++n;
    }
    return {n == kHeldOutImages && worst <= kLightnessTolerance,
            fmt("%d images, max |L_out - L_in| %.3f (limit %.0f)", n, worst, kLightnessTolerance)};
}

Outcome red_mask(const fs::path& root, const DeskRun& run) {
    const LoadedModel model = load_checkpoint(run.checkpoint);
    const fs::path pred = root / "red_pred";
    const fs::path shifted = root / "red_shifted";
    fs::create_directories(pred);
    fs::create_directories(shifted);
    for (const auto& p : list_images(run.held_out)) {
        const Rgb8Image out = colorize(read_image(p).rgb, *model.network, nullptr);
        write_png(pred / p.filename(), out);
        LabImage lab = rgb_to_lab(out);
        for (auto& a : lab.a) a += kRedShift;
        write_png(shifted / p.filename(), lab_to_rgb(lab));
    }
    const EvalReport base = eval_report(pred, run.held_out, quiet);
    const EvalReport red = eval_report(shifted, run.held_out, quiet);
    const EvalReport direct = eval_report(shifted, pred, quiet);
    const double delta = red.aggregate.bias_a - base.aggregate.bias_a;
    const bool pass = std::abs(direct.aggregate.bias_a - kRedShift) <= kRedShiftTolerance &&
                      std::abs(delta - kRedShift) <= kRedShiftTolerance;
    return {pass, fmt("bias_a vs unshifted %.3f, bias_a vs truth %.3f -> %.3f (delta %.3f), expected %.0f +- %.1f",
                      direct.aggregate.bias_a, base.aggregate.bias_a, red.aggregate.bias_a, delta, kRedShift,
                      kRedShiftTolerance)};
}

std::string kind_name(CheckpointError::Kind k) {
    switch (k) {
        case CheckpointError::Kind::NotACheckpoint: return "not-a-checkpoint";
        case CheckpointError::Kind::UnsupportedVersion: return "unsupported-version";
        case CheckpointError::Kind::Corrupt: return "corrupt";
        case CheckpointError::Kind::Unreadable: return "unreadable";
    }
    return "?";
}

Outcome checkpoint_robustness(const fs::path& root) {
    const ColorBinGrid grid = build_bin_grid(10);
    NetConfig cfg;
    cfg.head = HeadKind::Classification;
    cfg.num_bins = grid.size();
    Network net(cfg);
    init_weights(net, 77);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    nn::Tensor x({2, 1, 64, 64});
    for (auto& v : x.values()) v = u(rng);
    net.forward(x, nn::Mode::Train);

    const fs::path path = root / "robust.aclr";
    save_checkpoint(net, &grid, path);
    const LoadedModel loaded = load_checkpoint(path);
    bool lossless = loaded.grid && *loaded.grid == grid && loaded.network->config() == net.config();
    const auto a = net.tensors();
    const auto b = loaded.network->tensors();
    lossless = lossless && a.size() == b.size();
    for (std::size_t i = 0; lossless && i < a.size(); ++i)
        lossless = a[i].name == b[i].name && a[i].tensor->same_values(*b[i].tensor);

    const auto bytes = serialize_checkpoint(net, &grid);
    auto kind_of = [](const std::vector<std::uint8_t>& data) -> std::optional<CheckpointError::Kind> {
        try {
            deserialize_checkpoint(data);
        } catch (const CheckpointError& e) {
            return e.kind();
        }
        return std::nullopt;
    };
    auto magic = bytes;
    std::fill(magic.begin(), magic.begin() + 4, 'X');
    auto version = bytes;
    version[4] = 99;
    auto truncated = bytes;
    truncated.resize(bytes.size() / 2);
    const auto k1 = kind_of(magic);
    const auto k2 = kind_of(version);
    const auto k3 = kind_of(truncated);
    const bool distinct = k1 == CheckpointError::Kind::NotACheckpoint &&
                          k2 == CheckpointError::Kind::UnsupportedVersion && k3 == CheckpointError::Kind::Corrupt;
    auto name = [&](const std::optional<CheckpointError::Kind>& k) { return k ? kind_name(*k) : std::string("none"); };
    return {lossless && distinct, fmt("%zu tensors %s; bad magic -> %s, bad version -> %s, truncated -> %s", a.size(),
                                      lossless ? "bitwise equal" : "MISMATCH", name(k1).c_str(), name(k2).c_str(),
                                      name(k3).c_str())};
}

}  // namespace

int main() {
    const fs::path root = testing::fresh_dir("acceptance");
    DeskRun desk;
    report(1, "color round trip over the 16^3 grid", color_round_trip);
    report(2, "neutral axis has zero chroma", neutral_axis);
    report(3, "gradient suite against central differences", gradient_suite);
    report(4, "euclidean loss spot value", loss_spot_value);
    report(5, "single-image overfit", [&] { return overfit(root); });
    report(6, "desk-scale learning signal beats gray baseline", [&] { return desk_scale(root, desk); });
    report(7, "quantizer laws", quantizer_laws);
    report(8, "training determinism via the CLI", [&] { return determinism(root); });
    report(9, "lightness preservation on 20 images", [&] { return lightness(desk); });
    report(10, "red-mask detector", [&] { return red_mask(root, desk); });
    report(11, "checkpoint robustness", [&] { return checkpoint_robustness(root); });
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
