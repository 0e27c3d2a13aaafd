#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "colorizer/colorspace.hpp"
#include "colorizer/trainer.hpp"

namespace colorizer {

// Reported for identical images and used as an upper cap.
inline constexpr double kPsnrCap = 99.0;

// 10*log10(255^2 / MSE) over all channels. Throws DimensionError on size mismatch.
double psnr(const Rgb8Image& a, const Rgb8Image& b);

struct PairMetrics {
    std::string file;
    double psnr_db = 0.0;
    double ab_mae = 0.0;  // mean |delta| over both chroma channels
    double bias_a = 0.0;  // mean(pred a - truth a)
    double bias_b = 0.0;
};

struct EvalReport {
    std::vector<PairMetrics> pairs;
    PairMetrics aggregate;  // unweighted mean over pairs, file = "AGGREGATE"
};

PairMetrics compare_images(const std::string& name, const Rgb8Image& pred, const Rgb8Image& truth);

// Pairs images by filename. Throws InputError when no pair matches; pairs whose sizes differ are
// reported to `warn` and skipped.
EvalReport eval_report(const std::filesystem::path& pred_dir, const std::filesystem::path& truth_dir,
                       const WarningSink& warn = warn_to_stderr);

// Header `file,psnr_db,ab_mae,bias_a,bias_b`, one row per pair and a final AGGREGATE row.
void write_report_csv(const EvalReport& report, std::ostream& out);
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);
std::string format_report(const EvalReport& report);

}  // namespace colorizer
