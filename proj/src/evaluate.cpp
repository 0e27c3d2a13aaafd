#include "colorizer/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "colorizer/errors.hpp"
#include "colorizer/image_io.hpp"

namespace colorizer {

namespace fs = std::filesystem;

double psnr(const Rgb8Image& a, const Rgb8Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw DimensionError("psnr: " + std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                             std::to_string(b.width) + "x" + std::to_string(b.height));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - b.data[i];
        sum += d * d;
    }
    if (sum == 0.0) return kPsnrCap;
    const double mse = sum / static_cast<double>(a.data.size());
    return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

PairMetrics compare_images(const std::string& name, const Rgb8Image& pred, const Rgb8Image& truth) {
    PairMetrics m;
    m.file = name;
    m.psnr_db = psnr(pred, truth);
    const LabImage p = rgb_to_lab(pred);
    const LabImage t = rgb_to_lab(truth);
    double abs_sum = 0.0;
    double da_sum = 0.0;
    double db_sum = 0.0;
    for (std::size_t i = 0; i < p.pixel_count(); ++i) {
        const double da = p.a[i] - t.a[i];
        const double db = p.b[i] - t.b[i];
        abs_sum += std::abs(da) + std::abs(db);
        da_sum += da;
        db_sum += db;
    }
    const double n = static_cast<double>(p.pixel_count());
    m.ab_mae = abs_sum / (2.0 * n);
    m.bias_a = da_sum / n;
    m.bias_b = db_sum / n;
    return m;
}

EvalReport eval_report(const fs::path& pred_dir, const fs::path& truth_dir, const WarningSink& warn) {
    std::map<std::string, fs::path> truth;
    for (const auto& p : list_images(truth_dir)) truth[p.filename().string()] = p;
    EvalReport report;
    bool matched = false;
    for (const auto& pred_path : list_images(pred_dir)) {
        const auto it = truth.find(pred_path.filename().string());
        if (it == truth.end()) continue;
        matched = true;
        const Rgb8Image pred = read_image(pred_path).rgb;
        const Rgb8Image gt = read_image(it->second).rgb;
        if (pred.width != gt.width || pred.height != gt.height) {
            if (warn) warn("skipping " + it->first + ": prediction and truth sizes differ");
            continue;
        }
        report.pairs.push_back(compare_images(it->first, pred, gt));
    }
    if (!matched)
        throw InputError("no matching image filenames between " + pred_dir.string() + " and " + truth_dir.string());
    if (report.pairs.empty()) throw InputError("every matching image pair had mismatched dimensions");

    PairMetrics& agg = report.aggregate;
    agg.file = "AGGREGATE";
    for (const auto& m : report.pairs) {
        agg.psnr_db += m.psnr_db;
        agg.ab_mae += m.ab_mae;
        agg.bias_a += m.bias_a;
        agg.bias_b += m.bias_b;
    }
    const double n = static_cast<double>(report.pairs.size());
    agg.psnr_db /= n;
    agg.ab_mae /= n;
    agg.bias_a /= n;
    agg.bias_b /= n;
    return report;
}

namespace {

std::string csv_row(const PairMetrics& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, ",%.4f,%.4f,%.4f,%.4f", m.psnr_db, m.ab_mae, m.bias_a, m.bias_b);
    std::string name = m.file;
    if (name.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : name) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        name = quoted + "\"";
    }
    return name + buf;
}

}  // namespace

void write_report_csv(const EvalReport& report, std::ostream& out) {
    out << "file,psnr_db,ab_mae,bias_a,bias_b\n";
    for (const auto& m : report.pairs) out << csv_row(m) << '\n';
    out << csv_row(report.aggregate) << '\n';
}

void write_report_csv(const EvalReport& report, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write report " + path.string());
    write_report_csv(report, out);
}

std::string format_report(const EvalReport& report) {
    std::ostringstream out;
    char line[256];
    for (const auto& m : report.pairs) {
        std::snprintf(line, sizeof line, "%-32s psnr %7.3f dB  ab_mae %8.4f  bias (%+8.4f, %+8.4f)\n", m.file.c_str(),
                      m.psnr_db, m.ab_mae, m.bias_a, m.bias_b);
        out << line;
    }
    const auto& a = report.aggregate;
    std::snprintf(line, sizeof line, "%zu pairs: mean psnr %.3f dB, ab_mae %.4f, chroma bias (%+.4f, %+.4f)\n",
                  report.pairs.size(), a.psnr_db, a.ab_mae, a.bias_a, a.bias_b);
    out << line;
    return out.str();
}

}  // namespace colorizer
