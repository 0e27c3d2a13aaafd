#include "colorizer/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "colorizer/colorspace.hpp"
#include "colorizer/errors.hpp"

namespace colorizer {

namespace {

double dist2(AbPoint p, AbPoint q) {
    const double da = p.a - q.a;
    const double db = p.b - q.b;
    return da * da + db * db;
}

bool survives_round_trip(AbPoint center, double tolerance) {
    for (int L = 0; L <= 100; ++L) {
        const auto rgb = lab_to_rgb(Lab{static_cast<double>(L), center.a, center.b});
        const Lab back = rgb_to_lab(rgb[0], rgb[1], rgb[2]);
        if (std::sqrt(dist2({back.a, back.b}, center)) < tolerance) return true;
    }
    return false;
}

template <typename T>
AbPoint decode_impl(std::span<const T> dist, const ColorBinGrid& grid, DecodeMethod method,
                    double temperature) {
    if (dist.size() != grid.centers.size())
        throw DimensionError("distribution has " + std::to_string(dist.size()) + " entries, grid has " +
                             std::to_string(grid.centers.size()) + " bins");
    std::size_t best = 0;
    double best_p = -1.0;
    double total = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double p = dist[i];
        if (!(p >= 0.0)) throw DegenerateInputError("distribution has a negative or NaN entry");
        total += p;
        if (p > best_p) {
            best_p = p;
            best = i;
        }
    }
    if (total <= 0.0) throw DegenerateInputError("distribution has no mass");
    if (method == DecodeMethod::Mode) return grid.centers[best];

    if (!(temperature > 0.0)) throw ConfigError("annealing temperature must be > 0");
    // p^(1/T) relative to the peak, so small T cannot underflow the whole distribution.
    const double log_peak = std::log(best_p);
    double mass = 0.0;
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double p = dist[i];
        if (p <= 0.0) continue;
        const double w = std::exp((std::log(p) - log_peak) / temperature);
        mass += w;
        a += w * grid.centers[i].a;
        b += w * grid.centers[i].b;
    }
    return {a / mass, b / mass};
}

}  // namespace

ColorBinGrid build_bin_grid(int bin_size) {
    constexpr int span = 2 * static_cast<int>(kChromaRange);
    if (bin_size <= 0) throw ConfigError("bin_size must be > 0, got " + std::to_string(bin_size));
    if (span % bin_size != 0)
        throw ConfigError("bin_size must divide " + std::to_string(span) + ", got " + std::to_string(bin_size));

    ColorBinGrid grid;
    grid.source = ColorBinGrid::Source::Lattice;
    grid.bin_size = bin_size;
    const int side = span / bin_size;
    const double tolerance = bin_size / 2.0;
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            const AbPoint c{-kChromaRange + bin_size * (i + 0.5), -kChromaRange + bin_size * (j + 0.5)};
            const bool keep = survives_round_trip(c, tolerance);
            grid.candidates.push_back(c);
            grid.in_gamut.push_back(keep);
            if (keep) grid.centers.push_back(c);
        }
    }
    if (grid.centers.empty()) throw ConfigError("no in-gamut bins for bin_size " + std::to_string(bin_size));
    return grid;
}

ColorBinGrid grid_from_centers(std::vector<AbPoint> centers, int bin_size) {
    if (bin_size <= 0) throw ConfigError("bin_size must be > 0");
    if (centers.empty()) throw ConfigError("palette must contain at least one center");
    ColorBinGrid grid;
    grid.source = ColorBinGrid::Source::KMeans;
    grid.bin_size = bin_size;
    grid.centers = std::move(centers);
    return grid;
}

int quantize_ab(AbPoint ab, const ColorBinGrid& grid) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
        const double d = dist2(ab, grid.centers[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

SoftLabel soft_encode(AbPoint ab, const ColorBinGrid& grid, int k, double sigma) {
    if (k < 1) throw ConfigError("soft encoding needs k >= 1");
    if (!(sigma > 0.0)) throw ConfigError("soft encoding needs sigma > 0");
    const int q = grid.size();
    const int keep = std::min(k, q);

    std::vector<std::pair<double, int>> by_distance(q);
    for (int i = 0; i < q; ++i) by_distance[i] = {dist2(ab, grid.centers[i]), i};
    std::partial_sort(by_distance.begin(), by_distance.begin() + keep, by_distance.end());

    // Offsetting by the nearest distance keeps far out-of-gamut points from underflowing.
    const double d0 = by_distance[0].first;
    SoftLabel label;
    label.entries.reserve(keep);
    double total = 0.0;
    for (int i = 0; i < keep; ++i) {
        const double w = std::exp(-(by_distance[i].first - d0) / (2.0 * sigma * sigma));
        label.entries.push_back({by_distance[i].second, w});
        total += w;
    }
    for (auto& e : label.entries) e.weight /= total;
    return label;
}

AbPoint decode_distribution(std::span<const double> dist, const ColorBinGrid& grid, DecodeMethod method,
                            double temperature) {
    return decode_impl(dist, grid, method, temperature);
}

AbPoint decode_distribution(std::span<const float> dist, const ColorBinGrid& grid, DecodeMethod method,
                            double temperature) {
    return decode_impl(dist, grid, method, temperature);
}

KMeansResult kmeans(std::span<const AbPoint> samples, int clusters, int iterations, std::uint64_t seed) {
    if (samples.empty()) throw ConfigError("k-means needs at least one sample");
    if (clusters < 1) throw ConfigError("k-means needs at least one cluster");
    {
        std::set<std::pair<double, double>> distinct;
        for (const auto& s : samples) distinct.insert({s.a, s.b});
        if (static_cast<std::size_t>(clusters) > distinct.size())
            throw ConfigError("k-means asked for " + std::to_string(clusters) + " clusters but only " +
                              std::to_string(distinct.size()) + " distinct samples exist");
    }

    std::mt19937_64 rng(seed);
    KMeansResult result;
    auto& centers = result.centers;
    while (centers.size() < static_cast<std::size_t>(clusters)) {
        const AbPoint candidate = samples[rng() % samples.size()];
        if (std::find(centers.begin(), centers.end(), candidate) == centers.end()) centers.push_back(candidate);
    }

    const std::size_t n = samples.size();
    std::vector<int> assignment(n, 0);
    std::vector<double> distance(n, 0.0);
    for (int it = 0; it < std::max(iterations, 1); ++it) {
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < clusters; ++c) {
                const double d = dist2(samples[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assignment[i] = best;
            distance[i] = best_d;
            inertia += best_d;
        }
        result.inertia.push_back(inertia);

        std::vector<double> sum_a(clusters, 0.0), sum_b(clusters, 0.0);
        std::vector<std::size_t> count(clusters, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum_a[assignment[i]] += samples[i].a;
            sum_b[assignment[i]] += samples[i].b;
            ++count[assignment[i]];
        }
        bool moved = false;
        for (int c = 0; c < clusters; ++c) {
            AbPoint next = centers[c];
            if (count[c] > 0) {
                next = {sum_a[c] / count[c], sum_b[c] / count[c]};
            } else {
                // Empty cluster: take over the sample worst served by its current center.
                const auto far = static_cast<std::size_t>(
                    std::max_element(distance.begin(), distance.end()) - distance.begin());
                next = samples[far];
                distance[far] = 0.0;
            }
            if (!(next == centers[c])) moved = true;
            centers[c] = next;
        }
        if (!moved) break;
    }
    return result;
}

std::vector<AbPoint> kmeans_palette(std::span<const AbPoint> samples, int clusters, int iterations,
                                    std::uint64_t seed) {
    return kmeans(samples, clusters, iterations, seed).centers;
}

}  // namespace colorizer
