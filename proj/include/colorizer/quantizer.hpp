#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace colorizer {

struct AbPoint {
    double a = 0.0;
    double b = 0.0;

    bool operator==(const AbPoint&) const = default;
};

// Palette of ab bins. Bin indices run over `centers` (in-gamut bins only).
struct ColorBinGrid {
    enum class Source { Lattice, KMeans };

    Source source = Source::Lattice;
    int bin_size = 10;
    // Lattice only: every candidate cell midpoint and whether it passed the gamut probe.
    std::vector<AbPoint> candidates;
    std::vector<bool> in_gamut;
    std::vector<AbPoint> centers;

    int size() const { return static_cast<int>(centers.size()); }
    bool operator==(const ColorBinGrid&) const = default;
};

struct SoftLabel {
    struct Entry {
        int bin = 0;
        double weight = 0.0;
    };
    std::vector<Entry> entries;
};

// Lattice over [-110,110)^2 with cell midpoints as candidates; a candidate is kept when a
// probe at some integer L in [0,100] survives lab->rgb8->lab with ab error below bin_size/2.
// Throws ConfigError when bin_size <= 0 or does not divide 220.
ColorBinGrid build_bin_grid(int bin_size);

// Grid over an explicit palette (e.g. from kmeans_palette). bin_size sets the decode tolerance.
ColorBinGrid grid_from_centers(std::vector<AbPoint> centers, int bin_size);

// Nearest center by Euclidean distance; ties go to the lowest index.
int quantize_ab(AbPoint ab, const ColorBinGrid& grid);

// Gaussian weights exp(-d^2 / 2 sigma^2) over the k nearest centers, normalized to sum 1.
SoftLabel soft_encode(AbPoint ab, const ColorBinGrid& grid, int k, double sigma);

enum class DecodeMethod { Mode, AnnealedMean };

// `dist` is a distribution over grid.size() bins. Throws DegenerateInputError when all mass is zero.
AbPoint decode_distribution(std::span<const double> dist, const ColorBinGrid& grid, DecodeMethod method,
                            double temperature);
AbPoint decode_distribution(std::span<const float> dist, const ColorBinGrid& grid, DecodeMethod method,
                            double temperature);

struct KMeansResult {
    std::vector<AbPoint> centers;
    // Inertia after each assignment step.
    std::vector<double> inertia;
};

// Lloyd's algorithm seeded with distinct samples drawn uniformly at random.
// Throws ConfigError when clusters exceeds the number of distinct samples.
KMeansResult kmeans(std::span<const AbPoint> samples, int clusters, int iterations, std::uint64_t seed);
std::vector<AbPoint> kmeans_palette(std::span<const AbPoint> samples, int clusters, int iterations,
                                    std::uint64_t seed);

}  // namespace colorizer
