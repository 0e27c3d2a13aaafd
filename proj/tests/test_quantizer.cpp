#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "colorizer/colorspace.hpp"
#include "colorizer/errors.hpp"
#include "colorizer/quantizer.hpp"

using namespace colorizer;

namespace {

const ColorBinGrid& grid10() {
    static const ColorBinGrid g = build_bin_grid(10);
    return g;
}

// Exhaustive scan, independent of quantize_ab.
int nearest_by_scan(AbPoint p, const ColorBinGrid& g) {
    int best = -1;
    double best_d = 1e300;
    for (int i = 0; i < g.size(); ++i) {
        const double d = std::pow(p.a - g.centers[i].a, 2) + std::pow(p.b - g.centers[i].b, 2);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// A random ab that some 8-bit color actually produces.
AbPoint random_in_gamut(std::mt19937_64& rng) {
    const Lab lab = rgb_to_lab(rng() % 256, rng() % 256, rng() % 256);
    return {lab.a, lab.b};
}

}  // namespace

TEST_CASE("bin grid lattice and in-gamut count") {
    const auto& g = grid10();
    CHECK(g.candidates.size() == 484);
    CHECK(g.in_gamut.size() == 484);
    CHECK(g.candidates.front() == AbPoint{-105.0, -105.0});
    CHECK(g.candidates.back() == AbPoint{105.0, 105.0});
    const auto kept = std::count(g.in_gamut.begin(), g.in_gamut.end(), true);
    CHECK(kept == g.size());
    CHECK(g.size() >= 250);
    CHECK(g.size() <= 400);
    // Frozen from an independent brute-force probe (Python, same primaries and probe rule).
    CHECK(g.size() == 253);
    for (const auto& c : g.centers) {
        CHECK(std::fmod(c.a + 105.0, 10.0) == 0.0);
        CHECK(std::fmod(c.b + 105.0, 10.0) == 0.0);
    }
}

TEST_CASE("coarse grid keeps all four candidates") {
    const ColorBinGrid g = build_bin_grid(110);
    CHECK(g.candidates.size() == 4);
    CHECK(g.size() == 4);
}

TEST_CASE("bin size must be positive and divide the ab range") {
    CHECK_THROWS_AS(build_bin_grid(0), ConfigError);
    CHECK_THROWS_AS(build_bin_grid(-10), ConfigError);
    CHECK_THROWS_AS(build_bin_grid(7), ConfigError);
}

TEST_CASE("quantize_ab") {
    const auto& g = grid10();
    for (int i = 0; i < g.size(); ++i) CHECK(quantize_ab(g.centers[i], g) == i);

    // Four centers are equidistant from the origin; the lowest index wins.
    const int origin = quantize_ab({0.0, 0.0}, g);
    CHECK(origin == nearest_by_scan({0.0, 0.0}, g));
    CHECK(std::abs(g.centers[origin].a) == 5.0);
    CHECK(std::abs(g.centers[origin].b) == 5.0);

    CHECK(quantize_ab({200.0, 200.0}, g) == nearest_by_scan({200.0, 200.0}, g));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-150.0, 150.0);
    for (int i = 0; i < 500; ++i) {
        const AbPoint p{u(rng), u(rng)};
        CHECK(quantize_ab(p, g) == nearest_by_scan(p, g));
    }
}

TEST_CASE("soft_encode") {
    const auto& g = grid10();
    const int i = 17;
    const SoftLabel one = soft_encode(g.centers[i], g, 1, 5.0);
    REQUIRE(one.entries.size() == 1);
    CHECK(one.entries[0].bin == i);
    CHECK(one.entries[0].weight == 1.0);

    const int left = quantize_ab({-5.0, 5.0}, g);
    const int right = quantize_ab({5.0, 5.0}, g);
    const SoftLabel two = soft_encode({0.0, 5.0}, g, 2, 5.0);
    REQUIRE(two.entries.size() == 2);
    CHECK(two.entries[0].weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.entries[1].weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::min(two.entries[0].bin, two.entries[1].bin) == std::min(left, right));
    CHECK(std::max(two.entries[0].bin, two.entries[1].bin) == std::max(left, right));

    CHECK_THROWS_AS(soft_encode({0, 0}, g, 0, 5.0), ConfigError);
    CHECK_THROWS_AS(soft_encode({0, 0}, g, 5, 0.0), ConfigError);
}

TEST_CASE("soft labels are distributions; K=1 matches quantize_ab") {
    const auto& g = grid10();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-140.0, 140.0);
    for (int i = 0; i < 2000; ++i) {
        const AbPoint p{u(rng), u(rng)};
        const SoftLabel s = soft_encode(p, g, 5, 5.0);
        CHECK(s.entries.size() == 5);
        double sum = 0.0;
        for (const auto& e : s.entries) {
            CHECK(e.weight >= 0.0);
            sum += e.weight;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-6);
        const SoftLabel hard = soft_encode(p, g, 1, 5.0);
        CHECK(hard.entries[0].bin == quantize_ab(p, g));
    }
}

TEST_CASE("decode_distribution") {
    const auto& g = grid10();
    std::vector<double> dist(g.size(), 0.0);
    dist[42] = 1.0;
    CHECK(decode_distribution(std::span<const double>(dist), g, DecodeMethod::Mode, 0.38) == g.centers[42]);
    CHECK(decode_distribution(std::span<const double>(dist), g, DecodeMethod::AnnealedMean, 0.38) == g.centers[42]);

    const int i = quantize_ab({5.0, 5.0}, g);
    const int j = quantize_ab({15.0, 5.0}, g);
    std::fill(dist.begin(), dist.end(), 0.0);
    dist[i] = 0.5;
    dist[j] = 0.5;
    const AbPoint mid = decode_distribution(std::span<const double>(dist), g, DecodeMethod::AnnealedMean, 1.0);
    CHECK(mid.a == doctest::Approx(10.0));
    CHECK(mid.b == doctest::Approx(5.0));
    // Mode ties go to the lower index.
    CHECK(decode_distribution(std::span<const double>(dist), g, DecodeMethod::Mode, 1.0) == g.centers[std::min(i, j)]);

    std::fill(dist.begin(), dist.end(), 0.0);
    CHECK_THROWS_AS(decode_distribution(std::span<const double>(dist), g, DecodeMethod::Mode, 1.0),
                    DegenerateInputError);
    CHECK_THROWS_AS(decode_distribution(std::span<const double>(dist), g, DecodeMethod::AnnealedMean, 1.0),
                    DegenerateInputError);
}

TEST_CASE("low temperature sharpens the annealed mean toward the mode") {
    const auto& g = grid10();
    std::vector<double> dist(g.size(), 0.0);
    dist[10] = 0.6;
    dist[200] = 0.4;
    const AbPoint cold = decode_distribution(std::span<const double>(dist), g, DecodeMethod::AnnealedMean, 0.01);
    CHECK(cold.a == doctest::Approx(g.centers[10].a));
    CHECK(cold.b == doctest::Approx(g.centers[10].b));
}

TEST_CASE("mode decode of a soft label stays within half a bin diagonal") {
    const auto& g = grid10();
    std::mt19937_64 rng(4);
    const double limit = g.bin_size * std::sqrt(2.0) / 2.0;
    for (int n = 0; n < 2000; ++n) {
        const AbPoint p = random_in_gamut(rng);
        const SoftLabel s = soft_encode(p, g, 5, 5.0);
        std::vector<double> dense(g.size(), 0.0);
        for (const auto& e : s.entries) dense[e.bin] += e.weight;
        const AbPoint d = decode_distribution(std::span<const double>(dense), g, DecodeMethod::Mode, 1.0);
        CHECK(std::hypot(d.a - p.a, d.b - p.b) <= limit + 1e-9);
    }
}

TEST_CASE("kmeans palette") {
    SUBCASE("exactly Q distinct points are recovered") {
        const std::vector<AbPoint> pts{{-30, 10}, {40, 40}, {0, -60}};
        std::vector<AbPoint> samples;
        for (int r = 0; r < 5; ++r) samples.insert(samples.end(), pts.begin(), pts.end());
        auto centers = kmeans_palette(samples, 3, 20, 9);
        auto key = [](const AbPoint& p) { return std::make_pair(p.a, p.b); };
        std::sort(centers.begin(), centers.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
        auto expected = pts;
        std::sort(expected.begin(), expected.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
        CHECK(centers == expected);
    }
    SUBCASE("one cluster is the mean") {
        const std::vector<AbPoint> samples{{0, 0}, {10, 20}, {-4, 4}, {2, 0}};
        const auto c = kmeans_palette(samples, 1, 10, 1);
        CHECK(c[0].a == doctest::Approx(2.0));
        CHECK(c[0].b == doctest::Approx(6.0));
    }
    SUBCASE("deterministic, inertia non-increasing") {
        std::mt19937_64 rng(8);
        std::vector<AbPoint> samples;
        for (int i = 0; i < 3000; ++i) samples.push_back(random_in_gamut(rng));
        const auto r1 = kmeans(samples, 16, 30, 123);
        const auto r2 = kmeans(samples, 16, 30, 123);
        CHECK(r1.centers == r2.centers);
        for (std::size_t i = 1; i < r1.inertia.size(); ++i) CHECK(r1.inertia[i] <= r1.inertia[i - 1]);
    }
    SUBCASE("too many clusters") {
        const std::vector<AbPoint> samples{{1, 1}, {1, 1}, {2, 2}};
        CHECK_THROWS_AS(kmeans_palette(samples, 3, 10, 1), ConfigError);
    }
    SUBCASE("grid from a palette decodes to its centers") {
        const ColorBinGrid g = grid_from_centers({{-20, 0}, {20, 0}}, 10);
        CHECK(g.size() == 2);
        CHECK(quantize_ab({15, 3}, g) == 1);
    }
}
