#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP variant
// that must produce bit-identical results; tests and the benchmark compare the two.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hilite::kernels {

// Mean of x[i*hop .. i*hop+window) for every full window.
std::vector<double> window_mean_square_serial(std::span<const double> x, std::size_t window,
                                              std::size_t hop);
std::vector<double> window_mean_square_parallel(std::span<const double> x, std::size_t window,
                                                std::size_t hop);

using Cues5 = std::array<double, 5>;

// One A/B pair reduced to what the grid search needs.
struct PreparedPair {
    Cues5 cues_a;
    Cues5 cues_b;
    std::uint32_t game; // dense game index
    bool majority_a;    // raters preferred basket A
};

// Per weight vector and per game: number of matched pairs and the smallest signed margin
// among matched pairs (+inf when none matched). Row-major [weight][game].
struct MatchTable {
    std::size_t n_weights = 0;
    std::size_t n_games = 0;
    std::vector<std::uint32_t> matches;
    std::vector<double> min_margin;

    std::uint32_t match(std::size_t w, std::size_t g) const { return matches[w * n_games + g]; }
    double margin(std::size_t w, std::size_t g) const { return min_margin[w * n_games + g]; }
};

MatchTable match_table_serial(std::span<const Cues5> weights, std::span<const PreparedPair> pairs,
                              std::size_t n_games);
MatchTable match_table_parallel(std::span<const Cues5> weights,
                                std::span<const PreparedPair> pairs, std::size_t n_games);

// Weighted sum in a fixed evaluation order; the one definition of a combined score.
inline double dot5(const Cues5& w, const Cues5& c) {
    return w[0] * c[0] + w[1] * c[1] + w[2] * c[2] + w[3] * c[3] + w[4] * c[4];
}

} // namespace hilite::kernels
