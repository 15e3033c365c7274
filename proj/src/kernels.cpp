#include "hilite/kernels.hpp"

#include <limits>

namespace hilite::kernels {

namespace {

std::size_t window_count(std::size_t n, std::size_t window, std::size_t hop) {
    if (window == 0 || hop == 0 || n < window) {
        return 0;
    }
    return (n - window) / hop + 1;
}

double mean_square(std::span<const double> x, std::size_t begin, std::size_t window) {
    double acc = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
        const double v = x[begin + k];
        acc += v * v;
    }
    return acc / static_cast<double>(window);
}

// Pair outcome under one weight vector: margin > 0 means the system agreed with the raters.
inline double signed_margin(const Cues5& w, const PreparedPair& p) {
    const double sa = dot5(w, p.cues_a);
    const double sb = dot5(w, p.cues_b);
    return p.majority_a ? sa - sb : sb - sa;
}

void fill_row(const Cues5& w, std::span<const PreparedPair> pairs, std::uint32_t* matches,
              double* margins) {
    for (const auto& p : pairs) {
        const double m = signed_margin(w, p);
        if (m > 0.0) {
            ++matches[p.game];
            if (m < margins[p.game]) {
                margins[p.game] = m;
            }
        }
    }
}

MatchTable make_table(std::size_t n_weights, std::size_t n_games) {
    MatchTable t;
    t.n_weights = n_weights;
    t.n_games = n_games;
    t.matches.assign(n_weights * n_games, 0);
    t.min_margin.assign(n_weights * n_games, std::numeric_limits<double>::infinity());
    return t;
}

} // namespace

std::vector<double> window_mean_square_serial(std::span<const double> x, std::size_t window,
                                              std::size_t hop) {
    const std::size_t n = window_count(x.size(), window, hop);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = mean_square(x, i * hop, window);
    }
    return out;
}

std::vector<double> window_mean_square_parallel(std::span<const double> x, std::size_t window,
                                                std::size_t hop) {
    const std::size_t n = window_count(x.size(), window, hop);
    std::vector<double> out(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = mean_square(x, static_cast<std::size_t>(i) * hop, window);
    }
    return out;
}

MatchTable match_table_serial(std::span<const Cues5> weights, std::span<const PreparedPair> pairs,
                              std::size_t n_games) {
    auto t = make_table(weights.size(), n_games);
    for (std::size_t w = 0; w < weights.size(); ++w) {
        fill_row(weights[w], pairs, &t.matches[w * n_games], &t.min_margin[w * n_games]);
    }
    return t;
}

MatchTable match_table_parallel(std::span<const Cues5> weights,
                                std::span<const PreparedPair> pairs, std::size_t n_games) {
    auto t = make_table(weights.size(), n_games);
    const auto count = static_cast<std::ptrdiff_t>(weights.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t w = 0; w < count; ++w) {
        const auto row = static_cast<std::size_t>(w) * n_games;
        fill_row(weights[static_cast<std::size_t>(w)], pairs, &t.matches[row], &t.min_margin[row]);
    }
    return t;
}

} // namespace hilite::kernels
