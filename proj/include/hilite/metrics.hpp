#pragma once

#include <span>
#include <string>
#include <vector>

namespace hilite {

struct ConfusionCounts {
    long tp = 0, fp = 0, fn = 0, tn = 0;

    long total() const { return tp + fp + fn + tn; }
};

// Matthews correlation; 0 when any marginal product term is zero.
double mcc(const ConfusionCounts& c);

// Cohen's kappa over two equal-length label sequences. When chance agreement is 1 the
// value is 1 if observed agreement is also 1, otherwise 0.
double cohen_kappa(std::span<const int> labels_a, std::span<const int> labels_b);

struct KappaResult {
    double kappa = 0.0;
    double mean_item_agreement = 0.0; // P-bar
    double chance_agreement = 0.0;    // P-bar_e
    bool degenerate = false;          // P-bar_e == 1; kappa set to 1 by convention
};

// Rows are items, columns categories; every row must sum to `raters`.
KappaResult fleiss_kappa(const std::vector<std::vector<int>>& table, int raters);

struct McNemarResult {
    double chi2 = 0.0;
    bool significant_at_95 = false;
};

inline constexpr double kChi2Critical95 = 3.84;

// Yates-corrected statistic on the discordant counts b and c.
McNemarResult mcnemar_yates(long b, long c);

} // namespace hilite
