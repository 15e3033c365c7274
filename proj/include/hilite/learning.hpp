#pragma once

#include "hilite/excitement.hpp"
#include "hilite/kernels.hpp"
#include "hilite/metrics.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hilite {

inline constexpr int kDefaultRaters = 15;

struct ABPair {
    std::string game_id;
    std::string basket_a;
    std::string basket_b;
    int votes_a = 0;
    int votes_b = 0;

    int raters() const { return votes_a + votes_b; }
    int agreement() const { return std::max(votes_a, votes_b); }
    bool decided() const { return votes_a != votes_b; }
    bool operator==(const ABPair&) const = default;
};

// CSV `game_id,basket_a,basket_b,votes_a,votes_b`.
std::vector<ABPair> parse_pairs_csv(std::string_view text, const std::string& source = "pairs");
std::string serialize_pairs_csv(const std::vector<ABPair>& pairs);

std::vector<ABPair> filter_pairs_by_agreement(const std::vector<ABPair>& pairs, int n_min);

// Every 5-tuple of nonnegative multiples of `step` summing to 1, in ascending
// lexicographic order over (audio, player, score_diff, basket_type, motion).
std::vector<WeightVector> enumerate_weight_grid(double step);

// Normalized cues by (game_id, event_id).
class CueIndex {
public:
    CueIndex() = default;
    explicit CueIndex(const std::vector<ScoredGame>& games);

    const CueVector& at(const std::string& game_id, const std::string& event_id) const;
    bool contains(const std::string& game_id, const std::string& event_id) const;

private:
    std::map<std::pair<std::string, std::string>, CueVector> cues_;
};

struct MatchCount {
    long matches = 0;
    long total = 0;

    double percent() const { return total ? 100.0 * static_cast<double>(matches) / total : 0.0; }
};

// System picks the basket with the higher combined score; equal scores never match.
MatchCount pairwise_match_count(const WeightVector& w, const std::vector<ABPair>& pairs,
                                const CueIndex& cues);

// "Positive" means basket A preferred. An equal-score decision counts as a disagreement.
ConfusionCounts pairwise_confusion(const WeightVector& w, const std::vector<ABPair>& pairs,
                                   const CueIndex& cues);

enum class FoldObjective { Training, HeldOut };

std::string_view to_string(FoldObjective objective);
FoldObjective fold_objective_from_string(std::string_view s);

struct LearnOptions {
    double grid_step = 0.05;
    int min_agreement = 10;
    FoldObjective objective = FoldObjective::Training;
    bool parallel = true;
};

struct FoldResult {
    std::string held_out_game;
    WeightVector weights;
    MatchCount training;
    MatchCount held_out;
};

struct CvReport {
    std::vector<FoldResult> folds;
    WeightVector final_weights;
    MatchCount overall;
    double overall_mcc = 0.0;
    std::size_t grid_size = 0;
    std::size_t pairs_used = 0;
    LearnOptions options;

    double mean_held_out_percent() const;
};

// Leave-one-game-out cross-validation over the simplex grid. Per fold the winner maximizes
// matches on the objective set; ties go to the larger minimum matched margin, then to the
// lexicographically smallest vector. Final weights are the renormalized fold mean.
CvReport learn_weights(const std::vector<ScoredGame>& games, const std::vector<ABPair>& pairs,
                       const LearnOptions& opts);

std::string serialize_cv_report(const CvReport& report);

struct CuePerformance {
    std::string name;
    MatchCount matches;
    double mcc = 0.0;
    // Against the combined system, when combined weights are given.
    std::optional<McNemarResult> vs_combined;
    long cue_only_correct = 0;
    long combined_only_correct = 0;
};

// One row per single cue (one-hot weights), plus a "combined" row when weights are given.
std::vector<CuePerformance> evaluate_cues(const std::vector<ABPair>& pairs, const CueIndex& cues,
                                          const std::optional<WeightVector>& combined);

struct AgreementRow {
    int threshold = 0;
    std::size_t pairs = 0;
    double mean_pairwise_agreement = 0.0; // percent
    double mean_cohen_kappa = 0.0;
    double fleiss_kappa = 0.0;
};

// Rater identity is not recorded in A/B counts, so each pair's votes are dealt to rater
// slots by a seeded shuffle before computing the pairwise Cohen average.
std::vector<AgreementRow> agreement_table(const std::vector<ABPair>& pairs, int first_threshold,
                                          int last_threshold, std::uint64_t seed = 0x5eed);

std::string_view agreement_label(double kappa);

namespace detail {

// Dense game numbering (sorted ids) plus prepared pairs for the grid kernel.
struct PreparedPairs {
    std::vector<std::string> games;
    std::vector<kernels::PreparedPair> pairs;
};

PreparedPairs prepare_pairs(const std::vector<ABPair>& pairs, const CueIndex& cues);

} // namespace detail

} // namespace hilite
