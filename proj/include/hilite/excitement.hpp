#pragma once

#include "hilite/audio_loudness.hpp"
#include "hilite/game_data.hpp"
#include "hilite/kernels.hpp"
#include "hilite/motion_cue.hpp"
#include "hilite/scoreboard_align.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hilite {

enum class Cue : std::size_t { Audio = 0, Player = 1, ScoreDiff = 2, BasketType = 3, Motion = 4 };

inline constexpr std::size_t kCueCount = 5;
inline constexpr Cue kAllCues[] = {Cue::Audio, Cue::Player, Cue::ScoreDiff, Cue::BasketType,
                                   Cue::Motion};

std::string_view to_string(Cue cue);
std::optional<Cue> cue_from_string(std::string_view name);

using Cues5 = kernels::Cues5;

struct CueVector {
    Cues5 raw{};
    Cues5 norm{};

    double operator[](Cue c) const { return norm[static_cast<std::size_t>(c)]; }
};

// Five nonnegative weights summing to 1 (within 1e-9).
class WeightVector {
public:
    WeightVector() = default; // uniform
    explicit WeightVector(const Cues5& w);

    static WeightVector one_hot(Cue cue);
    // Renormalizes nonnegative weights with a positive sum.
    static WeightVector normalized(const Cues5& w);

    const Cues5& values() const { return w_; }
    double operator[](Cue c) const { return w_[static_cast<std::size_t>(c)]; }
    bool operator==(const WeightVector&) const = default;

private:
    Cues5 w_{0.2, 0.2, 0.2, 0.2, 0.2};
};

// Default scoring weights: audio 55.6%, player 4.8%, score differential 14.6%,
// basket type 14.8%, motion 10.2%.
WeightVector reference_weights();

double player_cue(const BasketEvent& event, const Roster& roster);
double score_diff_cue(const BasketEvent& event, double period_length_s = kDefaultPeriodLength);
// Dunk 1.0 > TipShot 0.75 > ThreeJumper 0.5 > Layup 0.25 > Jumper 0.0. Free throws throw.
double basket_type_cue(const BasketEvent& event);

// Min-max scaling; all-equal input maps to 0.5.
std::vector<double> normalize_per_game(const std::vector<double>& raw);

double combine(const CueVector& cues, const WeightVector& w);

struct ScoredBasket {
    AlignedBasket aligned;
    CueVector cues;
    double score = 0.0;
};

struct ScoredGame {
    std::string game_id;
    WeightVector weights;
    std::vector<ScoredBasket> baskets; // chronological
};

struct CueOptions {
    AudioCueOptions audio;
    MotionWindow motion;
    double period_length_s = kDefaultPeriodLength;
};

// Raw and per-game normalized cues for every aligned non-free-throw basket, scored under w.
ScoredGame score_game(const GameRecord& game, const std::vector<AlignedBasket>& aligned,
                      const LoudnessSeries& loudness, const std::vector<FlowFrame>& flows,
                      const CueOptions& opts, const WeightVector& w);

// Recomputes every score under new weights.
void rescore(ScoredGame& game, const WeightVector& w);

// Indices into `baskets`, descending by score; ties go to the earlier video timestamp.
std::vector<std::size_t> rank_baskets(const std::vector<ScoredBasket>& baskets);
// Same ordering keyed on one normalized cue.
std::vector<std::size_t> rank_by_cue(const std::vector<ScoredBasket>& baskets, Cue cue);

std::string serialize_scored_game(const ScoredGame& game);
ScoredGame parse_scored_game(std::string_view text, const std::string& source = "scored");

std::string serialize_weights(const WeightVector& w);
WeightVector parse_weights(std::string_view text, const std::string& source = "weights");

} // namespace hilite
