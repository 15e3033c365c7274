#pragma once

#include "hilite/audio_loudness.hpp"
#include "hilite/excitement.hpp"
#include "hilite/game_data.hpp"
#include "hilite/learning.hpp"
#include "hilite/motion_cue.hpp"
#include "hilite/scoreboard_align.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace hilite {

struct SynthConfig {
    std::uint64_t seed = 7;
    int n_games = 25;
    int baskets_per_game = 70; // including free throws
    // Indexed like kAllBasketTypes: FreeThrow, Dunk, TipShot, ThreeJumper, Layup, Jumper.
    std::array<double, 6> type_mixture{0.341, 0.083, 0.040, 0.150, 0.186, 0.200};
    double misread_rate = 0.0;
    double vote_noise = 0.1;
    WeightVector planted_weights = reference_weights();
    int raters = kDefaultRaters;
    int pairs_per_game = 40;

    double frame_interval_s = 0.5;      // scoreboard sampling
    double scoreboard_latency_s = 0.0;  // scoreboard update lag in the generated stream
    double loudness_hop_s = 0.1;
    double loudness_window_s = 0.4;
    double loudness_floor_db = kDefaultLoudnessFloorDb;
    double flow_interval_s = 0.2;
    int flow_vectors = 16;
    double coupling_noise = 0.05;       // noise between hidden excitement and audio/motion
    double min_clock_gap_s = 5.0;
};

// Throws ValidationError on an invalid mixture or rates.
void validate(const SynthConfig& cfg);

struct SynthGame {
    GameRecord record;
    std::vector<ScoreboardReading> readings;
    LoudnessSeries loudness;
    std::vector<FlowFrame> flows;
    std::vector<double> true_vts; // per event, same order as record.events
    std::vector<double> hidden_excitement;
    double video_len_s = 0.0;
};

SynthGame gen_game(const SynthConfig& cfg, int index);

// Random in-game pairs whose vote majority follows the planted combined score; each vote
// flips independently with probability vote_noise. Pairs with equal planted scores are
// never generated.
std::vector<ABPair> gen_ground_truth(const std::vector<ScoredGame>& games,
                                     const WeightVector& planted, double vote_noise, int raters,
                                     int pairs_per_game, std::uint64_t seed);

// Writes roster.csv, stats.csv, readings.jsonl, loudness.jsonl, flow.jsonl and manifest.json
// under dir; returns the manifest path.
std::filesystem::path write_synth_game(const SynthGame& game, const std::filesystem::path& dir);

} // namespace hilite
