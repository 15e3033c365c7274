#pragma once

#include "hilite/config.hpp"
#include "hilite/excitement.hpp"
#include "hilite/game_data.hpp"
#include "hilite/highlight.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hilite {

struct GameInputs {
    GameRecord record;
    std::vector<ScoreboardReading> readings;
    LoudnessSeries loudness;
    std::vector<FlowFrame> flows;
    double video_len_s = 0.0;
};

// `.wav` audio is filtered and measured; anything else is read as a loudness cache.
LoudnessSeries load_loudness(const std::filesystem::path& audio_file, const EngineConfig& cfg);

GameInputs load_game_inputs(const GameManifest& manifest, const EngineConfig& cfg);

AlignResult align_game(const GameInputs& inputs, const EngineConfig& cfg);

ScoredGame score_inputs(const GameInputs& inputs, const AlignResult& alignment,
                        const EngineConfig& cfg, const WeightVector& w);

std::string serialize_align_result(const std::string& game_id, const AlignResult& result);

// Sorted `*/manifest.json` under dir, or dir/manifest.json itself.
std::vector<std::filesystem::path> discover_manifests(const std::filesystem::path& dir);

} // namespace hilite
