#pragma once

#include "hilite/audio_loudness.hpp"
#include "hilite/excitement.hpp"
#include "hilite/highlight.hpp"
#include "hilite/learning.hpp"
#include "hilite/motion_cue.hpp"
#include "hilite/scoreboard_align.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace hilite {

// Every tunable of the engine.
struct EngineConfig {
    AudioCueOptions audio;         // m = 7, window (3.0, 1.0)
    LoudnessOptions loudness;      // window 0.4 s, hop 0.1 s, floor -70 dB
    std::string filter_file;       // two-stage coefficients
    bool resample = false;
    AlignConfig align;             // k = 3, clock tolerance 2 s, latency 0
    MotionWindow motion;           // (3.0, 1.0)
    double period_length_s = kDefaultPeriodLength;
    LearnOptions learn;            // step 0.05, n_min 10, training objective
    ClipOptions clip;              // 7.0 s, 1.5 s post
    int top_n = 10;

    CueOptions cue_options() const { return {audio, motion, period_length_s}; }
    bool operator==(const EngineConfig& o) const;
};

// Path of the coefficient file shipped with the build.
std::string default_filter_file();

EngineConfig default_config();

// TOML-style `key = value` lines; `#` starts a comment. Unknown keys are rejected.
EngineConfig parse_config(std::string_view text, const std::string& source = "config");
std::string serialize_config(const EngineConfig& cfg);
EngineConfig load_config(const std::filesystem::path& path);

// Applies one `key=value` override (as from a command-line flag).
void set_config_value(EngineConfig& cfg, std::string_view key, std::string_view value);

// Throws ValidationError if any field is outside its documented range.
void validate(const EngineConfig& cfg);

} // namespace hilite
