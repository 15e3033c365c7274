#include "hilite/config.hpp"

#include "hilite/errors.hpp"
#include "hilite/text_io.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#ifndef HILITE_DATA_DIR
#define HILITE_DATA_DIR "data"
#endif

namespace hilite {

namespace {

std::string fmt_double(double v) { return format_shortest(v); }

std::string unquote(std::string_view v) {
    v = trim(v);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        return std::string(v.substr(1, v.size() - 2));
    }
    return std::string(v);
}

bool parse_bool(std::string_view v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ValidationError("config: " + key + " must be true or false");
}

struct Field {
    std::function<std::string(const EngineConfig&)> get;
    std::function<void(EngineConfig&, std::string_view)> set;
};

template <typename T>
Field double_field(T EngineConfig::*group, double T::*member) {
    return {[=](const EngineConfig& c) { return fmt_double((c.*group).*member); },
            [=](EngineConfig& c, std::string_view v) {
                (c.*group).*member = parse_double(unquote(v), "config", 0);
            }};
}

template <typename T>
Field int_field(T EngineConfig::*group, int T::*member) {
    return {[=](const EngineConfig& c) { return std::to_string((c.*group).*member); },
            [=](EngineConfig& c, std::string_view v) {
                (c.*group).*member = static_cast<int>(parse_long(unquote(v), "config", 0));
            }};
}

template <typename T>
Field bool_field(T EngineConfig::*group, bool T::*member, std::string key) {
    return {[=](const EngineConfig& c) { return std::string((c.*group).*member ? "true" : "false"); },
            [=](EngineConfig& c, std::string_view v) {
                (c.*group).*member = parse_bool(unquote(v), key);
            }};
}

// Ordered as written by serialize_config.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> f = {
        {"audio.peaks_m", int_field(&EngineConfig::audio, &AudioCueOptions::peaks_m)},
        {"audio.window_pre_s", double_field(&EngineConfig::audio, &AudioCueOptions::pre_s)},
        {"audio.window_post_s", double_field(&EngineConfig::audio, &AudioCueOptions::post_s)},
        {"loudness.window_s", double_field(&EngineConfig::loudness, &LoudnessOptions::window_s)},
        {"loudness.hop_s", double_field(&EngineConfig::loudness, &LoudnessOptions::hop_s)},
        {"loudness.floor_db", double_field(&EngineConfig::loudness, &LoudnessOptions::floor_db)},
        {"loudness.filter_file",
         {[](const EngineConfig& c) { return "\"" + c.filter_file + "\""; },
          [](EngineConfig& c, std::string_view v) { c.filter_file = unquote(v); }}},
        {"loudness.resample",
         {[](const EngineConfig& c) { return std::string(c.resample ? "true" : "false"); },
          [](EngineConfig& c, std::string_view v) { c.resample = parse_bool(unquote(v), "loudness.resample"); }}},
        {"align.debounce_k", int_field(&EngineConfig::align, &AlignConfig::debounce_k)},
        {"align.clock_tolerance_s", double_field(&EngineConfig::align, &AlignConfig::clock_tolerance_s)},
        {"align.scoreboard_latency_s", double_field(&EngineConfig::align, &AlignConfig::scoreboard_latency_s)},
        {"motion.window_pre_s", double_field(&EngineConfig::motion, &MotionWindow::pre_s)},
        {"motion.window_post_s", double_field(&EngineConfig::motion, &MotionWindow::post_s)},
        {"game.period_length_s",
         {[](const EngineConfig& c) { return fmt_double(c.period_length_s); },
          [](EngineConfig& c, std::string_view v) { c.period_length_s = parse_double(unquote(v), "config", 0); }}},
        {"learn.grid_step", double_field(&EngineConfig::learn, &LearnOptions::grid_step)},
        {"learn.min_agreement", int_field(&EngineConfig::learn, &LearnOptions::min_agreement)},
        {"learn.fold_objective",
         {[](const EngineConfig& c) { return "\"" + std::string(to_string(c.learn.objective)) + "\""; },
          [](EngineConfig& c, std::string_view v) { c.learn.objective = fold_objective_from_string(unquote(v)); }}},
        {"highlight.clip_duration_s", double_field(&EngineConfig::clip, &ClipOptions::duration_s)},
        {"highlight.clip_post_s", double_field(&EngineConfig::clip, &ClipOptions::post_s)},
        {"highlight.merge_overlaps", bool_field(&EngineConfig::clip, &ClipOptions::merge_overlaps, "highlight.merge_overlaps")},
        {"highlight.top_n",
         {[](const EngineConfig& c) { return std::to_string(c.top_n); },
          [](EngineConfig& c, std::string_view v) { c.top_n = static_cast<int>(parse_long(unquote(v), "config", 0)); }}},
    };
    return f;
}

} // namespace

bool EngineConfig::operator==(const EngineConfig& o) const {
    for (const auto& [key, field] : fields()) {
        if (field.get(*this) != field.get(o)) return false;
    }
    return true;
}

std::string default_filter_file() { return std::string(HILITE_DATA_DIR) + "/k_weighting_48k.cfg"; }

EngineConfig default_config() {
    EngineConfig c;
    c.filter_file = default_filter_file();
    return c;
}

void set_config_value(EngineConfig& cfg, std::string_view key, std::string_view value) {
    for (const auto& [name, field] : fields()) {
        if (name == key) {
            field.set(cfg, value);
            return;
        }
    }
    throw ValidationError("config: unknown key '" + std::string(key) + "'");
}

EngineConfig parse_config(std::string_view text, const std::string& source) {
    auto cfg = default_config();
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = trim(line.substr(0, hash));
        }
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(source, i + 1, "expected key = value");
        }
        try {
            set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw ParseError(source, i + 1, e.what());
        } catch (const ValidationError& e) {
            throw ParseError(source, i + 1, e.what());
        }
    }
    validate(cfg);
    return cfg;
}

std::string serialize_config(const EngineConfig& cfg) {
    std::string out = "# hilite engine configuration\n";
    std::string group;
    for (const auto& [key, field] : fields()) {
        const auto g = key.substr(0, key.find('.'));
        if (g != group) {
            out += "\n";
            group = g;
        }
        out += key + " = " + field.get(cfg) + "\n";
    }
    return out;
}

EngineConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text_file(path), path.string());
}

void validate(const EngineConfig& c) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(std::string("config: ") + what);
    };
    require(c.audio.peaks_m >= 1, "audio.peaks_m must be >= 1");
    require(c.audio.pre_s >= 0.0 && c.audio.post_s >= 0.0, "audio window must be nonnegative");
    require(c.loudness.hop_s > 0.0 && c.loudness.window_s >= c.loudness.hop_s,
            "loudness needs window_s >= hop_s > 0");
    require(c.loudness.floor_db < 0.0, "loudness.floor_db must be negative");
    require(c.align.debounce_k >= 1, "align.debounce_k must be >= 1");
    require(c.align.clock_tolerance_s >= 0.0, "align.clock_tolerance_s must be >= 0");
    require(c.align.scoreboard_latency_s >= 0.0, "align.scoreboard_latency_s must be >= 0");
    require(c.motion.pre_s >= 0.0 && c.motion.post_s >= 0.0, "motion window must be nonnegative");
    require(c.period_length_s > 0.0, "game.period_length_s must be positive");
    require(c.learn.grid_step > 0.0 && c.learn.grid_step <= 1.0, "learn.grid_step must be in (0, 1]");
    const double steps = std::round(1.0 / c.learn.grid_step);
    require(std::abs(steps * c.learn.grid_step - 1.0) <= 1e-9, "learn.grid_step must divide 1 evenly");
    require(c.learn.min_agreement >= 0, "learn.min_agreement must be >= 0");
    require(c.clip.post_s > 0.0 && c.clip.post_s < c.clip.duration_s,
            "highlight needs 0 < clip_post_s < clip_duration_s");
    require(c.top_n >= 1, "highlight.top_n must be >= 1");
}

} // namespace hilite
