#include "hilite/pipeline.hpp"

#include "hilite/errors.hpp"
#include "hilite/text_io.hpp"
#include "hilite/wav.hpp"

#include <algorithm>

#include <json.hpp>

namespace hilite {

LoudnessSeries load_loudness(const std::filesystem::path& audio_file, const EngineConfig& cfg) {
    auto ext = audio_file.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") {
        const auto filter = load_filter_config(cfg.filter_file);
        const auto filtered = two_stage_filter(read_wav(audio_file), filter, cfg.resample);
        return loudness_series(filtered, filter.channel_gains, cfg.loudness);
    }
    return parse_loudness_jsonl(read_text_file(audio_file), cfg.loudness.window_s,
                                cfg.loudness.floor_db, audio_file.string());
}

GameInputs load_game_inputs(const GameManifest& manifest, const EngineConfig& cfg) {
    GameInputs in;
    in.record = load_game_record(manifest);
    in.readings = parse_readings_jsonl(read_text_file(manifest.readings_file),
                                       manifest.readings_file.string());
    in.loudness = load_loudness(manifest.audio_file, cfg);
    in.flows = parse_flow_jsonl(read_text_file(manifest.motion_file), manifest.motion_file.string());
    in.video_len_s = in.loudness.end_ts_s() + 0.5 * in.loudness.window_s;
    if (!in.readings.empty()) {
        in.video_len_s = std::max(in.video_len_s, in.readings.back().video_ts_s);
    }
    return in;
}

AlignResult align_game(const GameInputs& inputs, const EngineConfig& cfg) {
    const auto debounced = debounce_readings(inputs.readings, cfg.align.debounce_k);
    auto result = align(inputs.record.events, debounced, cfg.align);
    for (const auto& [a, b] : find_ordering_ties(inputs.record.events)) {
        result.warnings.push_back("events " + inputs.record.events[a].event_id + " and " +
                                  inputs.record.events[b].event_id +
                                  " share period and clock; file order kept");
    }
    return result;
}

ScoredGame score_inputs(const GameInputs& inputs, const AlignResult& alignment,
                        const EngineConfig& cfg, const WeightVector& w) {
    auto opts = cfg.cue_options();
    opts.period_length_s = inputs.record.period_length_s;
    return score_game(inputs.record, alignment.aligned, inputs.loudness, inputs.flows, opts, w);
}

std::string serialize_align_result(const std::string& game_id, const AlignResult& result) {
    nlohmann::ordered_json j;
    j["game_id"] = game_id;
    auto aligned = nlohmann::ordered_json::array();
    for (const auto& a : result.aligned) {
        aligned.push_back({{"event_id", a.event.event_id}, {"vts", a.video_ts_s},
                           {"home_score", a.event.home_score},
                           {"visiting_score", a.event.visiting_score}, {"period", a.event.period}});
    }
    j["aligned"] = std::move(aligned);
    auto unmatched = nlohmann::ordered_json::array();
    for (const auto& u : result.unmatched) {
        unmatched.push_back({{"event_id", u.event.event_id}, {"reason", u.reason}});
    }
    j["unmatched"] = std::move(unmatched);
    j["warnings"] = result.warnings;
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> discover_manifests(const std::filesystem::path& dir) {
    if (!std::filesystem::exists(dir)) {
        throw InputError("no such directory " + dir.string());
    }
    std::vector<std::filesystem::path> out;
    if (std::filesystem::exists(dir / "manifest.json")) {
        out.push_back(dir / "manifest.json");
        return out;
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "manifest.json")) {
            out.push_back(entry.path() / "manifest.json");
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace hilite
