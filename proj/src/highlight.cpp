#include "hilite/highlight.hpp"

#include "hilite/errors.hpp"
#include "hilite/text_io.hpp"

#include <algorithm>

#include <json.hpp>

namespace hilite {

std::vector<ScoredBasket> select_top_n(const std::vector<ScoredBasket>& baskets,
                                       const std::vector<std::size_t>& ranked, int n) {
    if (n < 1) {
        throw ValidationError("top-N must be >= 1");
    }
    if (ranked.empty()) {
        throw ValidationError("select_top_n: no ranked baskets");
    }
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(n), ranked.size());
    std::vector<ScoredBasket> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back(baskets.at(ranked[i]));
    }
    std::stable_sort(out.begin(), out.end(), [](const ScoredBasket& a, const ScoredBasket& b) {
        return a.aligned.video_ts_s < b.aligned.video_ts_s;
    });
    return out;
}

ClipSpec clip_bounds(double basket_vts_s, double duration_s, double post_s, double video_len_s) {
    if (!(video_len_s > 0.0)) {
        throw ValidationError("clip_bounds: video length must be positive");
    }
    if (!(post_s > 0.0) || !(post_s < duration_s)) {
        throw ValidationError("clip_bounds: need 0 < post < duration");
    }
    ClipSpec c;
    c.basket_vts_s = basket_vts_s;
    if (video_len_s <= duration_s) {
        c.start_s = 0.0;
        c.end_s = video_len_s;
        return c;
    }
    c.end_s = basket_vts_s + post_s;
    c.start_s = c.end_s - duration_s;
    if (c.start_s < 0.0) {
        c.start_s = 0.0;
        c.end_s = duration_s;
    } else if (c.end_s > video_len_s) {
        c.end_s = video_len_s;
        c.start_s = video_len_s - duration_s;
    }
    return c;
}

HighlightEdl build_edl(const ScoredGame& game, int top_n, double video_len_s,
                       const ClipOptions& opts) {
    HighlightEdl edl;
    edl.game_id = game.game_id;
    if (game.baskets.empty()) {
        edl.warnings.push_back("game " + game.game_id + " has no scored baskets");
        return edl;
    }
    const auto ranked = rank_baskets(game.baskets);
    for (const auto& b : select_top_n(game.baskets, ranked, top_n)) {
        auto clip = clip_bounds(b.aligned.video_ts_s, opts.duration_s, opts.post_s, video_len_s);
        clip.event_id = b.aligned.event.event_id;
        clip.score = b.score;
        clip.cues = b.cues.norm;
        clip.period = b.aligned.event.period;
        if (!edl.clips.empty() && clip.start_s < edl.clips.back().end_s) {
            auto& prev = edl.clips.back();
            if (opts.merge_overlaps) {
                edl.warnings.push_back("merged overlapping clips " + prev.event_id + " and " +
                                       clip.event_id);
                prev.end_s = std::max(prev.end_s, clip.end_s);
                prev.event_id += "+" + clip.event_id;
                prev.score = std::max(prev.score, clip.score);
                continue;
            }
            edl.warnings.push_back("clips " + prev.event_id + " and " + clip.event_id + " overlap");
        }
        edl.clips.push_back(std::move(clip));
    }
    for (const auto& c : edl.clips) {
        edl.total_duration_s += c.duration();
    }
    return edl;
}

HalfSplit half_distribution(const HighlightEdl& edl) {
    HalfSplit h;
    for (const auto& c : edl.clips) {
        (c.period <= 1 ? h.first : h.second)++;
    }
    return h;
}

EdlFormat edl_format_from_string(std::string_view tag) {
    if (tag == "json") return EdlFormat::Json;
    if (tag == "csv") return EdlFormat::Csv;
    throw ValidationError("unsupported EDL format '" + std::string(tag) + "' (json|csv)");
}

std::string emit_edl(const HighlightEdl& edl, EdlFormat format) {
    if (format == EdlFormat::Csv) {
        std::string out = "event_id,start,end,score\n";
        for (const auto& c : edl.clips) {
            out += c.event_id + ',' + format_fixed(c.start_s, 3) + ',' + format_fixed(c.end_s, 3) +
                   ',' + format_fixed(c.score, 6) + '\n';
        }
        return out;
    }
    nlohmann::ordered_json j;
    j["game_id"] = edl.game_id;
    auto clips = nlohmann::ordered_json::array();
    for (const auto& c : edl.clips) {
        nlohmann::ordered_json jc;
        jc["event_id"] = c.event_id;
        jc["start"] = c.start_s;
        jc["end"] = c.end_s;
        jc["basket_vts"] = c.basket_vts_s;
        jc["period"] = c.period;
        jc["score"] = c.score;
        nlohmann::ordered_json cues;
        for (auto cue : kAllCues) cues[std::string(to_string(cue))] = c.cues[static_cast<std::size_t>(cue)];
        jc["cues"] = std::move(cues);
        clips.push_back(std::move(jc));
    }
    j["clips"] = std::move(clips);
    j["total_duration"] = edl.total_duration_s;
    return j.dump(2) + "\n";
}

HighlightEdl parse_edl_json(std::string_view text, const std::string& source) {
    HighlightEdl edl;
    try {
        const auto j = nlohmann::json::parse(text);
        edl.game_id = j.at("game_id").get<std::string>();
        for (const auto& jc : j.at("clips")) {
            ClipSpec c;
            c.event_id = jc.at("event_id").get<std::string>();
            c.start_s = jc.at("start").get<double>();
            c.end_s = jc.at("end").get<double>();
            c.basket_vts_s = jc.at("basket_vts").get<double>();
            c.period = jc.value("period", 1);
            c.score = jc.value("score", 0.0);
            if (jc.contains("cues")) {
                for (auto cue : kAllCues) {
                    c.cues[static_cast<std::size_t>(cue)] =
                        jc.at("cues").value(std::string(to_string(cue)), 0.0);
                }
            }
            edl.clips.push_back(std::move(c));
        }
        edl.total_duration_s = j.value("total_duration", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return edl;
}

std::string emit_cut_script(const HighlightEdl& edl, const std::string& video_path) {
    std::string out = "#!/bin/sh\n# Highlight cuts for " + edl.game_id + "\nset -e\n";
    out += "VIDEO=\"${1:-" + video_path + "}\"\n: > concat.txt\n";
    for (std::size_t i = 0; i < edl.clips.size(); ++i) {
        const auto& c = edl.clips[i];
        const std::string name = "clip_" + std::to_string(i + 1) + ".mp4";
        out += "ffmpeg -y -ss " + format_fixed(c.start_s, 3) + " -i \"$VIDEO\" -t " +
               format_fixed(c.duration(), 3) + " -c:v libx264 -c:a aac " + name + "\n";
        out += "echo \"file '" + name + "'\" >> concat.txt\n";
    }
    out += "ffmpeg -y -f concat -safe 0 -i concat.txt -c copy highlights_" + edl.game_id + ".mp4\n";
    return out;
}

} // namespace hilite
