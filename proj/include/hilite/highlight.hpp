#pragma once

#include "hilite/excitement.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hilite {

struct ClipSpec {
    std::string event_id;
    double start_s = 0.0;
    double end_s = 0.0;
    double basket_vts_s = 0.0;
    double score = 0.0;
    Cues5 cues{}; // normalized
    int period = 1;

    double duration() const { return end_s - start_s; }
    bool operator==(const ClipSpec&) const = default;
};

struct HighlightEdl {
    std::string game_id;
    std::vector<ClipSpec> clips; // ascending start_s
    double total_duration_s = 0.0;
    std::vector<std::string> warnings;

    bool operator==(const HighlightEdl& o) const {
        return game_id == o.game_id && clips == o.clips && total_duration_s == o.total_duration_s;
    }
};

struct ClipOptions {
    double duration_s = 7.0;
    double post_s = 1.5;
    bool merge_overlaps = false;
};

// First min(n, size) entries of `ranked` (indices into `baskets`), back in chronological order.
std::vector<ScoredBasket> select_top_n(const std::vector<ScoredBasket>& baskets,
                                       const std::vector<std::size_t>& ranked, int n);

// Clip ends `post_s` after the basket and lasts `duration_s`, shifted to stay inside
// [0, video_len]; a video shorter than the clip yields the whole video.
ClipSpec clip_bounds(double basket_vts_s, double duration_s, double post_s, double video_len_s);

// Ranks, selects, and cuts clips for one scored game.
HighlightEdl build_edl(const ScoredGame& game, int top_n, double video_len_s,
                       const ClipOptions& opts);

struct HalfSplit {
    std::size_t first = 0;
    std::size_t second = 0; // period >= 2, overtime included
};
HalfSplit half_distribution(const HighlightEdl& edl);

enum class EdlFormat { Json, Csv };
EdlFormat edl_format_from_string(std::string_view tag);

std::string emit_edl(const HighlightEdl& edl, EdlFormat format);
HighlightEdl parse_edl_json(std::string_view text, const std::string& source = "edl");

// Shell script of ffmpeg cut commands plus a concat list; never executed by the engine.
std::string emit_cut_script(const HighlightEdl& edl, const std::string& video_path);

} // namespace hilite
