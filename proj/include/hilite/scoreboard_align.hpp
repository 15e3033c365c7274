#pragma once

#include "hilite/game_data.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hilite {

struct ScoreboardReading {
    double video_ts_s = 0.0;
    int home = 0;
    int visiting = 0;
    int period = 1;
    double clock_s = 0.0;
    double confidence = 1.0;

    bool operator==(const ScoreboardReading&) const = default;
};

inline bool same_state(const ScoreboardReading& a, const ScoreboardReading& b) {
    return a.home == b.home && a.visiting == b.visiting && a.period == b.period;
}

struct AlignConfig {
    int debounce_k = 3;
    double clock_tolerance_s = 2.0;
    double scoreboard_latency_s = 0.0;
};

struct AlignedBasket {
    BasketEvent event;
    double video_ts_s = 0.0;
};

struct UnmatchedEvent {
    BasketEvent event;
    std::string reason;
};

struct AlignResult {
    std::vector<AlignedBasket> aligned;
    std::vector<UnmatchedEvent> unmatched;
    std::vector<std::string> warnings;
};

// Drops readings that belong to unstable runs (a (home, visiting, period) state seen for
// fewer than k consecutive readings). Readings of an accepted state that precede its first
// stable run are kept when they follow the previous accepted state, so a misread inside the
// first frames of a new state does not delay its onset. The result contains only runs of
// length >= k, which makes the operation idempotent.
std::vector<ScoreboardReading> debounce_readings(const std::vector<ScoreboardReading>& readings,
                                                 int k);

// First reading of every state change.
std::vector<ScoreboardReading> stable_transitions(const std::vector<ScoreboardReading>& readings);

// Matches events against the transitions of an already-debounced stream.
AlignResult align(const std::vector<BasketEvent>& events,
                  const std::vector<ScoreboardReading>& debounced, const AlignConfig& cfg);

// JSON Lines `{vts, home, visiting, period, clock, conf}`.
std::vector<ScoreboardReading> parse_readings_jsonl(std::string_view text,
                                                    const std::string& source = "readings");
std::string serialize_readings_jsonl(const std::vector<ScoreboardReading>& readings);

} // namespace hilite
