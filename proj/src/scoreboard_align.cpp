#include "hilite/scoreboard_align.hpp"

#include "hilite/errors.hpp"
#include "hilite/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <json.hpp>

namespace hilite {

namespace {

struct Run {
    std::size_t begin;
    std::size_t end; // exclusive
};

std::vector<Run> state_runs(const std::vector<ScoreboardReading>& r) {
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i < r.size()) {
        std::size_t j = i + 1;
        while (j < r.size() && same_state(r[j], r[i])) {
            ++j;
        }
        runs.push_back({i, j});
        i = j;
    }
    return runs;
}

} // namespace

std::vector<ScoreboardReading> debounce_readings(const std::vector<ScoreboardReading>& readings,
                                                 int k) {
    if (k <= 1) {
        return readings;
    }
    const auto runs = state_runs(readings);
    std::vector<const Run*> stable;
    for (const auto& run : runs) {
        if (run.end - run.begin >= static_cast<std::size_t>(k)) {
            stable.push_back(&run);
        }
    }
    std::vector<ScoreboardReading> out;
    if (stable.empty()) {
        return out;
    }
    out.reserve(readings.size());

    // Gap readings between two stable runs: keep the previous state up to the first
    // occurrence of the next state, then keep the next state.
    auto keep_gap = [&](std::size_t begin, std::size_t end, const ScoreboardReading* prev,
                        const ScoreboardReading* next) {
        bool reached_next = false;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& r = readings[i];
            if (next && same_state(r, *next)) {
                reached_next = true;
                out.push_back(r);
            } else if (!reached_next && prev && same_state(r, *prev)) {
                out.push_back(r);
            }
        }
    };

    keep_gap(0, stable.front()->begin, nullptr, &readings[stable.front()->begin]);
    for (std::size_t s = 0; s < stable.size(); ++s) {
        const auto& run = *stable[s];
        out.insert(out.end(), readings.begin() + static_cast<std::ptrdiff_t>(run.begin),
                   readings.begin() + static_cast<std::ptrdiff_t>(run.end));
        const std::size_t gap_end = s + 1 < stable.size() ? stable[s + 1]->begin : readings.size();
        const ScoreboardReading* next = s + 1 < stable.size() ? &readings[stable[s + 1]->begin]
                                                              : nullptr;
        keep_gap(run.end, gap_end, &readings[run.begin], next);
    }
    return out;
}

std::vector<ScoreboardReading> stable_transitions(const std::vector<ScoreboardReading>& readings) {
    std::vector<ScoreboardReading> out;
    for (const auto& r : readings) {
        if (out.empty() || !same_state(out.back(), r)) {
            out.push_back(r);
        }
    }
    return out;
}

AlignResult align(const std::vector<BasketEvent>& events,
                  const std::vector<ScoreboardReading>& debounced, const AlignConfig& cfg) {
    AlignResult result;
    if (events.empty()) {
        return result;
    }
    const auto transitions = stable_transitions(debounced);
    const double span_begin = debounced.empty() ? 0.0 : debounced.front().video_ts_s;

    // Score pairs claimed by more than one stats row cannot be told apart on the scoreboard.
    std::map<std::pair<int, int>, int> pair_count;
    for (const auto& ev : events) {
        ++pair_count[{ev.home_score, ev.visiting_score}];
    }

    std::size_t cursor = 0;
    for (const auto& ev : events) {
        if (pair_count[{ev.home_score, ev.visiting_score}] > 1) {
            result.unmatched.push_back(
                {ev, "conflict: score pair " + std::to_string(ev.home_score) + "-" +
                         std::to_string(ev.visiting_score) + " claimed by several stats rows"});
            continue;
        }
        std::size_t j = cursor;
        while (j < transitions.size() &&
               !(transitions[j].home == ev.home_score &&
                 transitions[j].visiting == ev.visiting_score && transitions[j].period == ev.period)) {
            ++j;
        }
        if (j == transitions.size()) {
            result.unmatched.push_back({ev, "score pair never observed on the scoreboard"});
            continue;
        }
        const auto& t = transitions[j];
        cursor = j + 1;
        if (std::abs(t.clock_s - ev.game_clock_s) > cfg.clock_tolerance_s) {
            result.warnings.push_back("event " + ev.event_id + ": scoreboard clock " +
                                      format_fixed(t.clock_s, 1) + " s vs stats clock " +
                                      format_fixed(ev.game_clock_s, 1) + " s");
        }
        const double vts = std::max(span_begin, t.video_ts_s - cfg.scoreboard_latency_s);
        result.aligned.push_back({ev, vts});
    }
    return result;
}

std::vector<ScoreboardReading> parse_readings_jsonl(std::string_view text,
                                                    const std::string& source) {
    std::vector<ScoreboardReading> out;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) {
            continue;
        }
        ScoreboardReading r;
        try {
            const auto j = nlohmann::json::parse(lines[i]);
            r.video_ts_s = j.at("vts").get<double>();
            r.home = j.at("home").get<int>();
            r.visiting = j.at("visiting").get<int>();
            r.period = j.at("period").get<int>();
            r.clock_s = j.at("clock").get<double>();
            r.confidence = j.value("conf", 1.0);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source, i + 1, e.what());
        }
        if (r.video_ts_s < 0.0) {
            throw ParseError(source, i + 1, "negative video timestamp");
        }
        if (r.confidence < 0.0 || r.confidence > 1.0) {
            throw ParseError(source, i + 1, "confidence outside [0, 1]");
        }
        if (!out.empty() && !(r.video_ts_s > out.back().video_ts_s)) {
            throw ParseError(source, i + 1, "readings not strictly increasing in vts");
        }
        out.push_back(r);
    }
    return out;
}

std::string serialize_readings_jsonl(const std::vector<ScoreboardReading>& readings) {
    std::string out;
    for (const auto& r : readings) {
        nlohmann::ordered_json j;
        j["vts"] = r.video_ts_s;
        j["home"] = r.home;
        j["visiting"] = r.visiting;
        j["period"] = r.period;
        j["clock"] = r.clock_s;
        j["conf"] = r.confidence;
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace hilite
