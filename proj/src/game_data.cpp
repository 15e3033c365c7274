#include "hilite/game_data.hpp"

#include "hilite/errors.hpp"
#include "hilite/text_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace hilite {

namespace {

constexpr std::string_view kStatsHeader =
    "player,basket_type,period,home_score,visiting_score,game_clock";
constexpr std::string_view kRosterHeader = "player,ppg";

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::string header_of(const std::vector<std::string>& fields) {
    std::string joined;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) joined += ',';
        joined += fields[i];
    }
    return joined;
}

} // namespace

std::string_view to_string(BasketType type) {
    switch (type) {
    case BasketType::FreeThrow: return "FreeThrow";
    case BasketType::Dunk: return "Dunk";
    case BasketType::TipShot: return "TipShot";
    case BasketType::ThreeJumper: return "ThreeJumper";
    case BasketType::Layup: return "Layup";
    case BasketType::Jumper: return "Jumper";
    }
    return "?";
}

std::optional<BasketType> basket_type_from_string(std::string_view token) {
    for (auto t : kAllBasketTypes) {
        if (to_string(t) == token) {
            return t;
        }
    }
    return std::nullopt;
}

int point_value(BasketType type) {
    switch (type) {
    case BasketType::FreeThrow: return 1;
    case BasketType::ThreeJumper: return 3;
    default: return 2;
    }
}

double clock_to_seconds(std::string_view mm_ss) {
    const auto s = trim(mm_ss);
    const auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon > 2 || s.size() != colon + 3) {
        throw ValidationError("malformed clock '" + std::string(s) + "' (expected MM:SS)");
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i != colon && !is_digit(s[i])) {
            throw ValidationError("malformed clock '" + std::string(s) + "' (expected MM:SS)");
        }
    }
    int minutes = 0;
    for (std::size_t i = 0; i < colon; ++i) {
        minutes = minutes * 10 + (s[i] - '0');
    }
    const int seconds = (s[colon + 1] - '0') * 10 + (s[colon + 2] - '0');
    if (seconds >= 60) {
        throw ValidationError("clock seconds out of range in '" + std::string(s) + "'");
    }
    return 60.0 * minutes + seconds;
}

std::string seconds_to_clock(double seconds) {
    const long total = std::lround(seconds);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%02ld:%02ld", total / 60, total % 60);
    return buf;
}

std::string make_event_id(std::size_t index) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "e%03zu", index + 1);
    return buf;
}

std::vector<BasketEvent> parse_play_by_play(std::string_view text, double period_length_s,
                                            const std::string& source) {
    std::vector<BasketEvent> events;
    const auto lines = split_lines(text);
    bool header_seen = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (trim(lines[i]).empty()) {
            continue;
        }
        const auto fields = split_csv_line(lines[i]);
        if (!header_seen && header_of(fields) == kStatsHeader) {
            header_seen = true;
            continue;
        }
        header_seen = true;
        if (fields.size() != 6) {
            throw ParseError(source, lineno,
                             "expected 6 fields, got " + std::to_string(fields.size()));
        }
        BasketEvent ev;
        ev.event_id = make_event_id(events.size());
        ev.player = fields[0];
        if (ev.player.empty()) {
            throw ParseError(source, lineno, "empty player name");
        }
        const auto type = basket_type_from_string(fields[1]);
        if (!type) {
            throw ParseError(source, lineno, "unknown basket type '" + fields[1] + "'");
        }
        ev.basket_type = *type;
        ev.period = static_cast<int>(parse_long(fields[2], source, lineno));
        ev.home_score = static_cast<int>(parse_long(fields[3], source, lineno));
        ev.visiting_score = static_cast<int>(parse_long(fields[4], source, lineno));
        if (ev.period < 1) {
            throw ParseError(source, lineno, "period must be >= 1");
        }
        if (ev.home_score < 0 || ev.visiting_score < 0) {
            throw ParseError(source, lineno, "negative score");
        }
        try {
            ev.game_clock_s = clock_to_seconds(fields[5]);
        } catch (const ValidationError& e) {
            throw ParseError(source, lineno, e.what());
        }
        if (ev.game_clock_s > period_length_s) {
            throw ParseError(source, lineno, "clock " + fields[5] + " outside [0, period length]");
        }
        if (!events.empty()) {
            const auto& prev = events.back();
            if (ev.home_score < prev.home_score || ev.visiting_score < prev.visiting_score) {
                throw ParseError(source, lineno,
                                 "score regression from " + std::to_string(prev.home_score) + "-" +
                                     std::to_string(prev.visiting_score) + " to " +
                                     std::to_string(ev.home_score) + "-" +
                                     std::to_string(ev.visiting_score));
            }
            if (ev.period < prev.period ||
                (ev.period == prev.period && ev.game_clock_s > prev.game_clock_s)) {
                throw ParseError(source, lineno, "event out of chronological order");
            }
        }
        events.push_back(std::move(ev));
    }
    return events;
}

std::string serialize_play_by_play(const std::vector<BasketEvent>& events) {
    std::string out(kStatsHeader);
    out += '\n';
    for (const auto& ev : events) {
        std::string player = ev.player;
        if (player.find_first_of(",\"") != std::string::npos) {
            std::string q = "\"";
            for (char c : player) {
                if (c == '"') q += '"';
                q += c;
            }
            player = q + "\"";
        }
        out += player + ',' + std::string(to_string(ev.basket_type)) + ',' +
               std::to_string(ev.period) + ',' + std::to_string(ev.home_score) + ',' +
               std::to_string(ev.visiting_score) + ',' + seconds_to_clock(ev.game_clock_s) + '\n';
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> find_ordering_ties(
    const std::vector<BasketEvent>& events) {
    std::vector<std::pair<std::size_t, std::size_t>> ties;
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].period == events[i - 1].period &&
            events[i].game_clock_s == events[i - 1].game_clock_s) {
            ties.emplace_back(i - 1, i);
        }
    }
    return ties;
}

void check_roster_coverage(const GameRecord& game) {
    for (const auto& ev : game.events) {
        if (!game.roster.count(ev.player)) {
            throw ValidationError("game " + game.game_id + ": player '" + ev.player +
                                  "' (event " + ev.event_id + ") missing from roster");
        }
    }
}

Roster parse_roster(std::string_view text, const std::string& source) {
    Roster roster;
    const auto lines = split_lines(text);
    bool header_seen = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (trim(lines[i]).empty()) {
            continue;
        }
        const auto fields = split_csv_line(lines[i]);
        if (!header_seen && header_of(fields) == kRosterHeader) {
            header_seen = true;
            continue;
        }
        header_seen = true;
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            throw ParseError(source, lineno, "expected columns player,ppg");
        }
        const double ppg = parse_double(fields[1], source, lineno);
        if (ppg < 0.0) {
            throw ParseError(source, lineno, "negative PPG for '" + fields[0] + "'");
        }
        if (!roster.emplace(fields[0], ppg).second) {
            throw ParseError(source, lineno, "duplicate player '" + fields[0] + "'");
        }
    }
    return roster;
}

std::string serialize_roster(const Roster& roster) {
    std::string out(kRosterHeader);
    out += '\n';
    for (const auto& [player, ppg] : roster) {
        out += player + ',' + format_shortest(ppg) + '\n';
    }
    return out;
}

GameManifest load_manifest(const std::filesystem::path& path, double default_period_length_s) {
    const auto text = read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    const auto base = path.parent_path();
    auto resolve = [&](const char* key) -> std::filesystem::path {
        if (!j.contains(key) || !j[key].is_string()) {
            throw ValidationError(path.string() + ": missing string field '" + key + "'");
        }
        std::filesystem::path p = j[key].get<std::string>();
        return p.is_absolute() ? p : base / p;
    };
    GameManifest m;
    try {
        m.game_id = j.at("game_id").get<std::string>();
        m.home_team = j.value("home_team", "");
        m.visiting_team = j.value("visiting_team", "");
        m.period_length_s = j.value("period_length_s", default_period_length_s);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    if (!(m.period_length_s > 0.0)) {
        throw ValidationError(path.string() + ": period_length_s must be positive");
    }
    m.roster_file = resolve("roster_file");
    m.stats_file = resolve("stats_file");
    m.readings_file = resolve("readings_file");
    m.audio_file = resolve("audio_file");
    m.motion_file = resolve("motion_file");
    return m;
}

std::string serialize_manifest(const GameManifest& m) {
    nlohmann::ordered_json j;
    j["game_id"] = m.game_id;
    j["home_team"] = m.home_team;
    j["visiting_team"] = m.visiting_team;
    j["period_length_s"] = m.period_length_s;
    j["roster_file"] = m.roster_file.generic_string();
    j["stats_file"] = m.stats_file.generic_string();
    j["readings_file"] = m.readings_file.generic_string();
    j["audio_file"] = m.audio_file.generic_string();
    j["motion_file"] = m.motion_file.generic_string();
    return j.dump(2) + "\n";
}

GameRecord load_game_record(const GameManifest& manifest) {
    GameRecord g;
    g.game_id = manifest.game_id;
    g.home_team = manifest.home_team;
    g.visiting_team = manifest.visiting_team;
    g.period_length_s = manifest.period_length_s;
    g.roster = parse_roster(read_text_file(manifest.roster_file), manifest.roster_file.string());
    g.events = parse_play_by_play(read_text_file(manifest.stats_file), g.period_length_s,
                                  manifest.stats_file.string());
    check_roster_coverage(g);
    return g;
}

} // namespace hilite
