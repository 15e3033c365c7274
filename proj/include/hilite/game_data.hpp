#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hilite {

enum class BasketType { FreeThrow, Dunk, TipShot, ThreeJumper, Layup, Jumper };

inline constexpr BasketType kAllBasketTypes[] = {
    BasketType::FreeThrow, BasketType::Dunk,  BasketType::TipShot,
    BasketType::ThreeJumper, BasketType::Layup, BasketType::Jumper,
};

std::string_view to_string(BasketType type);
std::optional<BasketType> basket_type_from_string(std::string_view token);
int point_value(BasketType type);

inline constexpr double kDefaultPeriodLength = 1200.0;

struct BasketEvent {
    std::string event_id;
    std::string player;
    BasketType basket_type = BasketType::Jumper;
    int period = 1;
    int home_score = 0;     // after the basket
    int visiting_score = 0; // after the basket
    double game_clock_s = 0.0;

    bool operator==(const BasketEvent&) const = default;
};

using Roster = std::map<std::string, double>;

struct GameRecord {
    std::string game_id;
    std::string home_team;
    std::string visiting_team;
    double period_length_s = kDefaultPeriodLength;
    Roster roster;
    std::vector<BasketEvent> events;
};

// "M:SS" or "MM:SS" -> seconds.
double clock_to_seconds(std::string_view mm_ss);
std::string seconds_to_clock(double seconds);

// Event ids are assigned from file order as e001, e002, ...
std::string make_event_id(std::size_t index);

std::vector<BasketEvent> parse_play_by_play(std::string_view text,
                                            double period_length_s = kDefaultPeriodLength,
                                            const std::string& source = "play-by-play");
std::string serialize_play_by_play(const std::vector<BasketEvent>& events);

// Index pairs (i, i+1) of consecutive events sharing period and clock. File order is kept.
std::vector<std::pair<std::size_t, std::size_t>> find_ordering_ties(
    const std::vector<BasketEvent>& events);

// Throws ValidationError if any event's player is missing from the roster.
void check_roster_coverage(const GameRecord& game);

Roster parse_roster(std::string_view text, const std::string& source = "roster");
std::string serialize_roster(const Roster& roster);

struct GameManifest {
    std::string game_id;
    std::string home_team;
    std::string visiting_team;
    double period_length_s = kDefaultPeriodLength;
    std::filesystem::path roster_file;
    std::filesystem::path stats_file;
    std::filesystem::path readings_file;
    std::filesystem::path audio_file;
    std::filesystem::path motion_file;
};

// Relative file paths are resolved against the manifest's directory.
// period_length_s falls back to `default_period_length_s` when the manifest omits it.
GameManifest load_manifest(const std::filesystem::path& path,
                           double default_period_length_s = kDefaultPeriodLength);
std::string serialize_manifest(const GameManifest& manifest);

GameRecord load_game_record(const GameManifest& manifest);

} // namespace hilite
