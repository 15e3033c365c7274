#include "hilite/excitement.hpp"

#include "hilite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace hilite {

namespace {

constexpr std::string_view kCueNames[kCueCount] = {"audio", "player", "score_diff",
                                                   "basket_type", "motion"};

double pool_scaled(double value, double lo, double hi) {
    return hi > lo ? (value - lo) / (hi - lo) : 0.5;
}

} // namespace

std::string_view to_string(Cue cue) { return kCueNames[static_cast<std::size_t>(cue)]; }

std::optional<Cue> cue_from_string(std::string_view name) {
    for (auto c : kAllCues) {
        if (to_string(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

WeightVector::WeightVector(const Cues5& w) : w_(w) {
    double sum = 0.0;
    for (double v : w_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("weights must be finite and nonnegative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("weights must sum to 1 (got " + std::to_string(sum) + ")");
    }
}

WeightVector WeightVector::one_hot(Cue cue) {
    Cues5 w{};
    w[static_cast<std::size_t>(cue)] = 1.0;
    return WeightVector(w);
}

WeightVector WeightVector::normalized(const Cues5& w) {
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(sum > 0.0)) {
        throw ValidationError("cannot normalize weights with nonpositive sum");
    }
    Cues5 out{};
    for (std::size_t i = 0; i < kCueCount; ++i) {
        if (w[i] < 0.0) {
            throw ValidationError("weights must be nonnegative");
        }
        out[i] = w[i] / sum;
    }
    return WeightVector(out);
}

WeightVector reference_weights() { return WeightVector({0.556, 0.048, 0.146, 0.148, 0.102}); }

double player_cue(const BasketEvent& event, const Roster& roster) {
    const auto it = roster.find(event.player);
    if (it == roster.end()) {
        throw ValidationError("player '" + event.player + "' not in roster");
    }
    return it->second;
}

double score_diff_cue(const BasketEvent& event, double period_length_s) {
    const int diff = std::abs(event.home_score - event.visiting_score);
    return (1.0 / (diff + 1)) * (period_length_s - event.game_clock_s);
}

double basket_type_cue(const BasketEvent& event) {
    switch (event.basket_type) {
    case BasketType::Dunk: return 1.0;
    case BasketType::TipShot: return 0.75;
    case BasketType::ThreeJumper: return 0.5;
    case BasketType::Layup: return 0.25;
    case BasketType::Jumper: return 0.0;
    case BasketType::FreeThrow: break;
    }
    throw ValidationError("event " + event.event_id + ": free throws carry no basket-type cue");
}

std::vector<double> normalize_per_game(const std::vector<double>& raw) {
    if (raw.empty()) {
        throw ValidationError("normalize_per_game: empty input");
    }
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    std::vector<double> out;
    out.reserve(raw.size());
    for (double v : raw) {
        out.push_back(pool_scaled(v, *lo, *hi));
    }
    return out;
}

double combine(const CueVector& cues, const WeightVector& w) {
    return kernels::dot5(w.values(), cues.norm);
}

ScoredGame score_game(const GameRecord& game, const std::vector<AlignedBasket>& aligned,
                      const LoudnessSeries& loudness, const std::vector<FlowFrame>& flows,
                      const CueOptions& opts, const WeightVector& w) {
    ScoredGame out;
    out.game_id = game.game_id;
    out.weights = w;
    for (const auto& ab : aligned) {
        if (ab.event.basket_type == BasketType::FreeThrow) {
            continue;
        }
        ScoredBasket sb;
        sb.aligned = ab;
        auto& raw = sb.cues.raw;
        raw[static_cast<std::size_t>(Cue::Audio)] = audio_cue(loudness, ab.video_ts_s, opts.audio);
        raw[static_cast<std::size_t>(Cue::Player)] = player_cue(ab.event, game.roster);
        raw[static_cast<std::size_t>(Cue::ScoreDiff)] = score_diff_cue(ab.event, opts.period_length_s);
        raw[static_cast<std::size_t>(Cue::BasketType)] = basket_type_cue(ab.event);
        raw[static_cast<std::size_t>(Cue::Motion)] =
            motion_scores(flows, ab.video_ts_s, opts.motion).overall;
        out.baskets.push_back(std::move(sb));
    }
    if (out.baskets.empty()) {
        return out;
    }

    // Player ranking scales against every rostered player, not just this game's scorers.
    double ppg_lo = 0.0, ppg_hi = 0.0;
    bool first = true;
    for (const auto& [name, ppg] : game.roster) {
        ppg_lo = first ? ppg : std::min(ppg_lo, ppg);
        ppg_hi = first ? ppg : std::max(ppg_hi, ppg);
        first = false;
    }
    for (auto cue : kAllCues) {
        const auto c = static_cast<std::size_t>(cue);
        if (cue == Cue::Player) {
            for (auto& b : out.baskets) {
                b.cues.norm[c] = pool_scaled(b.cues.raw[c], ppg_lo, ppg_hi);
            }
            continue;
        }
        std::vector<double> column;
        column.reserve(out.baskets.size());
        for (const auto& b : out.baskets) {
            column.push_back(b.cues.raw[c]);
        }
        const auto norm = normalize_per_game(column);
        for (std::size_t i = 0; i < out.baskets.size(); ++i) {
            out.baskets[i].cues.norm[c] = norm[i];
        }
    }
    rescore(out, w);
    return out;
}

void rescore(ScoredGame& game, const WeightVector& w) {
    game.weights = w;
    for (auto& b : game.baskets) {
        b.score = combine(b.cues, w);
    }
}

namespace {

template <typename Key>
std::vector<std::size_t> rank_by(const std::vector<ScoredBasket>& baskets, Key key) {
    std::vector<std::size_t> idx(baskets.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double ka = key(baskets[a]);
        const double kb = key(baskets[b]);
        if (ka != kb) {
            return ka > kb;
        }
        return baskets[a].aligned.video_ts_s < baskets[b].aligned.video_ts_s;
    });
    return idx;
}

} // namespace

std::vector<std::size_t> rank_baskets(const std::vector<ScoredBasket>& baskets) {
    return rank_by(baskets, [](const ScoredBasket& b) { return b.score; });
}

std::vector<std::size_t> rank_by_cue(const std::vector<ScoredBasket>& baskets, Cue cue) {
    return rank_by(baskets, [cue](const ScoredBasket& b) { return b.cues[cue]; });
}

namespace {

nlohmann::ordered_json cues_json(const Cues5& v) {
    nlohmann::ordered_json j;
    for (auto c : kAllCues) {
        j[std::string(to_string(c))] = v[static_cast<std::size_t>(c)];
    }
    return j;
}

Cues5 cues_from_json(const nlohmann::json& j) {
    Cues5 v{};
    for (auto c : kAllCues) {
        v[static_cast<std::size_t>(c)] = j.at(std::string(to_string(c))).get<double>();
    }
    return v;
}

} // namespace

std::string serialize_weights(const WeightVector& w) { return cues_json(w.values()).dump(2) + "\n"; }

WeightVector parse_weights(std::string_view text, const std::string& source) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto& obj = j.contains("weights") ? j.at("weights") : j;
        return WeightVector(cues_from_json(obj));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

std::string serialize_scored_game(const ScoredGame& game) {
    nlohmann::ordered_json j;
    j["game_id"] = game.game_id;
    j["weights"] = cues_json(game.weights.values());
    auto arr = nlohmann::ordered_json::array();
    for (const auto& b : game.baskets) {
        const auto& ev = b.aligned.event;
        nlohmann::ordered_json jb;
        jb["event_id"] = ev.event_id;
        jb["vts"] = b.aligned.video_ts_s;
        jb["player"] = ev.player;
        jb["basket_type"] = std::string(to_string(ev.basket_type));
        jb["period"] = ev.period;
        jb["home_score"] = ev.home_score;
        jb["visiting_score"] = ev.visiting_score;
        jb["game_clock"] = ev.game_clock_s;
        jb["cues"] = {{"raw", cues_json(b.cues.raw)}, {"norm", cues_json(b.cues.norm)}};
        jb["score"] = b.score;
        arr.push_back(std::move(jb));
    }
    j["baskets"] = std::move(arr);
    return j.dump(2) + "\n";
}

ScoredGame parse_scored_game(std::string_view text, const std::string& source) {
    ScoredGame g;
    try {
        const auto j = nlohmann::json::parse(text);
        g.game_id = j.at("game_id").get<std::string>();
        g.weights = WeightVector(cues_from_json(j.at("weights")));
        for (const auto& jb : j.at("baskets")) {
            ScoredBasket b;
            auto& ev = b.aligned.event;
            ev.event_id = jb.at("event_id").get<std::string>();
            b.aligned.video_ts_s = jb.at("vts").get<double>();
            ev.player = jb.value("player", "");
            const auto type = basket_type_from_string(jb.value("basket_type", "Jumper"));
            if (!type) {
                throw ValidationError(source + ": unknown basket type");
            }
            ev.basket_type = *type;
            ev.period = jb.value("period", 1);
            ev.home_score = jb.value("home_score", 0);
            ev.visiting_score = jb.value("visiting_score", 0);
            ev.game_clock_s = jb.value("game_clock", 0.0);
            b.cues.raw = cues_from_json(jb.at("cues").at("raw"));
            b.cues.norm = cues_from_json(jb.at("cues").at("norm"));
            b.score = jb.at("score").get<double>();
            g.baskets.push_back(std::move(b));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return g;
}

} // namespace hilite
