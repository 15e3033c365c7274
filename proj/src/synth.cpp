#include "hilite/synth.hpp"

#include "hilite/errors.hpp"
#include "hilite/random.hpp"
#include "hilite/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

namespace hilite {

namespace {

double snap(double t, double grid) { return std::round(t / grid) * grid; }

// Keeps the written corpus compact.
double quantize(double v, double q) { return std::round(v / q) / (1.0 / q); }

std::string player_name(bool home, int game, int j) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%02d Player %02d", home ? "Home" : "Away", game + 1, j + 1);
    return buf;
}

// Piecewise-linear game clock over video time within one half.
struct ClockKnot {
    double vts;
    double clock;
};

double clock_at(const std::vector<ClockKnot>& knots, double t) {
    if (t <= knots.front().vts) return knots.front().clock;
    if (t >= knots.back().vts) return knots.back().clock;
    const auto it = std::upper_bound(knots.begin(), knots.end(), t,
                                     [](double v, const ClockKnot& k) { return v < k.vts; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.vts == lo.vts) return hi.clock;
    return lo.clock + (hi.clock - lo.clock) * (t - lo.vts) / (hi.vts - lo.vts);
}

} // namespace

void validate(const SynthConfig& cfg) {
    double sum = 0.0;
    for (double p : cfg.type_mixture) {
        if (!(p >= 0.0)) throw ValidationError("synth: negative basket-type probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("synth: basket-type mixture must sum to 1");
    }
    if (cfg.n_games < 1 || cfg.baskets_per_game < 2) {
        throw ValidationError("synth: need >= 1 game and >= 2 baskets per game");
    }
    if (cfg.misread_rate < 0.0 || cfg.misread_rate > 0.5) {
        throw ValidationError("synth: misread_rate must be in [0, 0.5]");
    }
    if (cfg.vote_noise < 0.0 || cfg.vote_noise > 0.5) {
        throw ValidationError("synth: vote_noise must be in [0, 0.5]");
    }
    if (cfg.raters < 1 || cfg.pairs_per_game < 1) {
        throw ValidationError("synth: raters and pairs_per_game must be positive");
    }
    const int per_half = (cfg.baskets_per_game + 1) / 2;
    if (kDefaultPeriodLength - cfg.min_clock_gap_s * (per_half + 1) <= 0.0) {
        throw ValidationError("synth: too many baskets for the minimum clock gap");
    }
    if (!(cfg.frame_interval_s > 0.0) || !(cfg.loudness_hop_s > 0.0) || !(cfg.flow_interval_s > 0.0)) {
        throw ValidationError("synth: sampling intervals must be positive");
    }
}

SynthGame gen_game(const SynthConfig& cfg, int index) {
    validate(cfg);
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(index)));
    SynthGame out;
    auto& rec = out.record;
    char id[16];
    std::snprintf(id, sizeof(id), "G%02d", index + 1);
    rec.game_id = id;
    rec.home_team = "Home" + rec.game_id.substr(1);
    rec.visiting_team = "Away" + rec.game_id.substr(1);
    rec.period_length_s = kDefaultPeriodLength;

    constexpr int kRosterSize = 12;
    std::vector<std::string> home_players, away_players;
    for (int j = 0; j < kRosterSize; ++j) {
        home_players.push_back(player_name(true, index, j));
        away_players.push_back(player_name(false, index, j));
    }
    for (const auto* team : {&home_players, &away_players}) {
        for (const auto& p : *team) {
            rec.roster[p] = std::round(rng.uniform(0.0, 25.0) * 10.0) / 10.0;
        }
    }

    const std::vector<double> mixture(cfg.type_mixture.begin(), cfg.type_mixture.end());
    const double L = rec.period_length_s;
    const double dt = cfg.frame_interval_s;
    const int counts[2] = {cfg.baskets_per_game / 2, cfg.baskets_per_game - cfg.baskets_per_game / 2};

    int home = 0, away = 0;
    double vts = snap(30.0, dt);
    std::vector<ClockKnot> knots[2];
    double half_start[2] = {0.0, 0.0};
    for (int half = 0; half < 2; ++half) {
        const int k = counts[half];
        std::vector<double> clocks(static_cast<std::size_t>(k));
        for (auto& c : clocks) c = std::floor(rng.uniform(0.0, L - cfg.min_clock_gap_s * (k + 1)));
        std::sort(clocks.begin(), clocks.end());
        for (int i = 0; i < k; ++i) clocks[static_cast<std::size_t>(i)] += cfg.min_clock_gap_s * (i + 1);
        std::reverse(clocks.begin(), clocks.end());

        half_start[half] = vts;
        knots[half].push_back({vts, L});
        double prev_clock = L;
        for (int i = 0; i < k; ++i) {
            const double clock = clocks[static_cast<std::size_t>(i)];
            vts = snap(vts + (prev_clock - clock) * rng.uniform(1.4, 2.2), dt);
            prev_clock = clock;

            BasketEvent ev;
            ev.event_id = make_event_id(rec.events.size());
            ev.basket_type = kAllBasketTypes[rng.categorical(mixture)];
            const bool home_team = rng.bernoulli(0.5);
            const auto& team = home_team ? home_players : away_players;
            ev.player = team[static_cast<std::size_t>(rng.index(team.size()))];
            (home_team ? home : away) += point_value(ev.basket_type);
            ev.home_score = home;
            ev.visiting_score = away;
            ev.period = half + 1;
            ev.game_clock_s = clock;
            rec.events.push_back(ev);
            out.true_vts.push_back(vts);
            out.hidden_excitement.push_back(rng.uniform());
            knots[half].push_back({vts, clock});
        }
        vts = snap(vts + prev_clock * rng.uniform(1.4, 2.2) + 5.0, dt);
        knots[half].push_back({vts, 0.0});
        if (half == 0) {
            vts = snap(vts + 600.0, dt);
        }
    }
    out.video_len_s = vts + 30.0;

    // Scoreboard stream.
    const auto n_frames = static_cast<std::size_t>(std::floor(out.video_len_s / dt)) + 1;
    const double eps = 1e-9;
    std::size_t next_event = 0;
    bool prev_misread = false;
    out.readings.reserve(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
        const double t = static_cast<double>(f) * dt;
        while (next_event < rec.events.size() &&
               out.true_vts[next_event] + cfg.scoreboard_latency_s <= t + eps) {
            ++next_event;
        }
        ScoreboardReading r;
        r.video_ts_s = t;
        const int half = t + eps >= half_start[1] ? 1 : 0;
        r.period = half + 1;
        if (next_event > 0) {
            r.home = rec.events[next_event - 1].home_score;
            r.visiting = rec.events[next_event - 1].visiting_score;
        }
        r.clock_s = clock_at(knots[half], t - cfg.scoreboard_latency_s);
        if (!prev_misread && cfg.misread_rate > 0.0 && rng.bernoulli(cfg.misread_rate)) {
            int& field = rng.bernoulli(0.5) ? r.home : r.visiting;
            const int truth = field;
            while (field == truth) field = static_cast<int>(rng.index(150));
            r.confidence = 0.5;
            prev_misread = true;
        } else {
            prev_misread = false;
        }
        out.readings.push_back(r);
    }

    // Loudness: noisy crowd bed plus a cluster of peaks around each basket.
    auto& ls = out.loudness;
    ls.hop_s = cfg.loudness_hop_s;
    ls.window_s = cfg.loudness_window_s;
    ls.start_ts_s = 0.5 * cfg.loudness_window_s;
    ls.floor_db = cfg.loudness_floor_db;
    const auto n_values =
        static_cast<std::size_t>(std::floor((out.video_len_s - cfg.loudness_window_s) / cfg.loudness_hop_s)) + 1;
    ls.values.resize(n_values);
    for (auto& v : ls.values) v = -42.0 + rng.normal(0.0, 1.0);

    auto coupled = [&](double h) { return std::clamp(h + rng.normal(0.0, cfg.coupling_noise), 0.0, 1.0); };
    for (std::size_t e = 0; e < rec.events.size(); ++e) {
        double h = coupled(out.hidden_excitement[e]);
        if (rec.events[e].basket_type == BasketType::FreeThrow) h *= 0.3;
        const double amplitude = -34.0 + 26.0 * h;
        const double b = out.true_vts[e];
        for (int p = 0; p < 9; ++p) {
            const double pos = rng.uniform(b - 2.8, b + 0.8);
            const double height = amplitude - rng.uniform(0.0, 4.0);
            const auto centre = static_cast<long>(std::lround((pos - ls.start_ts_s) / ls.hop_s));
            for (long d = -3; d <= 3; ++d) {
                const long i = centre + d;
                if (i < 0 || i >= static_cast<long>(n_values)) continue;
                const double v = height - 6.0 * std::abs(static_cast<double>(d));
                auto& slot = ls.values[static_cast<std::size_t>(i)];
                slot = std::max(slot, v);
            }
        }
    }
    for (auto& v : ls.values) v = quantize(std::max(v, cfg.loudness_floor_db), 0.01);

    // Sparse flow around each basket: global pan plus per-player residuals.
    for (std::size_t e = 0; e < rec.events.size(); ++e) {
        const double h = coupled(out.hidden_excitement[e]);
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double pan = 0.5 + 8.0 * h;
        const double b = out.true_vts[e];
        const double t0 = snap(b - 4.0, cfg.flow_interval_s);
        for (double t = t0; t <= b + 2.0 + eps; t += cfg.flow_interval_s) {
            FlowFrame frame;
            frame.vts_s = quantize(std::max(0.0, t), 0.001);
            for (int v = 0; v < cfg.flow_vectors; ++v) {
                const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
                const double mag = rng.uniform(0.0, 1.0 + 4.0 * h);
                frame.vectors.push_back({quantize(rng.uniform(0.0, 1280.0), 1.0),
                                         quantize(rng.uniform(0.0, 720.0), 1.0),
                                         quantize(pan * std::cos(theta) + mag * std::cos(phi), 0.001),
                                         quantize(pan * std::sin(theta) + mag * std::sin(phi), 0.001)});
            }
            out.flows.push_back(std::move(frame));
        }
    }
    return out;
}

std::vector<ABPair> gen_ground_truth(const std::vector<ScoredGame>& games,
                                     const WeightVector& planted, double vote_noise, int raters,
                                     int pairs_per_game, std::uint64_t seed) {
    std::vector<ABPair> pairs;
    for (std::size_t gi = 0; gi < games.size(); ++gi) {
        const auto& g = games[gi];
        const auto n = g.baskets.size();
        if (n < 2) {
            throw ValidationError("gen_ground_truth: game " + g.game_id + " has fewer than 2 baskets");
        }
        std::vector<double> score(n);
        for (std::size_t i = 0; i < n; ++i) score[i] = combine(g.baskets[i].cues, planted);

        Rng rng(mix_seed(seed, 1000 + gi));
        std::set<std::pair<std::size_t, std::size_t>> used;
        int made = 0;
        for (int attempt = 0; attempt < pairs_per_game * 50 && made < pairs_per_game; ++attempt) {
            const auto i = static_cast<std::size_t>(rng.index(n));
            const auto j = static_cast<std::size_t>(rng.index(n));
            if (i == j || score[i] == score[j]) continue;
            if (!used.insert({std::min(i, j), std::max(i, j)}).second) continue;
            const bool a_better = score[i] > score[j];
            int votes_a = 0;
            for (int r = 0; r < raters; ++r) {
                const bool honest = !rng.bernoulli(vote_noise);
                if (honest == a_better) ++votes_a;
            }
            pairs.push_back({g.game_id, g.baskets[i].aligned.event.event_id,
                             g.baskets[j].aligned.event.event_id, votes_a, raters - votes_a});
            ++made;
        }
    }
    return pairs;
}

std::filesystem::path write_synth_game(const SynthGame& game, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    GameManifest m;
    m.game_id = game.record.game_id;
    m.home_team = game.record.home_team;
    m.visiting_team = game.record.visiting_team;
    m.period_length_s = game.record.period_length_s;
    m.roster_file = "roster.csv";
    m.stats_file = "stats.csv";
    m.readings_file = "readings.jsonl";
    m.audio_file = "loudness.jsonl";
    m.motion_file = "flow.jsonl";
    write_text_file(dir / m.roster_file, serialize_roster(game.record.roster));
    write_text_file(dir / m.stats_file, serialize_play_by_play(game.record.events));
    write_text_file(dir / m.readings_file, serialize_readings_jsonl(game.readings));
    write_text_file(dir / m.audio_file, serialize_loudness_jsonl(game.loudness));
    write_text_file(dir / m.motion_file, serialize_flow_jsonl(game.flows));
    const auto path = dir / "manifest.json";
    write_text_file(path, serialize_manifest(m));
    return path;
}

} // namespace hilite
