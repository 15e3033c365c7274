#include <doctest.h>

#include "hilite/errors.hpp"
#include "hilite/pipeline.hpp"
#include "hilite/synth.hpp"
#include "hilite/text_io.hpp"
#include "hilite/wav.hpp"

#include <cmath>
#include <filesystem>

using namespace hilite;

namespace {

ScoredGame score_synth(const SynthGame& g, const WeightVector& w = reference_weights()) {
    const auto cfg = default_config();
    GameInputs in{g.record, g.readings, g.loudness, g.flows, g.video_len_s};
    return score_inputs(in, align_game(in, cfg), cfg, w);
}

} // namespace

TEST_CASE("gen_game is deterministic") {
    SynthConfig cfg;
    cfg.misread_rate = 0.05;
    const auto a = gen_game(cfg, 3), b = gen_game(cfg, 3);
    CHECK(a.record.events == b.record.events);
    CHECK(a.readings == b.readings);
    CHECK(a.loudness.values == b.loudness.values);
    CHECK(serialize_flow_jsonl(a.flows) == serialize_flow_jsonl(b.flows));
    CHECK(a.true_vts == b.true_vts);
    const auto c = gen_game(cfg, 4);
    CHECK(c.record.game_id != a.record.game_id);
    CHECK(c.readings != a.readings);
}

TEST_CASE("noiseless stream transitions equal the event score sequence") {
    SynthConfig cfg;
    for (int gi = 0; gi < 3; ++gi) {
        const auto g = gen_game(cfg, gi);
        // Period changes are transitions too; keep score changes only.
        std::vector<ScoreboardReading> scores;
        for (const auto& r : stable_transitions(debounce_readings(g.readings, 3))) {
            if (scores.empty() || r.home != scores.back().home || r.visiting != scores.back().visiting)
                scores.push_back(r);
        }
        REQUIRE(scores.size() == g.record.events.size() + 1); // leading 0-0 state
        for (std::size_t i = 0; i < g.record.events.size(); ++i) {
            const auto& e = g.record.events[i];
            CHECK(scores[i + 1].home == e.home_score);
            CHECK(scores[i + 1].visiting == e.visiting_score);
            CHECK(scores[i + 1].video_ts_s == g.true_vts[i]);
        }
    }
}

TEST_CASE("basket-type mixture follows the configured frequencies") {
    SynthConfig cfg;
    cfg.baskets_per_game = 100;
    std::array<double, 6> counts{};
    double total = 0;
    for (int gi = 0; gi < 100; ++gi) {
        for (const auto& e : gen_game(cfg, gi).record.events) {
            for (std::size_t t = 0; t < std::size(kAllBasketTypes); ++t)
                if (kAllBasketTypes[t] == e.basket_type) counts[t] += 1;
            total += 1;
        }
    }
    CHECK(total == 10000);
    for (std::size_t t = 0; t < 6; ++t) CHECK(std::abs(counts[t] / total - cfg.type_mixture[t]) <= 0.02);
}

TEST_CASE("ground truth votes") {
    SynthConfig cfg;
    cfg.n_games = 4;
    std::vector<ScoredGame> games;
    for (int gi = 0; gi < cfg.n_games; ++gi) games.push_back(score_synth(gen_game(cfg, gi)));

    const auto clean = gen_ground_truth(games, cfg.planted_weights, 0.0, 15, 40, 1);
    CHECK(clean.size() == 160);
    const CueIndex idx(games);
    for (const auto& p : clean) {
        CHECK((p.votes_a == 15 || p.votes_b == 15));
        const bool a_better = combine(idx.at(p.game_id, p.basket_a), cfg.planted_weights) >
                              combine(idx.at(p.game_id, p.basket_b), cfg.planted_weights);
        CHECK(a_better == (p.votes_a == 15));
    }

    std::vector<ScoredGame> many;
    for (int gi = 0; gi < 25; ++gi) many.push_back(games[static_cast<std::size_t>(gi % 4)]), many.back().game_id = "R" + std::to_string(gi);
    const auto noisy = gen_ground_truth(many, cfg.planted_weights, 0.5, 15, 45, 2);
    CHECK(noisy.size() >= 1000);
    std::vector<std::vector<int>> table;
    for (const auto& p : noisy) table.push_back({p.votes_a, p.votes_b});
    CHECK(std::abs(fleiss_kappa(table, 15).kappa) <= 0.05);
}

TEST_CASE("pipeline closure through files at zero misreads") {
    const auto dir = std::filesystem::temp_directory_path() / "hilite_test_synth";
    std::filesystem::remove_all(dir);
    SynthConfig cfg;
    const auto g = gen_game(cfg, 0);
    const auto manifest_path = write_synth_game(g, dir / "G01");
    const auto ecfg = default_config();
    const auto manifest = load_manifest(manifest_path, ecfg.period_length_s);
    const auto inputs = load_game_inputs(manifest, ecfg);
    CHECK(inputs.record.events == g.record.events);
    const auto aligned = align_game(inputs, ecfg);
    CHECK(aligned.unmatched.empty());
    CHECK(aligned.aligned.size() == g.record.events.size());
    const auto scored = score_inputs(inputs, aligned, ecfg, reference_weights());
    for (const auto& b : scored.baskets)
        for (double c : b.cues.norm) {
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
        }
    const auto edl = build_edl(scored, 10, inputs.video_len_s, ecfg.clip);
    CHECK(edl.clips.size() == 10);
    CHECK(discover_manifests(dir) == std::vector<std::filesystem::path>{manifest_path});
    std::filesystem::remove_all(dir);
}

TEST_CASE("synth config validation") {
    SynthConfig cfg;
    cfg.misread_rate = 1.5;
    CHECK_THROWS_AS(validate(cfg), ValidationError);
    cfg = {};
    cfg.type_mixture[0] = 0.9;
    CHECK_THROWS_AS(validate(cfg), ValidationError);
}

TEST_CASE("wav audio is filtered and measured") {
    const auto path = std::filesystem::temp_directory_path() / "hilite_tone.wav";
    PcmAudio a;
    a.sample_rate_hz = 48000;
    a.channels.assign(1, std::vector<double>(48000));
    for (std::size_t i = 0; i < 48000; ++i) a.channels[0][i] = 0.5 * std::sin(2 * 3.141592653589793 * 1000.0 * i / 48000.0);
    write_text_file(path, encode_wav(a, WavSampleFormat::Float32));
    auto cfg = default_config();
    const auto s = load_loudness(path, cfg);
    CHECK(s.values.size() == 7);
    CHECK(s.start_ts_s == doctest::Approx(0.2));
    // Mean square of a 0.5 sine is 0.125; the weighting adds under 1 dB at 1 kHz.
    for (std::size_t i = 1; i < s.values.size(); ++i) CHECK(std::abs(s.values[i] - 10 * std::log10(0.125)) < 1.0);

    a.sample_rate_hz = 44100;
    write_text_file(path, encode_wav(a, WavSampleFormat::Pcm16));
    CHECK_THROWS_AS(load_loudness(path, cfg), ValidationError);
    cfg.resample = true;
    CHECK_NOTHROW(load_loudness(path, cfg));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_loudness(path, cfg), InputError);
}
