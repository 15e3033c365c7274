#include <doctest.h>

#include "hilite/errors.hpp"
#include "hilite/highlight.hpp"
#include "hilite/random.hpp"

#include <sstream>

using namespace hilite;

namespace {

ScoredGame game_with(const std::vector<double>& vts, const std::vector<double>& scores) {
    ScoredGame g;
    g.game_id = "G07";
    for (std::size_t i = 0; i < vts.size(); ++i) {
        ScoredBasket b;
        b.aligned.event.event_id = make_event_id(i);
        b.aligned.event.period = vts[i] < 1500 ? 1 : 2;
        b.aligned.video_ts_s = vts[i];
        b.score = scores[i];
        b.cues.norm = {scores[i], 0, 0, 0, 0};
        g.baskets.push_back(b);
    }
    return g;
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("clip bounds") {
    auto c = clip_bounds(100.0, 7.0, 1.5, 3600.0);
    CHECK(c.start_s == 94.5);
    CHECK(c.end_s == 101.5);
    c = clip_bounds(3.0, 7.0, 1.5, 3600.0);
    CHECK(c.start_s == 0.0);
    CHECK(c.end_s == 7.0);
    c = clip_bounds(100.0, 8.0, 2.5, 3600.0);
    CHECK(c.start_s == 94.5);
    CHECK(c.end_s == 102.5);
    c = clip_bounds(3599.0, 7.0, 1.5, 3600.0);
    CHECK(c.end_s == 3600.0);
    CHECK(c.start_s == 3593.0);
    c = clip_bounds(2.0, 7.0, 1.5, 5.0);
    CHECK(c.start_s == 0.0);
    CHECK(c.end_s == 5.0);
    CHECK_THROWS_AS(clip_bounds(1.0, 0.0, 0.0, 10.0), ValidationError);
}

TEST_CASE("top-N selection") {
    std::vector<double> vts, scores;
    for (int i = 0; i < 15; ++i) {
        vts.push_back(30.0 * (i + 1));
        scores.push_back(0.01 * ((i * 7) % 15));
    }
    const auto g = game_with(vts, scores);
    const auto ranked = rank_baskets(g.baskets);
    const auto top = select_top_n(g.baskets, ranked, 10);
    CHECK(top.size() == 10);
    for (std::size_t i = 1; i < top.size(); ++i) CHECK(top[i - 1].aligned.video_ts_s < top[i].aligned.video_ts_s);
    CHECK(select_top_n(g.baskets, ranked, 40).size() == 15);
    const auto one = select_top_n(g.baskets, ranked, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].score == doctest::Approx(0.14));
}

TEST_CASE("EDL assembly invariants") {
    Rng rng(3);
    std::vector<double> vts, scores;
    double t = 20.0;
    for (int i = 0; i < 40; ++i) {
        t += rng.uniform(3.0, 60.0);
        vts.push_back(t);
        scores.push_back(rng.uniform());
    }
    const auto g = game_with(vts, scores);
    const auto edl = build_edl(g, 10, t + 100.0, {});
    CHECK(edl.clips.size() == 10);
    double total = 0;
    for (std::size_t i = 0; i < edl.clips.size(); ++i) {
        const auto& c = edl.clips[i];
        CHECK(c.duration() == 7.0);
        CHECK(c.end_s - c.basket_vts_s == doctest::Approx(1.5));
        if (i) CHECK(edl.clips[i - 1].start_s <= c.start_s);
        total += c.duration();
    }
    CHECK(edl.total_duration_s == doctest::Approx(total));
    const auto split = half_distribution(edl);
    CHECK(split.first + split.second == 10);
}

TEST_CASE("overlapping clips warn or merge") {
    const auto g = game_with({100.0, 103.0, 400.0}, {0.9, 0.8, 0.7});
    const auto warned = build_edl(g, 3, 1000.0, {});
    CHECK(warned.clips.size() == 3);
    CHECK(warned.warnings.size() == 1);
    ClipOptions merge;
    merge.merge_overlaps = true;
    const auto merged = build_edl(g, 3, 1000.0, merge);
    REQUIRE(merged.clips.size() == 2);
    CHECK(merged.clips[0].start_s == 94.5);
    CHECK(merged.clips[0].end_s == 104.5);
}

TEST_CASE("EDL serialization") {
    const auto g = game_with({100.0, 210.25}, {0.9, 0.4});
    const auto edl = build_edl(g, 2, 1000.0, {});
    const auto csv = emit_edl(edl, EdlFormat::Csv);
    CHECK(csv.rfind("event_id,start,end,score\n", 0) == 0);
    CHECK(count_lines(csv) == 3);
    CHECK(csv == emit_edl(edl, EdlFormat::Csv));
    const auto json = emit_edl(edl, EdlFormat::Json);
    CHECK(json == emit_edl(edl, EdlFormat::Json));
    const auto back = parse_edl_json(json);
    CHECK(back == edl);
    CHECK(emit_edl(back, EdlFormat::Json) == json);
    CHECK(edl_format_from_string("csv") == EdlFormat::Csv);
    CHECK_THROWS(edl_format_from_string("xml"));
    const auto script = emit_cut_script(edl, "game.mp4");
    CHECK(script.find("ffmpeg") != std::string::npos);
    CHECK(script.find("94.500") != std::string::npos);
}
