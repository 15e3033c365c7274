#include <doctest.h>

#include "hilite/errors.hpp"
#include "hilite/game_data.hpp"
#include "hilite/random.hpp"

using namespace hilite;

TEST_CASE("clock_to_seconds") {
    CHECK(clock_to_seconds("12:22") == 742.0);
    CHECK(clock_to_seconds("00:00") == 0.0);
    CHECK(clock_to_seconds("20:00") == 1200.0);
    CHECK(clock_to_seconds("5:07") == 307.0);
    CHECK_THROWS_AS(clock_to_seconds("12:60"), ValidationError);
    CHECK_THROWS_AS(clock_to_seconds("1222"), ValidationError);
    CHECK_THROWS_AS(clock_to_seconds("123:00"), ValidationError);
    CHECK_THROWS_AS(clock_to_seconds("12:2"), ValidationError);
    CHECK_THROWS_AS(clock_to_seconds("ab:cd"), ValidationError);
}

TEST_CASE("clock_to_seconds is monotone in MM:SS order") {
    double prev = -1.0;
    for (int m = 0; m <= 20; ++m) {
        for (int s = 0; s < 60; ++s) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "%02d:%02d", m, s);
            const double v = clock_to_seconds(buf);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("parse_play_by_play reads the documented row") {
    const auto events = parse_play_by_play(
        "player,basket_type,period,home_score,visiting_score,game_clock\n"
        "Jahlil Okafor,ThreeJumper,1,38,29,12:22\n");
    REQUIRE(events.size() == 1);
    const auto& e = events[0];
    CHECK(e.player == "Jahlil Okafor");
    CHECK(e.basket_type == BasketType::ThreeJumper);
    CHECK(e.period == 1);
    CHECK(e.home_score == 38);
    CHECK(e.visiting_score == 29);
    CHECK(e.game_clock_s == 742.0);
    CHECK(e.event_id == "e001");
}

TEST_CASE("parse_play_by_play edge cases and errors") {
    CHECK(parse_play_by_play("").empty());
    CHECK(parse_play_by_play("player,basket_type,period,home_score,visiting_score,game_clock\n").empty());

    const std::string header = "player,basket_type,period,home_score,visiting_score,game_clock\n";
    try {
        parse_play_by_play(header + "A,Dunk,1,38,29,12:22\nB,Layup,1,35,31,11:00\n");
        FAIL("expected score regression");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("regression") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_play_by_play(header + "A,Slam,1,2,0,12:22\n"), ParseError);
    CHECK_THROWS_AS(parse_play_by_play(header + "A,Dunk,1,2,0\n"), ParseError);
    CHECK_THROWS_AS(parse_play_by_play(header + "A,Dunk,1,2,0,21:00\n"), ParseError);
    CHECK_THROWS_AS(parse_play_by_play(header + "A,Dunk,0,2,0,12:00\n"), ParseError);
    CHECK_THROWS_AS(parse_play_by_play(header + "A,Dunk,1,x,0,12:00\n"), ParseError);
    // clock running backwards within a period
    CHECK_THROWS_AS(parse_play_by_play(header + "A,Dunk,1,2,0,12:00\nB,Dunk,1,4,0,13:00\n"), ParseError);
    // overtime accepted with the same period length
    CHECK(parse_play_by_play(header + "A,Dunk,3,2,0,04:59\n").at(0).period == 3);
    // a longer overtime period length can be configured
    CHECK_THROWS_AS(parse_play_by_play(header + "A,Dunk,3,2,0,05:01\n", 300.0), ParseError);
}

TEST_CASE("ordering ties are reported, file order kept") {
    const auto events = parse_play_by_play(
        "A,FreeThrow,1,1,0,10:00\nA,FreeThrow,1,2,0,10:00\nB,Dunk,1,2,2,09:30\n");
    const auto ties = find_ordering_ties(events);
    REQUIRE(ties.size() == 1);
    CHECK(ties[0].first == 0);
    CHECK(ties[0].second == 1);
    CHECK(events[0].home_score == 1);
}

TEST_CASE("play-by-play round trip on random valid event lists") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<BasketEvent> events;
        int h = 0, v = 0;
        int period = 1;
        double clock = 1200;
        const int n = static_cast<int>(rng.index(30));
        for (int i = 0; i < n; ++i) {
            if (rng.bernoulli(0.1)) {
                ++period;
                clock = 1200;
            }
            clock -= static_cast<double>(rng.index(static_cast<std::uint64_t>(clock / 4 + 1)));
            BasketEvent e;
            e.event_id = make_event_id(events.size());
            e.player = rng.bernoulli(0.2) ? "O'Neal, Jr." : "P" + std::to_string(rng.index(10));
            e.basket_type = kAllBasketTypes[rng.index(6)];
            (rng.bernoulli(0.5) ? h : v) += point_value(e.basket_type);
            e.home_score = h;
            e.visiting_score = v;
            e.period = period;
            e.game_clock_s = clock;
            events.push_back(e);
        }
        CHECK(parse_play_by_play(serialize_play_by_play(events)) == events);
    }
}

TEST_CASE("parse_roster") {
    const auto r = parse_roster("A,19.5\nB,4.0");
    CHECK(r.size() == 2);
    CHECK(r.at("A") == 19.5);
    CHECK(r.at("B") == 4.0);
    CHECK(parse_roster("player,ppg\nA,1\n").size() == 1);
    CHECK_THROWS_AS(parse_roster("A,19.5\nA,3"), ParseError);
    CHECK_THROWS_AS(parse_roster("A,-1"), ParseError);
    CHECK_THROWS_AS(parse_roster("A"), ParseError);
    CHECK(parse_roster(serialize_roster(r)) == r);
}

TEST_CASE("roster coverage") {
    GameRecord g;
    g.game_id = "g";
    g.roster = {{"A", 1.0}};
    g.events = parse_play_by_play("A,Dunk,1,2,0,12:00\nB,Dunk,1,2,2,11:00\n");
    CHECK_THROWS_AS(check_roster_coverage(g), ValidationError);
    g.roster["B"] = 2.0;
    CHECK_NOTHROW(check_roster_coverage(g));
}
