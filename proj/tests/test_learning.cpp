#include <doctest.h>

#include "hilite/errors.hpp"
#include "hilite/kernels.hpp"
#include "hilite/learning.hpp"
#include "hilite/random.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace hilite;

namespace {

ScoredGame random_game(const std::string& id, std::size_t n, Rng& rng) {
    ScoredGame g;
    g.game_id = id;
    for (std::size_t i = 0; i < n; ++i) {
        ScoredBasket b;
        b.aligned.event.event_id = make_event_id(i);
        b.aligned.video_ts_s = static_cast<double>(i);
        for (auto& x : b.cues.norm) x = rng.uniform();
        b.cues.raw = b.cues.norm;
        g.baskets.push_back(b);
    }
    return g;
}

// Noiseless pairs: the majority follows `truth`, unanimous.
std::vector<ABPair> planted_pairs(const std::vector<ScoredGame>& games, const WeightVector& truth,
                                  int per_game, Rng& rng) {
    std::vector<ABPair> out;
    for (const auto& g : games) {
        for (int k = 0; k < per_game; ++k) {
            const auto i = rng.index(g.baskets.size());
            auto j = rng.index(g.baskets.size());
            if (i == j) j = (j + 1) % g.baskets.size();
            const double si = combine(g.baskets[i].cues, truth), sj = combine(g.baskets[j].cues, truth);
            if (si == sj) continue;
            out.push_back({g.game_id, g.baskets[i].aligned.event.event_id,
                           g.baskets[j].aligned.event.event_id, si > sj ? 15 : 0, si > sj ? 0 : 15});
        }
    }
    return out;
}

double l1(const WeightVector& a, const WeightVector& b) {
    double s = 0;
    for (Cue c : kAllCues) s += std::abs(a[c] - b[c]);
    return s;
}

} // namespace

TEST_CASE("pairs CSV and agreement filter") {
    const std::vector<ABPair> p{{"G1", "e001", "e002", 11, 4}, {"G1", "e003", "e004", 8, 7}};
    CHECK(parse_pairs_csv(serialize_pairs_csv(p)) == p);
    const auto kept = filter_pairs_by_agreement(p, 10);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].votes_a == 11);
    CHECK_THROWS_AS(parse_pairs_csv("game_id,basket_a,basket_b,votes_a,votes_b\nG,a,b,x,1\n"), ParseError);
}

TEST_CASE("weight grid") {
    const auto g = enumerate_weight_grid(0.05);
    CHECK(g.size() == 10626);
    CHECK(static_cast<double>(g.size()) == oracle::binomial(24, 4));
    CHECK(enumerate_weight_grid(1.0).size() == 5);
    CHECK(enumerate_weight_grid(0.5).size() == static_cast<std::size_t>(oracle::binomial(6, 4)));
    CHECK(enumerate_weight_grid(0.1).size() == static_cast<std::size_t>(oracle::binomial(14, 4)));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i - 1].values() < g[i].values());
    CHECK(g.front() == WeightVector::one_hot(Cue::Motion));
    CHECK(g.back() == WeightVector::one_hot(Cue::Audio));
    CHECK_THROWS_AS(enumerate_weight_grid(0.3), ValidationError);
    CHECK_THROWS_AS(enumerate_weight_grid(0.0), ValidationError);
}

TEST_CASE("pairwise match count") {
    ScoredGame g;
    g.game_id = "G";
    for (int i = 0; i < 3; ++i) {
        ScoredBasket b;
        b.aligned.event.event_id = make_event_id(static_cast<std::size_t>(i));
        g.baskets.push_back(b);
    }
    g.baskets[0].cues.norm = {0.9, 0, 0, 0, 0};
    g.baskets[1].cues.norm = {0.1, 0, 0, 0, 0};
    g.baskets[2].cues.norm = {0.1, 0, 0, 0, 0};
    const CueIndex idx({g});
    const auto w = WeightVector::one_hot(Cue::Audio);
    CHECK(pairwise_match_count(w, {{"G", "e001", "e002", 12, 3}}, idx).matches == 1);
    CHECK(pairwise_match_count(w, {{"G", "e002", "e001", 12, 3}}, idx).matches == 0);
    const auto tie = pairwise_match_count(w, {{"G", "e002", "e003", 12, 3}}, idx);
    CHECK(tie.matches == 0);
    CHECK(tie.total == 1);
    CHECK_THROWS(pairwise_match_count(w, {{"G", "e001", "e099", 12, 3}}, idx));

    Rng rng(5);
    std::vector<ScoredGame> games{random_game("A", 30, rng), random_game("B", 30, rng)};
    const CueIndex all(games);
    for (int t = 0; t < 20; ++t) {
        Cues5 raw;
        for (auto& x : raw) x = rng.uniform();
        const auto truth = WeightVector::normalized(raw);
        const auto pairs = planted_pairs(games, truth, 40, rng);
        const auto m = pairwise_match_count(truth, pairs, all);
        CHECK(m.matches == m.total);
        CHECK(mcc(pairwise_confusion(truth, pairs, all)) == doctest::Approx(1.0));
    }
}

TEST_CASE("match count is invariant to monotone cue transforms under one-hot weights") {
    Rng rng(6);
    std::vector<ScoredGame> games{random_game("A", 25, rng)};
    auto pairs = planted_pairs(games, WeightVector::normalized({1, 2, 3, 4, 5}), 60, rng);
    auto squashed = games;
    for (auto& b : squashed[0].baskets)
        for (auto& x : b.cues.norm) x = x * x * x;
    for (Cue c : kAllCues) {
        const auto w = WeightVector::one_hot(c);
        CHECK(pairwise_match_count(w, pairs, CueIndex(games)).matches ==
              pairwise_match_count(w, pairs, CueIndex(squashed)).matches);
    }
}

TEST_CASE("serial and parallel match tables agree") {
    Rng rng(7);
    std::vector<kernels::PreparedPair> pairs(3000);
    for (auto& p : pairs) {
        for (auto& x : p.cues_a) x = std::round(rng.uniform() * 4) / 4;
        for (auto& x : p.cues_b) x = std::round(rng.uniform() * 4) / 4;
        p.game = static_cast<std::uint32_t>(rng.index(9));
        p.majority_a = rng.bernoulli(0.5);
    }
    std::vector<kernels::Cues5> grid;
    for (const auto& w : enumerate_weight_grid(0.1)) grid.push_back(w.values());
    const auto s = kernels::match_table_serial(grid, pairs, 9);
    const auto p = kernels::match_table_parallel(grid, pairs, 9);
    CHECK(s.matches == p.matches);
    CHECK(s.min_margin == p.min_margin);
}

TEST_CASE("learn_weights recovers one-hot vectors") {
    Rng rng(8);
    std::vector<ScoredGame> games;
    for (int g = 0; g < 5; ++g) games.push_back(random_game("G" + std::to_string(g), 30, rng));
    for (Cue c : kAllCues) {
        const auto truth = WeightVector::one_hot(c);
        const auto pairs = planted_pairs(games, truth, 40, rng);
        LearnOptions opts;
        opts.grid_step = 0.1;
        const auto r = learn_weights(games, pairs, opts);
        CHECK(r.folds.size() == 5);
        CHECK(r.final_weights[c] >= 0.9);
        CHECK(l1(r.final_weights, truth) <= 0.2);
        for (const auto& f : r.folds) CHECK(f.held_out.matches == f.held_out.total);
    }
}

TEST_CASE("learn_weights on identical games") {
    Rng rng(9);
    auto g = random_game("G0", 20, rng);
    auto h = g;
    h.game_id = "G1";
    auto pairs = planted_pairs({g}, WeightVector::normalized({3, 0, 1, 0, 1}), 30, rng);
    const auto n = pairs.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto q = pairs[i];
        q.game_id = "G1";
        pairs.push_back(q);
    }
    LearnOptions opts;
    opts.grid_step = 0.1;
    for (bool par : {false, true}) {
        opts.parallel = par;
        const auto r = learn_weights({g, h}, pairs, opts);
        REQUIRE(r.folds.size() == 2);
        CHECK(r.folds[0].weights == r.folds[1].weights);
        CHECK(r.final_weights == r.folds[0].weights);
    }
    CHECK_THROWS_AS(learn_weights({g}, {pairs.front()}, opts), ValidationError);
}

TEST_CASE("evaluate_cues and agreement table") {
    Rng rng(10);
    std::vector<ScoredGame> games{random_game("A", 30, rng)};
    const auto pairs = planted_pairs(games, WeightVector::one_hot(Cue::Audio), 50, rng);
    const auto rows = evaluate_cues(pairs, CueIndex(games), reference_weights());
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].name == "audio");
    CHECK(rows[0].matches.matches == rows[0].matches.total);
    CHECK(rows[5].name == "combined");

    std::vector<ABPair> votes;
    for (int i = 0; i < 200; ++i) {
        const int a = static_cast<int>(rng.index(16));
        votes.push_back({"A", "x", "y", a, 15 - a});
    }
    const auto t1 = agreement_table(votes, 8, 15);
    const auto t2 = agreement_table(votes, 8, 15);
    REQUIRE(t1.size() == 8);
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].mean_cohen_kappa == t2[i].mean_cohen_kappa);
        if (i) CHECK(t1[i].pairs <= t1[i - 1].pairs);
    }
    CHECK(t1[0].pairs == votes.size());
    CHECK(agreement_label(0.1) == "Slight agreement");
    CHECK(agreement_label(0.7) == "Substantial agreement");
}
