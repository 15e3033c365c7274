#include <doctest.h>

#include "hilite/errors.hpp"
#include "hilite/metrics.hpp"
#include "hilite/random.hpp"

#include <cmath>
#include <map>

using namespace hilite;

namespace {

// Two-rater Fleiss equals Scott's pi: pooled marginals for chance agreement.
double scott_pi(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<int, double> pooled;
    double agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        pooled[a[i]] += 1;
        pooled[b[i]] += 1;
        agree += a[i] == b[i];
    }
    const double n = static_cast<double>(a.size());
    double pe = 0;
    for (auto& [k, c] : pooled) pe += (c / (2 * n)) * (c / (2 * n));
    return (agree / n - pe) / (1 - pe);
}

} // namespace

TEST_CASE("mcc examples") {
    CHECK(mcc({5, 0, 0, 5}) == 1.0);
    CHECK(mcc({5, 5, 5, 5}) == 0.0);
    // tp=4 fp=2 fn=1 tn=3: (12 - 2) / sqrt(6 * 5 * 5 * 4)
    CHECK(mcc({4, 2, 1, 3}) == doctest::Approx(10.0 / std::sqrt(600.0)));
    CHECK(mcc({4, 2, 1, 3}) == doctest::Approx(0.408248).epsilon(1e-6));
    CHECK(mcc({0, 0, 3, 7}) == 0.0);
    CHECK(mcc({0, 5, 5, 0}) == -1.0);
    CHECK_THROWS_AS(mcc({0, 0, 0, 0}), ValidationError);
}

TEST_CASE("mcc invariants") {
    Rng rng(1);
    for (int t = 0; t < 1000; ++t) {
        ConfusionCounts c{static_cast<long>(rng.index(50)), static_cast<long>(rng.index(50)),
                          static_cast<long>(rng.index(50)), static_cast<long>(rng.index(50)) + 1};
        const double m = mcc(c);
        CHECK(m >= -1.0);
        CHECK(m <= 1.0);
        CHECK(mcc({c.tp, c.fn, c.fp, c.tn}) == doctest::Approx(m));
        CHECK(mcc({c.tn, c.fn, c.fp, c.tp}) == doctest::Approx(m));
        CHECK(mcc({c.fp, c.tp, c.tn, c.fn}) == doctest::Approx(-m));
    }
}

TEST_CASE("cohen kappa examples") {
    const std::vector<int> a{0, 1, 1, 0, 1, 0};
    CHECK(cohen_kappa(a, a) == 1.0);
    const std::vector<int> all_x(10, 0);
    std::vector<int> half(10, 0);
    for (int i = 5; i < 10; ++i) half[i] = 1;
    CHECK(cohen_kappa(all_x, half) == 0.0);
    CHECK(cohen_kappa(all_x, all_x) == 1.0);
    CHECK_THROWS_AS(cohen_kappa(a, half), ValidationError);
}

TEST_CASE("cohen kappa invariants") {
    Rng rng(2);
    for (int t = 0; t < 1000; ++t) {
        const auto n = 2 + rng.index(40);
        std::vector<int> a(n), b(n), ra(n), rb(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<int>(rng.index(3));
            b[i] = rng.bernoulli(0.6) ? a[i] : static_cast<int>(rng.index(3));
            ra[i] = 10 - 3 * a[i];
            rb[i] = 10 - 3 * b[i];
        }
        const double k = cohen_kappa(a, b);
        CHECK(k <= 1.0 + 1e-12);
        CHECK(cohen_kappa(b, a) == doctest::Approx(k));
        CHECK(cohen_kappa(ra, rb) == doctest::Approx(k));
    }
}

TEST_CASE("fleiss kappa examples") {
    auto r = fleiss_kappa({{3, 0}, {0, 3}, {3, 0}}, 3);
    CHECK(r.kappa == 1.0);
    r = fleiss_kappa({{3, 0}, {1, 2}}, 3);
    CHECK(r.mean_item_agreement == doctest::Approx(2.0 / 3.0));
    CHECK(r.chance_agreement == doctest::Approx(5.0 / 9.0));
    CHECK(r.kappa == doctest::Approx(0.25));
    r = fleiss_kappa({{4, 0}, {4, 0}}, 4);
    CHECK(r.degenerate);
    CHECK(r.kappa == 1.0);
    CHECK_THROWS_AS(fleiss_kappa({{2, 0}, {1, 2}}, 3), ValidationError);
    CHECK_THROWS_AS(fleiss_kappa({}, 3), ValidationError);
}

TEST_CASE("fleiss kappa invariants") {
    Rng rng(3);
    for (int t = 0; t < 1000; ++t) {
        const int raters = 2 + static_cast<int>(rng.index(14));
        const auto items = 2 + rng.index(30);
        std::vector<std::vector<int>> table(items, std::vector<int>(2));
        for (auto& row : table) {
            row[0] = static_cast<int>(rng.index(static_cast<std::uint64_t>(raters) + 1));
            row[1] = raters - row[0];
        }
        const auto k = fleiss_kappa(table, raters);
        CHECK(k.kappa <= 1.0 + 1e-12);
        auto swapped = table, reversed = table;
        for (auto& row : swapped) std::swap(row[0], row[1]);
        std::reverse(reversed.begin(), reversed.end());
        CHECK(fleiss_kappa(swapped, raters).kappa == doctest::Approx(k.kappa));
        CHECK(fleiss_kappa(reversed, raters).kappa == doctest::Approx(k.kappa));
    }
    for (int t = 0; t < 1000; ++t) {
        const auto n = 4 + rng.index(30);
        std::vector<int> a(n), b(n);
        std::vector<std::vector<int>> table(n, std::vector<int>(2, 0));
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<int>(rng.index(2));
            b[i] = rng.bernoulli(0.7) ? a[i] : static_cast<int>(rng.index(2));
            table[i][static_cast<std::size_t>(a[i])]++;
            table[i][static_cast<std::size_t>(b[i])]++;
        }
        const auto k = fleiss_kappa(table, 2);
        if (!k.degenerate) CHECK(k.kappa == doctest::Approx(scott_pi(a, b)));
    }
}

TEST_CASE("mcnemar with continuity correction") {
    auto r = mcnemar_yates(10, 0);
    CHECK(r.chi2 == doctest::Approx(8.1));
    CHECK(r.significant_at_95);
    r = mcnemar_yates(5, 5);
    CHECK(r.chi2 == doctest::Approx(0.1));
    CHECK_FALSE(r.significant_at_95);
    CHECK_THROWS_AS(mcnemar_yates(0, 0), ValidationError);
    Rng rng(4);
    for (int t = 0; t < 1000; ++t) {
        const long b = static_cast<long>(rng.index(60)), c = static_cast<long>(rng.index(60)) + 1;
        const double expect = (std::abs(static_cast<double>(b - c)) - 1) * (std::abs(static_cast<double>(b - c)) - 1) / (b + c);
        CHECK(mcnemar_yates(b, c).chi2 == doctest::Approx(expect));
        CHECK(mcnemar_yates(c, b).chi2 == mcnemar_yates(b, c).chi2);
    }
}
