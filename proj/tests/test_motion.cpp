#include <doctest.h>

#include "hilite/motion_cue.hpp"
#include "hilite/random.hpp"

#include <cmath>

using namespace hilite;

namespace {

FlowFrame frame(double vts, std::vector<std::pair<double, double>> d) {
    FlowFrame f;
    f.vts_s = vts;
    for (auto [dx, dy] : d) f.vectors.push_back({0.0, 0.0, dx, dy});
    return f;
}

} // namespace

TEST_CASE("dominant_flow") {
    auto d = dominant_flow(frame(0, {{2, 0}, {2, 0}, {2, 0}}));
    CHECK(d.dx == 2.0);
    CHECK(d.dy == 0.0);
    d = dominant_flow(frame(0, {{2, 0}, {-2, 0}, {2, 0}, {-2, 0}}));
    CHECK(d.dx == 0.0);
    CHECK(d.dy == 0.0);
    d = dominant_flow(frame(0, {}));
    CHECK(d.dx == 0.0);
    CHECK(d.dy == 0.0);
    d = dominant_flow(frame(0, {{1, 5}, {9, -1}, {3, 2}}));
    CHECK(d.dx == 3.0);
    CHECK(d.dy == 2.0);
}

TEST_CASE("motion_scores examples") {
    const MotionWindow w;
    std::vector<FlowFrame> rigid{frame(9.0, {{3, 4}, {3, 4}}), frame(10.0, {{3, 4}, {3, 4}, {3, 4}})};
    auto s = motion_scores(rigid, 10.0, w);
    CHECK(s.camera == doctest::Approx(5.0));
    CHECK(s.player == doctest::Approx(0.0));
    CHECK(s.overall == doctest::Approx(5.0));

    s = motion_scores({frame(10.0, {{0, 0}})}, 10.0, w);
    CHECK(s.camera == 0.0);
    CHECK(s.player == 0.0);
    CHECK(s.overall == 0.0);

    std::vector<FlowFrame> two{frame(9.5, {{1, 0}, {3, 0}}), frame(10.5, {{1, 0}, {3, 0}})};
    s = motion_scores(two, 10.0, w);
    CHECK(s.camera == doctest::Approx(2.0));
    CHECK(s.player == doctest::Approx(1.0));
    CHECK(s.overall == doctest::Approx(2.0));

    // Frames outside the window are ignored; an empty window gives zeros.
    s = motion_scores(two, 100.0, w);
    CHECK(s.overall == 0.0);
    std::vector<FlowFrame> mixed{frame(2.0, {{50, 0}}), frame(10.0, {{3, 4}})};
    CHECK(motion_scores(mixed, 10.0, w).overall == doctest::Approx(5.0));
}

TEST_CASE("motion_scores rotation and scaling") {
    Rng rng(11);
    const MotionWindow w;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<FlowFrame> frames;
        for (int f = 0; f < 6; ++f) {
            std::vector<std::pair<double, double>> d;
            const auto n = 1 + rng.index(9);
            for (std::uint64_t i = 0; i < n; ++i) d.emplace_back(rng.uniform(-5, 5), rng.uniform(-5, 5));
            frames.push_back(frame(8.0 + 0.5 * f, d));
        }
        const auto base = motion_scores(frames, 10.0, w);

        const double theta = rng.uniform(0.0, 6.283);
        const double s = rng.uniform(0.0, 4.0);
        auto rotated = frames, scaled = frames;
        for (auto& fr : rotated)
            for (auto& v : fr.vectors) {
                const double x = v.dx, y = v.dy;
                v.dx = std::cos(theta) * x - std::sin(theta) * y;
                v.dy = std::sin(theta) * x + std::cos(theta) * y;
            }
        for (auto& fr : scaled)
            for (auto& v : fr.vectors) {
                v.dx *= s;
                v.dy *= s;
            }
        const auto r = motion_scores(rotated, 10.0, w);
        const auto sc = motion_scores(scaled, 10.0, w);
        // Component-wise median is not rotation-equivariant, so only overall is exact under rotation.
        CHECK(r.overall == doctest::Approx(base.overall).epsilon(1e-9));
        auto quarter = frames;
        for (auto& fr : quarter)
            for (auto& v : fr.vectors) {
                const double x = v.dx;
                v.dx = -v.dy;
                v.dy = x;
            }
        const auto q = motion_scores(quarter, 10.0, w);
        CHECK(q.camera == doctest::Approx(base.camera).epsilon(1e-12));
        CHECK(q.player == doctest::Approx(base.player).epsilon(1e-12));
        CHECK(q.overall == doctest::Approx(base.overall).epsilon(1e-12));
        CHECK(sc.camera == doctest::Approx(s * base.camera).epsilon(1e-9));
        CHECK(sc.player == doctest::Approx(s * base.player).epsilon(1e-9));
        CHECK(sc.overall == doctest::Approx(s * base.overall).epsilon(1e-9));

        for (const auto& fr : frames) {
            const auto one = motion_scores({fr}, fr.vts_s, w);
            CHECK(one.overall <= one.camera + one.player + 1e-12);
        }
    }
}

TEST_CASE("flow JSONL round trip") {
    std::vector<FlowFrame> frames{frame(0.2, {{1.5, -2.25}}), frame(0.4, {})};
    frames[0].vectors[0].x = 10;
    frames[0].vectors[0].y = 20;
    const auto back = parse_flow_jsonl(serialize_flow_jsonl(frames));
    REQUIRE(back.size() == 2);
    CHECK(back[0].vts_s == 0.2);
    CHECK(back[0].vectors[0].x == 10);
    CHECK(back[0].vectors[0].dy == -2.25);
    CHECK(back[1].vectors.empty());
    CHECK_THROWS(parse_flow_jsonl("{\"vts\": 1, \"v\": [[1,2,3]]}\n"));
}
