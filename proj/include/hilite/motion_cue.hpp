#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hilite {

struct FlowVector {
    double x = 0.0, y = 0.0;   // pixels
    double dx = 0.0, dy = 0.0; // pixels per frame
};

struct FlowFrame {
    double vts_s = 0.0;
    std::vector<FlowVector> vectors;
};

struct Displacement {
    double dx = 0.0, dy = 0.0;
};

struct MotionScores {
    double camera = 0.0;
    double player = 0.0;
    double overall = 0.0;
};

struct MotionWindow {
    double pre_s = 3.0;
    double post_s = 1.0;
};

// Component-wise median of the displacements; (0, 0) for an empty frame.
Displacement dominant_flow(const FlowFrame& frame);

// Per-frame magnitudes averaged over the frames in [basket - pre, basket + post].
MotionScores motion_scores(const std::vector<FlowFrame>& frames, double basket_vts_s,
                           const MotionWindow& window);

// JSON Lines `{vts, v: [[x, y, dx, dy], ...]}`.
std::vector<FlowFrame> parse_flow_jsonl(std::string_view text, const std::string& source = "flow");
std::string serialize_flow_jsonl(const std::vector<FlowFrame>& frames);

} // namespace hilite
