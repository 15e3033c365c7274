#include "hilite/motion_cue.hpp"

#include "hilite/errors.hpp"
#include "hilite/text_io.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace hilite {

namespace {

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

} // namespace

Displacement dominant_flow(const FlowFrame& frame) {
    if (frame.vectors.empty()) {
        return {};
    }
    std::vector<double> dx, dy;
    dx.reserve(frame.vectors.size());
    dy.reserve(frame.vectors.size());
    for (const auto& v : frame.vectors) {
        dx.push_back(v.dx);
        dy.push_back(v.dy);
    }
    return {median(std::move(dx)), median(std::move(dy))};
}

MotionScores motion_scores(const std::vector<FlowFrame>& frames, double basket_vts_s,
                           const MotionWindow& window) {
    const double lo = basket_vts_s - window.pre_s;
    const double hi = basket_vts_s + window.post_s;
    auto first = std::lower_bound(frames.begin(), frames.end(), lo,
                                  [](const FlowFrame& f, double t) { return f.vts_s < t; });
    MotionScores sum;
    std::size_t count = 0;
    for (auto it = first; it != frames.end() && it->vts_s <= hi; ++it) {
        const auto dom = dominant_flow(*it);
        sum.camera += std::hypot(dom.dx, dom.dy);
        if (!it->vectors.empty()) {
            double player = 0.0, overall = 0.0;
            for (const auto& v : it->vectors) {
                player += std::hypot(v.dx - dom.dx, v.dy - dom.dy);
                overall += std::hypot(v.dx, v.dy);
            }
            const auto n = static_cast<double>(it->vectors.size());
            sum.player += player / n;
            sum.overall += overall / n;
        }
        ++count;
    }
    if (count == 0) {
        return {};
    }
    const auto n = static_cast<double>(count);
    return {sum.camera / n, sum.player / n, sum.overall / n};
}

std::vector<FlowFrame> parse_flow_jsonl(std::string_view text, const std::string& source) {
    std::vector<FlowFrame> frames;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) {
            continue;
        }
        FlowFrame f;
        try {
            const auto j = nlohmann::json::parse(lines[i]);
            f.vts_s = j.at("vts").get<double>();
            for (const auto& v : j.at("v")) {
                if (!v.is_array() || v.size() != 4) {
                    throw ParseError(source, i + 1, "flow vector must be [x, y, dx, dy]");
                }
                f.vectors.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                                     v[3].get<double>()});
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source, i + 1, e.what());
        }
        if (f.vts_s < 0.0) {
            throw ParseError(source, i + 1, "negative frame timestamp");
        }
        if (!frames.empty() && f.vts_s < frames.back().vts_s) {
            throw ParseError(source, i + 1, "flow frames not sorted by vts");
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

std::string serialize_flow_jsonl(const std::vector<FlowFrame>& frames) {
    std::string out;
    for (const auto& f : frames) {
        nlohmann::ordered_json j;
        j["vts"] = f.vts_s;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& v : f.vectors) {
            arr.push_back({v.x, v.y, v.dx, v.dy});
        }
        j["v"] = std::move(arr);
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace hilite
