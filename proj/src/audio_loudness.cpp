#include "hilite/audio_loudness.hpp"

#include "hilite/errors.hpp"
#include "hilite/kernels.hpp"
#include "hilite/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>

#include <json.hpp>

namespace hilite {

void validate(const PcmAudio& audio) {
    if (audio.sample_rate_hz <= 0) {
        throw ValidationError("sample rate must be positive");
    }
    if (audio.channels.empty()) {
        throw ValidationError("audio has no channels");
    }
    for (const auto& ch : audio.channels) {
        if (ch.size() != audio.channels.front().size()) {
            throw ValidationError("audio channels differ in length");
        }
    }
}

BiquadCascadeConfig parse_filter_config(std::string_view text, const std::string& source) {
    std::map<std::string, std::string> kv;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(source, i + 1, "expected key = value");
        }
        kv[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    auto number = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw ValidationError(source + ": missing key '" + key + "'");
        }
        return parse_double(it->second, source, 0);
    };
    BiquadCascadeConfig cfg;
    cfg.sample_rate_hz = static_cast<int>(number("sample_rate_hz"));
    auto stage = [&](const std::string& prefix) {
        Biquad b{number(prefix + ".b0"), number(prefix + ".b1"), number(prefix + ".b2"),
                 number(prefix + ".a1"), number(prefix + ".a2")};
        return b;
    };
    cfg.stage1 = stage("stage1");
    cfg.stage2 = stage("stage2");
    if (const auto it = kv.find("channel_gains"); it != kv.end()) {
        for (const auto& g : split_csv_line(it->second)) {
            cfg.channel_gains.push_back(parse_double(g, source, 0));
        }
    }
    if (cfg.sample_rate_hz <= 0) {
        throw ValidationError(source + ": sample_rate_hz must be positive");
    }
    return cfg;
}

BiquadCascadeConfig load_filter_config(const std::filesystem::path& path) {
    return parse_filter_config(read_text_file(path), path.string());
}

std::vector<double> resample_polyphase(std::span<const double> x, int from_rate_hz,
                                       int to_rate_hz) {
    if (from_rate_hz <= 0 || to_rate_hz <= 0) {
        throw ValidationError("resample: rates must be positive");
    }
    if (from_rate_hz == to_rate_hz) {
        return {x.begin(), x.end()};
    }
    const long g = std::gcd(from_rate_hz, to_rate_hz);
    const long up = to_rate_hz / g;
    const long down = from_rate_hz / g;

    // Prototype low-pass at the upsampled rate, cutoff just below the narrower Nyquist.
    constexpr long kTapsPerPhase = 32;
    const long n_taps = 2 * kTapsPerPhase * std::max(up, down) + 1;
    const double cutoff = 0.95 * 0.5 / static_cast<double>(std::max(up, down));
    const long centre = (n_taps - 1) / 2;
    std::vector<double> h(static_cast<std::size_t>(n_taps));
    for (long n = 0; n < n_taps; ++n) {
        const double t = static_cast<double>(n - centre);
        const double sinc = t == 0.0 ? 2.0 * cutoff
                                     : std::sin(2.0 * std::numbers::pi * cutoff * t) /
                                           (std::numbers::pi * t);
        const double blackman =
            0.42 - 0.5 * std::cos(2.0 * std::numbers::pi * n / (n_taps - 1)) +
            0.08 * std::cos(4.0 * std::numbers::pi * n / (n_taps - 1));
        h[static_cast<std::size_t>(n)] = static_cast<double>(up) * sinc * blackman;
    }

    const long in_len = static_cast<long>(x.size());
    const long out_len = (in_len * up + down - 1) / down;
    std::vector<double> y(static_cast<std::size_t>(out_len), 0.0);
    for (long m = 0; m < out_len; ++m) {
        // Position in the upsampled stream, delayed by the filter centre (zero phase overall).
        const long t = m * down + centre;
        long n_lo = (t - (n_taps - 1) + up - 1) / up;
        if (t - (n_taps - 1) < 0) {
            n_lo = 0;
        }
        const long n_hi = std::min(t / up, in_len - 1);
        double acc = 0.0;
        for (long n = std::max(0L, n_lo); n <= n_hi; ++n) {
            acc += x[static_cast<std::size_t>(n)] * h[static_cast<std::size_t>(t - n * up)];
        }
        y[static_cast<std::size_t>(m)] = acc;
    }
    return y;
}

namespace {

// Transposed direct form II.
void run_biquad(const Biquad& q, std::vector<double>& x) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (double& v : x) {
        const double in = v;
        const double out = q.b0 * in + s1;
        s1 = q.b1 * in - q.a1 * out + s2;
        s2 = q.b2 * in - q.a2 * out;
        v = out;
    }
}

bool finite(const Biquad& q) {
    return std::isfinite(q.b0) && std::isfinite(q.b1) && std::isfinite(q.b2) &&
           std::isfinite(q.a1) && std::isfinite(q.a2);
}

} // namespace

PcmAudio two_stage_filter(const PcmAudio& audio, const BiquadCascadeConfig& cfg,
                          bool allow_resample) {
    validate(audio);
    if (!finite(cfg.stage1) || !finite(cfg.stage2)) {
        throw ValidationError("filter coefficients must be finite");
    }
    PcmAudio out;
    out.sample_rate_hz = cfg.sample_rate_hz;
    out.channels.reserve(audio.channels.size());
    if (audio.sample_rate_hz != cfg.sample_rate_hz) {
        if (!allow_resample) {
            throw ValidationError("audio sample rate " + std::to_string(audio.sample_rate_hz) +
                                  " Hz does not match filter coefficients at " +
                                  std::to_string(cfg.sample_rate_hz) +
                                  " Hz (enable resampling or supply coefficients)");
        }
        for (const auto& ch : audio.channels) {
            out.channels.push_back(resample_polyphase(ch, audio.sample_rate_hz, cfg.sample_rate_hz));
        }
    } else {
        out.channels = audio.channels;
    }
    for (auto& ch : out.channels) {
        run_biquad(cfg.stage1, ch);
        run_biquad(cfg.stage2, ch);
    }
    return out;
}

LoudnessSeries loudness_series(const PcmAudio& filtered, const std::vector<double>& channel_gains,
                               const LoudnessOptions& opts) {
    validate(filtered);
    if (!(opts.hop_s > 0.0) || opts.window_s < opts.hop_s) {
        throw ValidationError("loudness: need window_s >= hop_s > 0");
    }
    const auto window = static_cast<std::size_t>(std::llround(opts.window_s * filtered.sample_rate_hz));
    const auto hop = static_cast<std::size_t>(std::llround(opts.hop_s * filtered.sample_rate_hz));
    if (hop == 0 || filtered.frames() < window) {
        throw ValidationError("loudness: audio shorter than one measurement window");
    }
    LoudnessSeries series;
    series.hop_s = opts.hop_s;
    series.window_s = opts.window_s;
    series.start_ts_s = 0.5 * opts.window_s;
    series.floor_db = opts.floor_db;

    std::vector<double> total;
    for (std::size_t c = 0; c < filtered.channels.size(); ++c) {
        const double gain = c < channel_gains.size() ? channel_gains[c] : 1.0;
        const auto ms = opts.parallel
                            ? kernels::window_mean_square_parallel(filtered.channels[c], window, hop)
                            : kernels::window_mean_square_serial(filtered.channels[c], window, hop);
        if (total.empty()) {
            total.assign(ms.size(), 0.0);
        }
        for (std::size_t i = 0; i < ms.size(); ++i) {
            total[i] += gain * ms[i];
        }
    }
    series.values.resize(total.size());
    for (std::size_t i = 0; i < total.size(); ++i) {
        const double db = total[i] > 0.0 ? 10.0 * std::log10(total[i]) : opts.floor_db;
        series.values[i] = std::max(db, opts.floor_db);
    }
    return series;
}

double audio_cue(const LoudnessSeries& series, double basket_vts_s, const AudioCueOptions& opts) {
    if (opts.peaks_m < 1) {
        throw ValidationError("audio cue: m must be >= 1");
    }
    if (series.values.empty()) {
        throw ValidationError("audio cue: empty loudness series");
    }
    constexpr double kEps = 1e-9;
    const double lo_t = basket_vts_s - opts.pre_s;
    const double hi_t = basket_vts_s + opts.post_s;
    if (hi_t < series.start_ts_s - kEps || lo_t > series.end_ts_s() + kEps) {
        throw ValidationError("audio cue: window [" + format_fixed(lo_t, 3) + ", " +
                              format_fixed(hi_t, 3) + "] outside loudness series span");
    }
    const double last = static_cast<double>(series.values.size() - 1);
    const double lo_f = std::clamp(std::ceil((lo_t - series.start_ts_s) / series.hop_s - kEps), 0.0, last);
    const double hi_f = std::clamp(std::floor((hi_t - series.start_ts_s) / series.hop_s + kEps), 0.0, last);
    const auto lo = static_cast<std::size_t>(lo_f);
    const auto hi = static_cast<std::size_t>(hi_f);

    std::vector<double> peaks;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double v = series.values[i];
        if (!(v > series.values[i - 1])) {
            continue;
        }
        std::size_t r = i + 1;
        while (r <= hi && series.values[r] == v) {
            ++r;
        }
        if (r <= hi && series.values[r] < v) {
            peaks.push_back(v - series.floor_db);
        }
        i = r - 1;
    }
    const auto m = std::min<std::size_t>(peaks.size(), static_cast<std::size_t>(opts.peaks_m));
    std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(m), peaks.end(),
                      std::greater<>());
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sum += peaks[i];
    }
    return sum;
}

std::string serialize_loudness_jsonl(const LoudnessSeries& series) {
    std::string out;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        nlohmann::ordered_json j;
        j["ts"] = series.ts(i);
        j["db"] = series.values[i];
        out += j.dump();
        out += '\n';
    }
    return out;
}

LoudnessSeries parse_loudness_jsonl(std::string_view text, double window_s, double floor_db,
                                    const std::string& source) {
    LoudnessSeries s;
    s.window_s = window_s;
    s.floor_db = floor_db;
    std::vector<double> ts;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(lines[i]);
            ts.push_back(j.at("ts").get<double>());
            s.values.push_back(std::max(j.at("db").get<double>(), floor_db));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source, i + 1, e.what());
        }
    }
    if (ts.empty()) {
        throw ValidationError(source + ": empty loudness series");
    }
    s.start_ts_s = ts.front();
    s.hop_s = ts.size() > 1 ? (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1) : 0.1;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (std::abs(ts[i] - s.ts(i)) > 1e-6 * std::max(1.0, std::abs(ts[i]))) {
            throw ParseError(source, i + 1, "loudness timestamps are not uniformly spaced");
        }
    }
    if (!(s.hop_s > 0.0)) {
        throw ValidationError(source + ": non-increasing loudness timestamps");
    }
    return s;
}

} // namespace hilite
