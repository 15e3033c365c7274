#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hilite {

struct PcmAudio {
    int sample_rate_hz = 48000;
    std::vector<std::vector<double>> channels;

    std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }
    double duration_s() const { return static_cast<double>(frames()) / sample_rate_hz; }
};

// Throws ValidationError when the channel layout or rate is invalid.
void validate(const PcmAudio& audio);

// y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]   (a0 normalized to 1)
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;
};

struct BiquadCascadeConfig {
    int sample_rate_hz = 48000;
    Biquad stage1; // head-model shelving pre-filter
    Biquad stage2; // RLB high-pass
    std::vector<double> channel_gains;

    double gain(std::size_t channel) const {
        return channel < channel_gains.size() ? channel_gains[channel] : 1.0;
    }
};

// Key/value coefficient file; see data/k_weighting_48k.cfg.
BiquadCascadeConfig parse_filter_config(std::string_view text,
                                        const std::string& source = "filter config");
BiquadCascadeConfig load_filter_config(const std::filesystem::path& path);

// Linear-phase polyphase rational resampler (windowed-sinc prototype).
std::vector<double> resample_polyphase(std::span<const double> x, int from_rate_hz, int to_rate_hz);

// Each channel goes through stage 1 then stage 2 with zeroed initial state. If the sample
// rate differs from cfg and `allow_resample` is set, the audio is first resampled to the cfg
// rate; otherwise a ValidationError is thrown.
PcmAudio two_stage_filter(const PcmAudio& audio, const BiquadCascadeConfig& cfg,
                          bool allow_resample = false);

inline constexpr double kDefaultLoudnessFloorDb = -70.0;

struct LoudnessSeries {
    double hop_s = 0.1;
    double window_s = 0.4;
    double start_ts_s = 0.0; // timestamp of values[0] (window centre)
    double floor_db = kDefaultLoudnessFloorDb;
    std::vector<double> values;

    double ts(std::size_t i) const { return start_ts_s + static_cast<double>(i) * hop_s; }
    double end_ts_s() const { return values.empty() ? start_ts_s : ts(values.size() - 1); }
};

struct LoudnessOptions {
    double window_s = 0.4;
    double hop_s = 0.1;
    double floor_db = kDefaultLoudnessFloorDb;
    bool parallel = true;
};

// Per window: per-channel mean square times channel gain, summed over channels, in dB.
LoudnessSeries loudness_series(const PcmAudio& filtered, const std::vector<double>& channel_gains,
                               const LoudnessOptions& opts);

struct AudioCueOptions {
    int peaks_m = 7;
    double pre_s = 3.0;
    double post_s = 1.0;
};

// Sum of the m largest floor-shifted local-maximum values inside
// [basket - pre, basket + post]. A peak is a sample (or the first sample of a plateau)
// strictly above the sample before it and above the first differing sample after it,
// both within the window.
double audio_cue(const LoudnessSeries& series, double basket_vts_s, const AudioCueOptions& opts);

// Cache form: JSON Lines `{ts, db}`.
std::string serialize_loudness_jsonl(const LoudnessSeries& series);
LoudnessSeries parse_loudness_jsonl(std::string_view text, double window_s, double floor_db,
                                    const std::string& source = "loudness");

} // namespace hilite
