#include "hilite/wav.hpp"

#include "hilite/errors.hpp"
#include "hilite/text_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

namespace hilite {

namespace {

std::uint32_t le32(std::string_view b, std::size_t at) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint16_t le16(std::string_view b, std::size_t at) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                      static_cast<unsigned char>(b[at + 1]) << 8);
}

void put32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>(v >> 8));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

} // namespace

PcmAudio decode_wav(std::string_view b, const std::string& source) {
    if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE") {
        throw ValidationError(source + ": not a RIFF/WAVE file");
    }
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    std::string_view data;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const auto id = b.substr(pos, 4);
        const std::size_t size = le32(b, pos + 4);
        const std::size_t body = pos + 8;
        if (body + size > b.size()) {
            throw ValidationError(source + ": truncated chunk '" + std::string(id) + "'");
        }
        if (id == "fmt ") {
            if (size < 16) throw ValidationError(source + ": short fmt chunk");
            format = le16(b, body);
            channels = le16(b, body + 2);
            rate = le32(b, body + 4);
            bits = le16(b, body + 14);
            if (format == kFormatExtensible && size >= 26) {
                format = le16(b, body + 24);
            }
            have_fmt = true;
        } else if (id == "data") {
            data = b.substr(body, size);
        }
        pos = body + size + (size & 1);
    }
    if (!have_fmt || data.data() == nullptr) {
        throw ValidationError(source + ": missing fmt or data chunk");
    }
    const bool pcm16 = format == kFormatPcm && bits == 16;
    const bool f32 = format == kFormatFloat && bits == 32;
    if (!pcm16 && !f32) {
        throw ValidationError(source + ": unsupported sample format (need PCM16 or float32)");
    }
    if (channels == 0 || rate == 0) {
        throw ValidationError(source + ": invalid channel count or sample rate");
    }
    const std::size_t bytes_per = bits / 8;
    const std::size_t frames = data.size() / (bytes_per * channels);
    PcmAudio audio;
    audio.sample_rate_hz = static_cast<int>(rate);
    audio.channels.assign(channels, std::vector<double>(frames));
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t c = 0; c < channels; ++c) {
            const std::size_t at = (f * channels + c) * bytes_per;
            double v = 0.0;
            if (pcm16) {
                v = static_cast<std::int16_t>(le16(data, at)) / 32768.0;
            } else {
                v = std::bit_cast<float>(le32(data, at));
            }
            audio.channels[c][f] = v;
        }
    }
    return audio;
}

std::string encode_wav(const PcmAudio& audio, WavSampleFormat format) {
    validate(audio);
    const std::uint16_t channels = static_cast<std::uint16_t>(audio.channels.size());
    const std::uint16_t bits = format == WavSampleFormat::Pcm16 ? 16 : 32;
    const std::uint32_t data_size =
        static_cast<std::uint32_t>(audio.frames() * channels * (bits / 8));
    std::string s;
    s += "RIFF";
    put32(s, 36 + data_size);
    s += "WAVEfmt ";
    put32(s, 16);
    put16(s, format == WavSampleFormat::Pcm16 ? kFormatPcm : kFormatFloat);
    put16(s, channels);
    put32(s, static_cast<std::uint32_t>(audio.sample_rate_hz));
    put32(s, static_cast<std::uint32_t>(audio.sample_rate_hz) * channels * (bits / 8));
    put16(s, static_cast<std::uint16_t>(channels * (bits / 8)));
    put16(s, bits);
    s += "data";
    put32(s, data_size);
    for (std::size_t f = 0; f < audio.frames(); ++f) {
        for (const auto& ch : audio.channels) {
            const double v = std::clamp(ch[f], -1.0, 1.0);
            if (format == WavSampleFormat::Pcm16) {
                const auto q = static_cast<std::int16_t>(std::lround(std::min(v * 32768.0, 32767.0)));
                put16(s, static_cast<std::uint16_t>(q));
            } else {
                put32(s, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
            }
        }
    }
    return s;
}

PcmAudio read_wav(const std::filesystem::path& path) {
    return decode_wav(read_text_file(path), path.string());
}

} // namespace hilite
