#pragma once

#include "hilite/audio_loudness.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace hilite {

enum class WavSampleFormat { Pcm16, Float32 };

// Little-endian RIFF/WAVE with 16-bit integer or 32-bit float samples.
PcmAudio decode_wav(std::string_view bytes, const std::string& source = "wav");
std::string encode_wav(const PcmAudio& audio, WavSampleFormat format);

PcmAudio read_wav(const std::filesystem::path& path);

} // namespace hilite
