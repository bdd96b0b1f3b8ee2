#pragma once

// Canonical 44-byte-header RIFF/WAVE, 16-bit signed PCM, mono.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "melodyforge/synth.hpp"

namespace melodyforge {

inline constexpr std::size_t kWavHeaderBytes = 44;
inline constexpr int kWavBitsPerSample = 16;
inline constexpr double kPcmScale = 32767.0;

enum class WavErrorKind {
    io,
    malformed_header,
    unsupported_encoding,
    unsupported_channels,
    unsupported_sample_rate,
    length_mismatch,
    sample_out_of_range,
};

std::string_view wav_error_name(WavErrorKind kind);

class WavError : public std::runtime_error {
public:
    WavError(WavErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    WavErrorKind kind() const { return kind_; }

private:
    WavErrorKind kind_;
};

/// round(x * 32767) clamped to the int16 range.
std::int16_t quantize_sample(double x);
double dequantize_sample(std::int16_t v);

/// Byte image of the file write_wav would produce. Rejects samples outside
/// [-1, 1] with sample_out_of_range.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

/// Parses a canonical file. expected_rate = 0 accepts any rate.
AudioClip decode_wav(std::span<const std::uint8_t> bytes, int expected_rate = 16000);

void write_wav(const AudioClip& clip, const std::filesystem::path& path);
AudioClip read_wav(const std::filesystem::path& path, int expected_rate = 16000);

/// Writes bytes through a temporary file and rename. Returns false, touching
/// nothing, when the file already holds exactly these bytes.
bool write_file_if_changed(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace melodyforge
