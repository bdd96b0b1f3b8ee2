#include "melodyforge/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <system_error>

namespace melodyforge {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
           static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
    return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

std::string_view wav_error_name(WavErrorKind kind) {
    switch (kind) {
        case WavErrorKind::io: return "io error";
        case WavErrorKind::malformed_header: return "malformed header";
        case WavErrorKind::unsupported_encoding: return "unsupported encoding";
        case WavErrorKind::unsupported_channels: return "unsupported channel count";
        case WavErrorKind::unsupported_sample_rate: return "unsupported sample rate";
        case WavErrorKind::length_mismatch: return "length mismatch";
        case WavErrorKind::sample_out_of_range: return "sample out of range";
    }
    return "?";
}

std::int16_t quantize_sample(double x) {
    const double q = std::clamp(std::round(x * kPcmScale), -32768.0, 32767.0);
    return static_cast<std::int16_t>(q);
}

double dequantize_sample(std::int16_t v) { return static_cast<double>(v) / kPcmScale; }

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
    if (clip.sample_rate <= 0) throw WavError(WavErrorKind::unsupported_sample_rate, "sample rate must be positive");
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
        const double s = clip.samples[i];
        if (!(s >= -1.0 && s <= 1.0)) {
            throw WavError(WavErrorKind::sample_out_of_range,
                           "sample " + std::to_string(i) + " = " + std::to_string(s) + " outside [-1, 1]");
        }
    }
    const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
    const auto rate = static_cast<std::uint32_t>(clip.sample_rate);

    std::vector<std::uint8_t> out;
    out.reserve(kWavHeaderBytes + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, rate);
    put_u32(out, rate * 2);
    put_u16(out, 2);
    put_u16(out, kWavBitsPerSample);
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (double s : clip.samples) put_u16(out, static_cast<std::uint16_t>(quantize_sample(s)));
    return out;
}

AudioClip decode_wav(std::span<const std::uint8_t> b, int expected_rate) {
    if (b.size() < kWavHeaderBytes) throw WavError(WavErrorKind::malformed_header, "file shorter than a WAV header");
    if (!tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE") || !tag_is(b, 12, "fmt ") || !tag_is(b, 36, "data")) {
        throw WavError(WavErrorKind::malformed_header, "missing RIFF/WAVE/fmt/data tags");
    }
    if (get_u32(b, 16) != 16) throw WavError(WavErrorKind::malformed_header, "unexpected fmt chunk size");
    if (get_u16(b, 20) != 1 || get_u16(b, 34) != kWavBitsPerSample) {
        throw WavError(WavErrorKind::unsupported_encoding, "only 16-bit integer PCM is supported");
    }
    if (get_u16(b, 22) != 1) {
        throw WavError(WavErrorKind::unsupported_channels, "expected 1 channel, found " + std::to_string(get_u16(b, 22)));
    }
    const std::uint32_t rate = get_u32(b, 24);
    if (rate == 0 || (expected_rate > 0 && rate != static_cast<std::uint32_t>(expected_rate))) {
        throw WavError(WavErrorKind::unsupported_sample_rate, "unsupported sample rate " + std::to_string(rate) + " Hz");
    }
    if (get_u32(b, 28) != rate * 2 || get_u16(b, 32) != 2) {
        throw WavError(WavErrorKind::malformed_header, "inconsistent byte rate or block alignment");
    }
    const std::uint32_t data_bytes = get_u32(b, 40);
    if (data_bytes % 2 != 0 || b.size() - kWavHeaderBytes != data_bytes || get_u32(b, 4) != 36 + data_bytes) {
        throw WavError(WavErrorKind::length_mismatch, "data chunk declares " + std::to_string(data_bytes) +
                                                          " bytes, file holds " +
                                                          std::to_string(b.size() - kWavHeaderBytes));
    }
    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.samples.resize(data_bytes / 2);
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
        clip.samples[i] = dequantize_sample(static_cast<std::int16_t>(get_u16(b, kWavHeaderBytes + 2 * i)));
    }
    return clip;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WavError(WavErrorKind::io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw WavError(WavErrorKind::io, "read failed for " + path.string());
    return bytes;
}

bool write_file_if_changed(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::error_code ec;
    if (std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) == bytes.size()) {
        const auto existing = read_file_bytes(path);
        if (std::equal(existing.begin(), existing.end(), bytes.begin(), bytes.end())) return false;
    }
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw WavError(WavErrorKind::io, "cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    auto tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw WavError(WavErrorKind::io, "cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw WavError(WavErrorKind::io, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw WavError(WavErrorKind::io, "cannot rename " + tmp.string() + ": " + ec.message());
    return true;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
    const auto bytes = encode_wav(clip);
    write_file_if_changed(path, bytes);
}

AudioClip read_wav(const std::filesystem::path& path, int expected_rate) {
    try {
        return decode_wav(read_file_bytes(path), expected_rate);
    } catch (const WavError& e) {
        if (e.kind() == WavErrorKind::io) throw;
        throw WavError(e.kind(), path.string() + ": " + e.what());
    }
}

}  // namespace melodyforge
