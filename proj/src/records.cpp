#include "melodyforge/records.hpp"

#include <stdexcept>

namespace melodyforge {

std::string_view split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

Split parse_split(std::string_view text) {
    for (auto s : {Split::train, Split::val, Split::test})
        if (split_name(s) == text) return s;
    throw std::invalid_argument("unknown split '" + std::string(text) + "'");
}

std::string_view shift_role_name(ShiftRole r) {
    switch (r) {
        case ShiftRole::clean: return "clean";
        case ShiftRole::bias_aligned: return "bias_aligned";
        case ShiftRole::bias_reverted: return "bias_reverted";
        case ShiftRole::domain_replaced: return "domain_replaced";
    }
    return "?";
}

ShiftRole parse_shift_role(std::string_view text) {
    for (auto r : {ShiftRole::clean, ShiftRole::bias_aligned, ShiftRole::bias_reverted, ShiftRole::domain_replaced})
        if (shift_role_name(r) == text) return r;
    throw std::invalid_argument("unknown shift role '" + std::string(text) + "'");
}

std::string default_wav_path(Waveshape timbre, Split split, std::uint64_t seed) {
    return std::string(waveshape_name(timbre)) + "/" + std::string(split_name(split)) + "/" + std::to_string(seed) +
           ".wav";
}

MelodySpec SampleRecord::spec() const {
    MelodySpec s;
    s.seed = seed;
    s.label = label;
    s.key = key;
    s.chords = chords;
    s.repeats = repeats;
    return s;
}

SampleRecord SampleRecord::from_spec(const MelodySpec& spec, Waveshape timbre, AmplitudeProfile amplitude,
                                     Split split) {
    SampleRecord r;
    r.seed = spec.seed;
    r.label = spec.label;
    r.key = spec.key;
    r.timbre = timbre;
    r.amplitude = amplitude;
    r.split = split;
    r.repeats = spec.repeats;
    r.wav_path = default_wav_path(timbre, split, spec.seed);
    r.chords = spec.chords;
    return r;
}

SampleRecord SampleRecord::with_timbre(Waveshape t) const {
    SampleRecord r = *this;
    r.timbre = t;
    r.wav_path = default_wav_path(t, split, seed);
    return r;
}

}  // namespace melodyforge
