#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "melodyforge/melodygen.hpp"
#include "melodyforge/synth.hpp"

namespace melodyforge {

enum class Split : std::uint8_t { train, val, test };
enum class ShiftRole : std::uint8_t { clean, bias_aligned, bias_reverted, domain_replaced };

std::string_view split_name(Split s);
Split parse_split(std::string_view text);
std::string_view shift_role_name(ShiftRole r);
ShiftRole parse_shift_role(std::string_view text);

/// One emitted sample. Everything needed to re-render it is carried here.
struct SampleRecord {
    std::uint64_t seed = 0;
    theory::Mode label = theory::Mode::major;
    theory::KeyId key;
    Waveshape timbre = Waveshape::sine;
    AmplitudeProfile amplitude = AmplitudeProfile::stable;
    Split split = Split::train;
    ShiftRole role = ShiftRole::clean;
    bool selected = true;  // V; always true for a record present in a manifest
    int repeats = 1;
    std::string wav_path;  // relative to the dataset root
    std::vector<ChordEvent> chords;

    MelodySpec spec() const;
    static SampleRecord from_spec(const MelodySpec& spec, Waveshape timbre, AmplitudeProfile amplitude, Split split);

    /// The same sample rendered with another timbre: identical symbolic
    /// content, path pointing at that timbre's file.
    SampleRecord with_timbre(Waveshape timbre) const;

    bool operator==(const SampleRecord&) const = default;
};

/// <timbre>/<split>/<seed>.wav
std::string default_wav_path(Waveshape timbre, Split split, std::uint64_t seed);

}  // namespace melodyforge
