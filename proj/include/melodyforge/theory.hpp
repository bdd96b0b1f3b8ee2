#pragma once

// Equal-temperament tuning, major / harmonic-minor scales and the chord
// vocabulary used by the melody generator.

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace melodyforge::theory {

enum class Mode : std::uint8_t { major, minor };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view text);

/// One of the 12 pitch classes, C = 0. Names use flat spellings (Db, Eb, Gb,
/// Ab, Bb); sharps are accepted on input and normalized.
class PitchClass {
public:
    constexpr PitchClass() = default;
    constexpr explicit PitchClass(int index) : index_(((index % 12) + 12) % 12) {}

    constexpr int index() const { return index_; }
    std::string_view name() const;
    constexpr PitchClass transposed(int semitones) const { return PitchClass(index_ + semitones); }

    static PitchClass parse(std::string_view name);

    constexpr auto operator<=>(const PitchClass&) const = default;

private:
    int index_ = 0;
};

/// Frequency of a pitch class in a given octave (0-8). Octave 4 returns the
/// tabulated concert-pitch constant verbatim; other octaves scale it by an
/// exact power of two.
double pitch_frequency(PitchClass pc, int octave);

/// The 12 tabulated octave-4 frequencies, indexed by pitch class.
std::span<const double, 12> octave4_frequencies();

struct Pitch {
    PitchClass pitch_class;
    int octave = 4;

    double frequency() const { return pitch_frequency(pitch_class, octave); }
};

struct KeyId {
    PitchClass tonic;
    Mode mode = Mode::major;

    std::string name() const;  // e.g. "Eb major"
    auto operator<=>(const KeyId&) const = default;

    /// All 24 keys: the 12 major keys (C..B) followed by the 12 minor keys.
    static std::array<KeyId, 24> all();
    int ordinal() const { return (mode == Mode::major ? 0 : 12) + tonic.index(); }
};

struct Scale {
    KeyId key;
    std::array<PitchClass, 7> degrees;

    bool contains(PitchClass pc) const;
    /// 1-based scale degree.
    PitchClass degree(int d) const { return degrees.at(static_cast<std::size_t>((d - 1) % 7)); }
};

Scale build_scale(KeyId key);

enum class ChordQuality : std::uint8_t { major, minor, diminished, augmented, half_diminished };
enum class ChordExtension : std::uint8_t { triad, seventh };

std::string_view quality_name(ChordQuality q);

/// Roman-numeral chord symbol. Text form: case gives major/minor, "o" marks
/// diminished, "+" augmented, "h" half-diminished, a trailing "7" a seventh
/// (I, ii, viio, III+, V7, viih7, viio7, ...).
struct ChordSymbol {
    int degree = 1;
    ChordQuality quality = ChordQuality::major;
    ChordExtension extension = ChordExtension::triad;

    bool is_seventh() const { return extension == ChordExtension::seventh; }
    std::size_t note_count() const { return is_seventh() ? 4 : 3; }
    std::string name() const;
    static ChordSymbol parse(std::string_view text);

    auto operator<=>(const ChordSymbol&) const = default;
};

class ChordError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The seven diatonic triads of a mode, degrees 1..7 in order.
std::span<const ChordSymbol, 7> diatonic_triads(Mode mode);
/// The three sevenths a mode admits (built on degrees 2, 5, 7).
std::span<const ChordSymbol, 3> diatonic_sevenths(Mode mode);
/// The ten constructible chords of a mode: seven triads then three sevenths.
std::vector<ChordSymbol> allowed_chords(Mode mode);
bool is_allowed(Mode mode, const ChordSymbol& sym);

/// Quality of a stacked-thirds chord measured from its intervals. Returns
/// false when the intervals match none of the supported qualities.
bool classify_chord(std::span<const PitchClass> notes, ChordQuality& quality);

/// Pitch classes of a chord built by stacking scale thirds on sym.degree.
/// Throws ChordError if the symbol is outside the mode's ten chords or its
/// stated quality does not match the scale content.
std::vector<PitchClass> chord_pitch_classes(const Scale& scale, const ChordSymbol& sym);

}  // namespace melodyforge::theory
