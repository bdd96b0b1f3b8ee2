#include "melodyforge/theory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace melodyforge::theory {
namespace {

constexpr std::array<std::string_view, 12> kFlatNames = {"C",  "Db", "D",  "Eb", "E",  "F",
                                                         "Gb", "G",  "Ab", "A",  "Bb", "B"};

// Concert pitch, octave 4, as tabulated to four decimals.
constexpr std::array<double, 12> kOctave4 = {261.6256, 277.1826, 293.6648, 311.1270,
                                             329.6276, 349.2282, 369.9944, 391.9954,
                                             415.3047, 440.0000, 466.1638, 493.8833};

constexpr std::array<int, 7> kMajorSteps = {2, 2, 1, 2, 2, 2, 1};
constexpr std::array<int, 7> kHarmonicMinorSteps = {2, 1, 2, 2, 1, 3, 1};

using Q = ChordQuality;
using E = ChordExtension;

constexpr std::array<ChordSymbol, 7> kMajorTriads = {{
    {1, Q::major, E::triad},
    {2, Q::minor, E::triad},
    {3, Q::minor, E::triad},
    {4, Q::major, E::triad},
    {5, Q::major, E::triad},
    {6, Q::minor, E::triad},
    {7, Q::diminished, E::triad},
}};

constexpr std::array<ChordSymbol, 7> kMinorTriads = {{
    {1, Q::minor, E::triad},
    {2, Q::diminished, E::triad},
    {3, Q::augmented, E::triad},
    {4, Q::minor, E::triad},
    {5, Q::major, E::triad},
    {6, Q::major, E::triad},
    {7, Q::diminished, E::triad},
}};

// ii7 V7 viiø7 / iiø7 V7 vii°7
constexpr std::array<ChordSymbol, 3> kMajorSevenths = {{
    {2, Q::minor, E::seventh},
    {5, Q::major, E::seventh},
    {7, Q::half_diminished, E::seventh},
}};

constexpr std::array<ChordSymbol, 3> kMinorSevenths = {{
    {2, Q::half_diminished, E::seventh},
    {5, Q::major, E::seventh},
    {7, Q::diminished, E::seventh},
}};

constexpr std::array<std::string_view, 7> kRoman = {"I", "II", "III", "IV", "V", "VI", "VII"};

int interval(PitchClass from, PitchClass to) { return ((to.index() - from.index()) % 12 + 12) % 12; }

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::string_view mode_name(Mode mode) { return mode == Mode::major ? "major" : "minor"; }

Mode parse_mode(std::string_view text) {
    if (text == "major") return Mode::major;
    if (text == "minor") return Mode::minor;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

std::string_view PitchClass::name() const { return kFlatNames[static_cast<std::size_t>(index_)]; }

PitchClass PitchClass::parse(std::string_view name) {
    if (name.empty()) throw std::invalid_argument("empty pitch-class name");
    static constexpr std::array<int, 7> kNatural = {9, 11, 0, 2, 4, 5, 7};  // A..G
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    if (letter < 'A' || letter > 'G') throw std::invalid_argument("bad pitch-class name '" + std::string(name) + "'");
    int idx = kNatural[static_cast<std::size_t>(letter - 'A')];
    for (char accidental : name.substr(1)) {
        if (accidental == 'b') --idx;
        else if (accidental == '#') ++idx;
        else throw std::invalid_argument("bad pitch-class name '" + std::string(name) + "'");
    }
    return PitchClass(idx);
}

std::span<const double, 12> octave4_frequencies() { return kOctave4; }

double pitch_frequency(PitchClass pc, int octave) {
    if (octave < 0 || octave > 8) throw std::out_of_range("octave " + std::to_string(octave) + " outside 0-8");
    return std::ldexp(kOctave4[static_cast<std::size_t>(pc.index())], octave - 4);
}

std::string KeyId::name() const { return std::string(tonic.name()) + " " + std::string(mode_name(mode)); }

std::array<KeyId, 24> KeyId::all() {
    std::array<KeyId, 24> keys{};
    for (int i = 0; i < 12; ++i) {
        keys[static_cast<std::size_t>(i)] = {PitchClass(i), Mode::major};
        keys[static_cast<std::size_t>(i + 12)] = {PitchClass(i), Mode::minor};
    }
    return keys;
}

bool Scale::contains(PitchClass pc) const { return std::find(degrees.begin(), degrees.end(), pc) != degrees.end(); }

Scale build_scale(KeyId key) {
    const auto& steps = key.mode == Mode::major ? kMajorSteps : kHarmonicMinorSteps;
    Scale scale{key, {}};
    PitchClass pc = key.tonic;
    for (std::size_t i = 0; i < 7; ++i) {
        scale.degrees[i] = pc;
        pc = pc.transposed(steps[i]);
    }
    return scale;
}

std::string_view quality_name(ChordQuality q) {
    switch (q) {
        case Q::major: return "major";
        case Q::minor: return "minor";
        case Q::diminished: return "diminished";
        case Q::augmented: return "augmented";
        case Q::half_diminished: return "half-diminished";
    }
    return "?";
}

std::string ChordSymbol::name() const {
    if (degree < 1 || degree > 7) return "?";
    std::string out(kRoman[static_cast<std::size_t>(degree - 1)]);
    const bool upper = quality == Q::major || quality == Q::augmented;
    if (!upper) out = lower(out);
    if (quality == Q::diminished) out += 'o';
    if (quality == Q::augmented) out += '+';
    if (quality == Q::half_diminished) out += 'h';
    if (is_seventh()) out += '7';
    return out;
}

ChordSymbol ChordSymbol::parse(std::string_view text) {
    const auto bad = [&] { return ChordError("bad chord symbol '" + std::string(text) + "'"); };
    std::size_t n = 0;
    while (n < text.size() && (text[n] == 'I' || text[n] == 'V' || text[n] == 'i' || text[n] == 'v')) ++n;
    if (n == 0) throw bad();
    const std::string numeral(text.substr(0, n));
    const bool upper = std::isupper(static_cast<unsigned char>(numeral[0])) != 0;
    for (char c : numeral)
        if ((std::isupper(static_cast<unsigned char>(c)) != 0) != upper) throw bad();

    ChordSymbol sym;
    std::string up = numeral;
    for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto pos = std::find(kRoman.begin(), kRoman.end(), up);
    if (pos == kRoman.end()) throw bad();
    sym.degree = static_cast<int>(pos - kRoman.begin()) + 1;

    std::string_view rest = text.substr(n);
    sym.quality = upper ? Q::major : Q::minor;
    if (!rest.empty() && (rest[0] == 'o' || rest[0] == '+' || rest[0] == 'h')) {
        const char mark = rest[0];
        if (mark == '+' && !upper) throw bad();
        if (mark != '+' && upper) throw bad();
        sym.quality = mark == 'o' ? Q::diminished : mark == '+' ? Q::augmented : Q::half_diminished;
        rest.remove_prefix(1);
    }
    if (rest == "7") {
        sym.extension = E::seventh;
    } else if (!rest.empty()) {
        throw bad();
    }
    if (sym.quality == Q::half_diminished && !sym.is_seventh()) throw bad();
    return sym;
}

std::span<const ChordSymbol, 7> diatonic_triads(Mode mode) {
    return mode == Mode::major ? std::span<const ChordSymbol, 7>(kMajorTriads)
                               : std::span<const ChordSymbol, 7>(kMinorTriads);
}

std::span<const ChordSymbol, 3> diatonic_sevenths(Mode mode) {
    return mode == Mode::major ? std::span<const ChordSymbol, 3>(kMajorSevenths)
                               : std::span<const ChordSymbol, 3>(kMinorSevenths);
}

std::vector<ChordSymbol> allowed_chords(Mode mode) {
    std::vector<ChordSymbol> out;
    const auto triads = diatonic_triads(mode);
    const auto sevenths = diatonic_sevenths(mode);
    out.insert(out.end(), triads.begin(), triads.end());
    out.insert(out.end(), sevenths.begin(), sevenths.end());
    return out;
}

bool is_allowed(Mode mode, const ChordSymbol& sym) {
    const auto all = allowed_chords(mode);
    return std::find(all.begin(), all.end(), sym) != all.end();
}

bool classify_chord(std::span<const PitchClass> notes, ChordQuality& quality) {
    if (notes.size() != 3 && notes.size() != 4) return false;
    const int third = interval(notes[0], notes[1]);
    const int fifth = interval(notes[0], notes[2]);
    ChordQuality triad;
    if (third == 4 && fifth == 7) triad = Q::major;
    else if (third == 3 && fifth == 7) triad = Q::minor;
    else if (third == 3 && fifth == 6) triad = Q::diminished;
    else if (third == 4 && fifth == 8) triad = Q::augmented;
    else return false;
    if (notes.size() == 3) {
        quality = triad;
        return true;
    }
    const int seventh = interval(notes[0], notes[3]);
    // Dominant (major + m7), minor seventh, half-diminished, fully diminished.
    if (triad == Q::major && seventh == 10) quality = Q::major;
    else if (triad == Q::minor && seventh == 10) quality = Q::minor;
    else if (triad == Q::diminished && seventh == 10) quality = Q::half_diminished;
    else if (triad == Q::diminished && seventh == 9) quality = Q::diminished;
    else return false;
    return true;
}

std::vector<PitchClass> chord_pitch_classes(const Scale& scale, const ChordSymbol& sym) {
    if (!is_allowed(scale.key.mode, sym)) {
        throw ChordError("chord " + sym.name() + " is not available in " + scale.key.name());
    }
    std::vector<PitchClass> notes;
    for (std::size_t i = 0; i < sym.note_count(); ++i) {
        notes.push_back(scale.degree(sym.degree + 2 * static_cast<int>(i)));
    }
    ChordQuality measured{};
    if (!classify_chord(notes, measured) || measured != sym.quality) {
        throw ChordError("chord " + sym.name() + " does not match the scale content of " + scale.key.name());
    }
    return notes;
}

}  // namespace melodyforge::theory
