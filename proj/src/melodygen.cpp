#include "melodyforge/melodygen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace melodyforge {

using theory::ChordSymbol;
using theory::Mode;

void GenConfig::validate() const {
    if (!(freq_min > 0.0) || !(freq_min < freq_max)) throw std::invalid_argument("frequency range must satisfy 0 < min < max");
    if (freq_tolerance < 0.0) throw std::invalid_argument("frequency tolerance must be non-negative");
    if (chord_counts.empty()) throw std::invalid_argument("chord count set is empty");
    for (int n : chord_counts) {
        if (n < 3) throw std::invalid_argument("chord counts must be at least 3 to fit I, IV and V");
    }
    if (!(target_seconds > 0.0)) throw std::invalid_argument("target length must be positive");
    if (!(duration_min > 0.0) || duration_min > duration_max || duration_max > target_seconds) {
        throw std::invalid_argument("duration range must lie within (0, target]");
    }
}

double MelodySpec::cycle_duration() const {
    return std::accumulate(chords.begin(), chords.end(), 0.0,
                           [](double acc, const ChordEvent& c) { return acc + c.duration; });
}

std::vector<ChordSymbol> force_cadence_chords(std::vector<ChordSymbol> chords, Mode mode, Rng& rng) {
    if (chords.size() < 3) throw std::invalid_argument("cadence forcing needs at least 3 chords");
    const auto triads = theory::diatonic_triads(mode);
    const std::array<ChordSymbol, 3> required = {triads[0], triads[3], triads[4]};

    std::vector<std::size_t> open(chords.size());
    std::iota(open.begin(), open.end(), 0);

    const auto present = [&](const ChordSymbol& s) { return std::find(chords.begin(), chords.end(), s) != chords.end(); };
    while (!std::all_of(required.begin(), required.end(), present)) {
        const auto pick = static_cast<std::size_t>(rng.below(open.size()));
        const std::size_t slot = open[pick];
        for (const auto& r : required) {
            if (!present(r)) {
                chords[slot] = r;
                break;
            }
        }
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return chords;
}

std::vector<ChordSymbol> promote_sevenths(std::vector<ChordSymbol> chords, Mode mode) {
    const auto triads = theory::diatonic_triads(mode);
    const auto sevenths = theory::diatonic_sevenths(mode);
    for (auto& c : chords) {
        for (std::size_t i = 0; i < sevenths.size(); ++i) {
            const auto& base = triads[static_cast<std::size_t>(sevenths[i].degree - 1)];
            if (c == base) c = sevenths[i];
        }
    }
    return chords;
}

std::vector<double> octave_candidates(double freq, const GenConfig& config) {
    if (!(freq > 0.0)) throw std::invalid_argument("frequency must be positive");
    std::vector<double> out;
    double f = freq;
    while (f >= config.freq_min - config.freq_tolerance) f = std::ldexp(f, -1);
    for (f = std::ldexp(f, 1); f <= config.freq_max + config.freq_tolerance; f = std::ldexp(f, 1)) {
        if (config.in_freq_range(f)) out.push_back(f);
    }
    return out;
}

double randomize_octave(double freq, const GenConfig& config, Rng& rng) {
    const auto candidates = octave_candidates(freq, config);
    if (candidates.empty()) throw std::domain_error("no octave of " + std::to_string(freq) + " Hz lies in range");
    return candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
}

MelodySpec generate_melody(std::uint64_t seed, Mode label, const GenConfig& config) {
    config.validate();
    Rng rng(seed);

    MelodySpec spec;
    spec.seed = seed;
    spec.label = label;
    spec.key = {theory::PitchClass(static_cast<int>(rng.below(12))), label};
    const theory::Scale scale = theory::build_scale(spec.key);

    const int n = config.chord_counts[static_cast<std::size_t>(rng.below(config.chord_counts.size()))];

    const auto triads = theory::diatonic_triads(label);
    std::vector<ChordSymbol> symbols;
    symbols.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) symbols.push_back(triads[static_cast<std::size_t>(rng.below(7))]);

    symbols = force_cadence_chords(std::move(symbols), label, rng);
    if (rng.coin() == 1) symbols = promote_sevenths(std::move(symbols), label);

    for (const auto& sym : symbols) {
        ChordEvent event{sym, {}, 0.0};
        for (const auto pc : theory::chord_pitch_classes(scale, sym)) {
            event.frequencies.push_back(randomize_octave(theory::pitch_frequency(pc, 4), config, rng));
        }
        event.duration = rng.uniform(config.duration_min, config.duration_max);
        spec.chords.push_back(std::move(event));
    }

    const double cycle = spec.cycle_duration();
    spec.repeats = 1;
    while (cycle * spec.repeats < config.target_seconds) ++spec.repeats;
    return spec;
}

}  // namespace melodyforge
