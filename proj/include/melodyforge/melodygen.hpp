#pragma once

// Seeded symbolic melody generation: key, chord progression with cadence
// forcing, optional sevenths, per-note octave randomization and durations.

#include <cstdint>
#include <string>
#include <vector>

#include "melodyforge/rng.hpp"
#include "melodyforge/theory.hpp"

namespace melodyforge {

/// Bumped whenever the draw order or any draw rule changes.
inline constexpr int kGeneratorVersion = 1;

struct GenConfig {
    double freq_min = 130.81;
    double freq_max = 523.25;
    /// The bounds are given to 0.01 Hz; a frequency within this distance of a
    /// bound counts as in range (C5 from the tuning table is 523.2512 Hz).
    double freq_tolerance = 0.005;
    std::vector<int> chord_counts = {3, 4, 5, 6, 7};
    double duration_min = 0.2;
    double duration_max = 0.9;
    double target_seconds = 4.0;

    void validate() const;
    bool in_freq_range(double hz) const {
        return hz >= freq_min - freq_tolerance && hz <= freq_max + freq_tolerance;
    }
    bool in_duration_range(double seconds) const { return seconds >= duration_min && seconds <= duration_max; }
};

struct ChordEvent {
    theory::ChordSymbol symbol;
    std::vector<double> frequencies;  // one per chord tone, root first
    double duration = 0.0;            // seconds

    bool operator==(const ChordEvent&) const = default;
};

struct MelodySpec {
    std::uint64_t seed = 0;
    theory::Mode label = theory::Mode::major;
    theory::KeyId key;
    std::vector<ChordEvent> chords;  // one cycle, before repetition
    int repeats = 1;                 // cycles needed to reach the target length

    double cycle_duration() const;
    double total_duration() const { return cycle_duration() * repeats; }

    bool operator==(const MelodySpec&) const = default;
};

/// Deterministic in (seed, label, config). Draw order: tonic, chord count,
/// triads, cadence forcing, seventh coin, then per chord its note octaves
/// followed by its duration.
MelodySpec generate_melody(std::uint64_t seed, theory::Mode label, const GenConfig& config = {});

/// Ensures the tonic, subdominant and dominant triads (I, IV, V or i, iv, V)
/// are present. Each missing one, in that order, overwrites a position drawn
/// uniformly from those not yet overwritten. Throws if fewer than 3 chords.
std::vector<theory::ChordSymbol> force_cadence_chords(std::vector<theory::ChordSymbol> chords,
                                                      theory::Mode mode, Rng& rng);

/// Replaces ii, V and vii° (ii°, V, vii° in minor) with their sevenths.
std::vector<theory::ChordSymbol> promote_sevenths(std::vector<theory::ChordSymbol> chords, theory::Mode mode);

/// Every f * 2^k (k integer, possibly negative) inside the config's range,
/// ascending.
std::vector<double> octave_candidates(double freq, const GenConfig& config);

/// A uniform pick from octave_candidates. Throws std::domain_error when there
/// are none.
double randomize_octave(double freq, const GenConfig& config, Rng& rng);

}  // namespace melodyforge
