#pragma once

// Independent checks that a sample carries its labeled key: symbolically from
// the spec, spectrally from the rendered audio.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "melodyforge/melodygen.hpp"
#include "melodyforge/synth.hpp"
#include "melodyforge/theory.hpp"

namespace melodyforge {

struct SymbolicReport {
    std::vector<std::string> violations;

    bool passed() const { return violations.empty(); }
};

/// Pitch class whose tabulated frequency, in some octave 0-8, lies within
/// 1 cent of hz; nullopt when none does.
std::optional<theory::PitchClass> pitch_class_of(double hz);

/// Checks scale membership of every note, the label/key agreement, the
/// presence of the cadence triads, chord spelling, seventh coherence, chord
/// count, durations, frequency range and loop closure.
SymbolicReport verify_symbolic(const MelodySpec& spec, const GenConfig& config = {});

class SilentClipError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ChromaVector {
    std::array<double, 12> energy{};  // unit sum

    theory::PitchClass peak() const;
};

struct ChromaOptions {
    int lowest_octave = 2;
    int highest_octave = 6;
    double half_width_cents = 50.0;
};

/// Hann-windowed power spectrum (|X|^2) of the whole clip, folded onto pitch
/// classes: a bin counts toward the class whose tabulated centre (octaves
/// lowest..highest) lies within half_width_cents. Throws SilentClipError when
/// nothing falls in any bin.
ChromaVector chroma(const AudioClip& clip, const ChromaOptions& options = {});

enum class KeyScorer : std::uint8_t {
    scale_membership,  // sum of chroma over the key's seven scale classes
    krumhansl,         // Pearson correlation with Krumhansl-Kessler profiles
};

struct KeyEstimate {
    theory::KeyId key;
    double score = 0.0;
    double runner_up_margin = 0.0;  // best score minus second best
};

/// Score for each of the 24 keys, in KeyId::all() order.
std::array<double, 24> score_keys(const ChromaVector& chroma, KeyScorer scorer = KeyScorer::scale_membership);
KeyEstimate estimate_key(const ChromaVector& chroma, KeyScorer scorer = KeyScorer::scale_membership);
KeyEstimate estimate_key(const AudioClip& clip, KeyScorer scorer = KeyScorer::scale_membership);

/// Spectral agreement tallies per timbre.
struct AccuracyTable {
    struct Row {
        std::uint64_t total = 0;
        std::uint64_t mode_correct = 0;
        std::uint64_t key_correct = 0;
    };
    std::map<Waveshape, Row> rows;

    void add(Waveshape timbre, const theory::KeyId& truth, const KeyEstimate& estimate);
    double mode_accuracy(Waveshape timbre) const;
    std::string format() const;
};

}  // namespace melodyforge
