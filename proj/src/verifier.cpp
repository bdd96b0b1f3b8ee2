#include "melodyforge/verifier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

namespace melodyforge {
namespace {

using theory::ChordSymbol;
using theory::Mode;
using theory::PitchClass;

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// |X[k]| for k = 0..n/2 of a real signal.
std::vector<double> magnitude_spectrum(const std::vector<double>& signal) {
    const int n = static_cast<int>(signal.size());
    std::vector<double> in(signal);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<double> mag(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) mag[k] = std::abs(out[k]);
    return mag;
}

std::string hz(double f) {
    std::ostringstream os;
    os.precision(6);
    os << f << " Hz";
    return os.str();
}

constexpr std::array<double, 12> kKrumhanslMajor = {6.35, 2.23, 3.48, 2.33, 4.38, 4.09,
                                                    2.52, 5.19, 2.39, 3.66, 2.29, 2.88};
constexpr std::array<double, 12> kKrumhanslMinor = {6.33, 2.68, 3.52, 5.38, 2.60, 3.53,
                                                    2.54, 4.75, 3.98, 2.69, 3.34, 3.17};

double pearson(const std::array<double, 12>& a, const std::array<double, 12>& b) {
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / 12.0;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / 12.0;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return saa > 0.0 && sbb > 0.0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

}  // namespace

std::optional<PitchClass> pitch_class_of(double f) {
    if (!(f > 0.0)) return std::nullopt;
    const double semis = 12.0 * std::log2(f / theory::pitch_frequency(PitchClass(0), 4));
    const long nearest = std::lround(semis);
    const PitchClass pc(static_cast<int>(nearest));
    const long octave = 4 + static_cast<long>(std::floor(static_cast<double>(nearest) / 12.0));
    if (octave < 0 || octave > 8) return std::nullopt;
    const double centre = theory::pitch_frequency(pc, static_cast<int>(octave));
    if (std::abs(1200.0 * std::log2(f / centre)) > 1.0) return std::nullopt;
    return pc;
}

SymbolicReport verify_symbolic(const MelodySpec& spec, const GenConfig& config) {
    SymbolicReport report;
    auto& v = report.violations;

    if (spec.key.mode != spec.label) {
        v.push_back("label " + std::string(theory::mode_name(spec.label)) + " disagrees with key " + spec.key.name());
    }
    const theory::Scale scale = theory::build_scale(spec.key);
    const auto n = static_cast<int>(spec.chords.size());
    if (std::find(config.chord_counts.begin(), config.chord_counts.end(), n) == config.chord_counts.end()) {
        v.push_back("chord count " + std::to_string(n) + " outside the allowed set");
    }

    const auto triads = theory::diatonic_triads(spec.key.mode);
    const auto sevenths = theory::diatonic_sevenths(spec.key.mode);
    const auto has = [&](const ChordSymbol& s) {
        return std::any_of(spec.chords.begin(), spec.chords.end(), [&](const ChordEvent& c) { return c.symbol == s; });
    };
    // The seventh coin may have promoted V to V7, which still sounds the triad.
    for (std::size_t d : {0u, 3u, 4u}) {
        const bool promoted = std::any_of(sevenths.begin(), sevenths.end(), [&](const ChordSymbol& s7) {
            return s7.degree == triads[d].degree && has(s7);
        });
        if (!has(triads[d]) && !promoted) v.push_back("cadence triad " + triads[d].name() + " missing");
    }
    bool any_seventh = false;
    bool any_unpromoted = false;
    for (const auto& s7 : sevenths) {
        any_seventh = any_seventh || has(s7);
        any_unpromoted = any_unpromoted || has(triads[static_cast<std::size_t>(s7.degree - 1)]);
    }
    if (any_seventh && any_unpromoted) v.push_back("sevenths applied to only some eligible chords");

    for (std::size_t i = 0; i < spec.chords.size(); ++i) {
        const auto& c = spec.chords[i];
        const std::string where = "chord " + std::to_string(i + 1) + " (" + c.symbol.name() + ")";
        if (!config.in_duration_range(c.duration)) v.push_back(where + " duration " + std::to_string(c.duration) + " s out of range");

        std::vector<PitchClass> expected;
        try {
            expected = theory::chord_pitch_classes(scale, c.symbol);
        } catch (const theory::ChordError& e) {
            v.push_back(where + ": " + e.what());
        }
        if (!expected.empty() && expected.size() != c.frequencies.size()) {
            v.push_back(where + " has " + std::to_string(c.frequencies.size()) + " notes, expected " +
                        std::to_string(expected.size()));
        }
        for (std::size_t j = 0; j < c.frequencies.size(); ++j) {
            const double f = c.frequencies[j];
            if (!config.in_freq_range(f)) v.push_back(where + " note " + hz(f) + " outside the frequency range");
            const auto pc = pitch_class_of(f);
            if (!pc) {
                v.push_back(where + " note " + hz(f) + " is not a tuned pitch");
                continue;
            }
            if (!scale.contains(*pc)) {
                v.push_back(where + " note " + hz(f) + " (" + std::string(pc->name()) + ") outside the " +
                            spec.key.name() + " scale");
            } else if (j < expected.size() && *pc != expected[j]) {
                v.push_back(where + " note " + std::to_string(j + 1) + " is " + std::string(pc->name()) +
                            ", expected " + std::string(expected[j].name()));
            }
        }
    }

    const double cycle = spec.cycle_duration();
    if (spec.repeats < 1 || cycle * spec.repeats < config.target_seconds ||
        (spec.repeats > 1 && cycle * (spec.repeats - 1) >= config.target_seconds)) {
        v.push_back("repeat count " + std::to_string(spec.repeats) + " does not just reach " +
                    std::to_string(config.target_seconds) + " s");
    }
    return report;
}

PitchClass ChromaVector::peak() const {
    return PitchClass(static_cast<int>(std::max_element(energy.begin(), energy.end()) - energy.begin()));
}

ChromaVector chroma(const AudioClip& clip, const ChromaOptions& options) {
    const std::size_t n = clip.samples.size();
    if (n < 2) throw SilentClipError("clip too short for spectral analysis");
    std::vector<double> windowed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
        windowed[i] = clip.samples[i] * w;
    }
    const auto mag = magnitude_spectrum(windowed);
    const double bin_hz = static_cast<double>(clip.sample_rate) / static_cast<double>(n);
    const double c4 = theory::pitch_frequency(PitchClass(0), 4);

    ChromaVector out;
    for (std::size_t k = 1; k < mag.size(); ++k) {
        const double f = static_cast<double>(k) * bin_hz;
        const long nearest = std::lround(12.0 * std::log2(f / c4));
        const long octave = 4 + static_cast<long>(std::floor(static_cast<double>(nearest) / 12.0));
        if (octave < options.lowest_octave || octave > options.highest_octave) continue;
        const PitchClass pc(static_cast<int>(nearest));
        const double centre = theory::pitch_frequency(pc, static_cast<int>(octave));
        if (std::abs(1200.0 * std::log2(f / centre)) > options.half_width_cents) continue;
        out.energy[static_cast<std::size_t>(pc.index())] += mag[k] * mag[k];
    }
    const double total = std::accumulate(out.energy.begin(), out.energy.end(), 0.0);
    if (!(total > 1e-9)) throw SilentClipError("clip is silent in the analysed range");
    for (auto& e : out.energy) e /= total;
    return out;
}

std::array<double, 24> score_keys(const ChromaVector& c, KeyScorer scorer) {
    std::array<double, 24> scores{};
    const auto keys = theory::KeyId::all();
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto& key = keys[i];
        if (scorer == KeyScorer::scale_membership) {
            const auto scale = theory::build_scale(key);
            for (const auto pc : scale.degrees) scores[i] += c.energy[static_cast<std::size_t>(pc.index())];
        } else {
            const auto& profile = key.mode == Mode::major ? kKrumhanslMajor : kKrumhanslMinor;
            std::array<double, 12> rotated{};
            for (int pc = 0; pc < 12; ++pc) {
                rotated[static_cast<std::size_t>(pc)] =
                    profile[static_cast<std::size_t>(PitchClass(pc - key.tonic.index()).index())];
            }
            scores[i] = pearson(c.energy, rotated);
        }
    }
    return scores;
}

KeyEstimate estimate_key(const ChromaVector& c, KeyScorer scorer) {
    const auto scores = score_keys(c, scorer);
    const auto keys = theory::KeyId::all();
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (i != best) second = std::max(second, scores[i]);
    return {keys[best], scores[best], scores[best] - second};
}

KeyEstimate estimate_key(const AudioClip& clip, KeyScorer scorer) { return estimate_key(chroma(clip), scorer); }

void AccuracyTable::add(Waveshape timbre, const theory::KeyId& truth, const KeyEstimate& estimate) {
    auto& row = rows[timbre];
    ++row.total;
    if (estimate.key.mode == truth.mode) ++row.mode_correct;
    if (estimate.key == truth) ++row.key_correct;
}

double AccuracyTable::mode_accuracy(Waveshape timbre) const {
    const auto it = rows.find(timbre);
    if (it == rows.end() || it->second.total == 0) return 0.0;
    return static_cast<double>(it->second.mode_correct) / static_cast<double>(it->second.total);
}

std::string AccuracyTable::format() const {
    std::ostringstream os;
    os << "timbre\tclips\tmode_accuracy\tkey_accuracy\n";
    os.setf(std::ios::fixed);
    os.precision(4);
    for (const auto& [timbre, row] : rows) {
        const double total = static_cast<double>(std::max<std::uint64_t>(row.total, 1));
        os << waveshape_name(timbre) << '\t' << row.total << '\t' << row.mode_correct / total << '\t'
           << row.key_correct / total << '\n';
    }
    return os.str();
}

}  // namespace melodyforge
