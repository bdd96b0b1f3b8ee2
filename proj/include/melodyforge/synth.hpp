#pragma once

// Oscillators, ADSR envelopes and rendering of a MelodySpec to a fixed-length
// mono clip.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "melodyforge/melodygen.hpp"

namespace melodyforge {

enum class Waveshape : std::uint8_t { sine, square, sawtooth, triangle };

std::string_view waveshape_name(Waveshape w);
Waveshape parse_waveshape(std::string_view text);
inline constexpr Waveshape kAllWaveshapes[] = {Waveshape::sine, Waveshape::square, Waveshape::sawtooth,
                                               Waveshape::triangle};

enum class AmplitudeProfile : std::uint8_t { stable, increase, decrease, custom };

std::string_view amplitude_profile_name(AmplitudeProfile p);
AmplitudeProfile parse_amplitude_profile(std::string_view text);

struct AdsrProfile {
    AmplitudeProfile name = AmplitudeProfile::stable;
    double attack = 0.01;   // seconds
    double decay = 0.01;    // seconds
    double sustain = 1.0;   // gain
    double release = 0.01;  // seconds

    static AdsrProfile stable() { return {AmplitudeProfile::stable, 0.01, 0.01, 1.0, 0.01}; }
    static AdsrProfile increase() { return {AmplitudeProfile::increase, 2.0, 0.01, 1.0, 0.01}; }
    static AdsrProfile decrease() { return {AmplitudeProfile::decrease, 0.01, 0.01, 1.0, 2.0}; }
    /// Named profile lookup; throws for "custom".
    static AdsrProfile named(AmplitudeProfile p);

    void validate() const;
    /// Gain at time t (seconds) of an envelope spanning `duration` seconds.
    double gain_at(double t, double duration) const;

    bool operator==(const AdsrProfile&) const = default;
};

/// ideal: closed-form waveforms (aliasing above Nyquist folds back).
/// band_limited: additive synthesis of the Fourier series up to Nyquist.
enum class OscillatorMode : std::uint8_t { ideal, band_limited };

std::string_view oscillator_mode_name(OscillatorMode m);
OscillatorMode parse_oscillator_mode(std::string_view text);

struct RenderConfig {
    int sample_rate = 16000;
    double clip_seconds = 4.0;
    Waveshape waveshape = Waveshape::sine;
    AdsrProfile adsr = AdsrProfile::stable();
    double peak_level = 0.8;
    double fade_seconds = 0.002;  // linear fade at each chord boundary
    OscillatorMode oscillator = OscillatorMode::ideal;

    std::size_t clip_samples() const;
    std::size_t fade_samples() const;
    void validate() const;
};

struct AudioClip {
    std::vector<double> samples;
    int sample_rate = 16000;
    Waveshape waveshape = Waveshape::sine;
    AmplitudeProfile amplitude = AmplitudeProfile::stable;

    double seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// n samples of a periodic wave: sine = a sin(2 pi f t + phase); square,
/// sawtooth and triangle share the sine's phase and zero crossing at phase 0
/// (square is +a over the first half period, sawtooth rises from -a to +a).
/// Throws std::invalid_argument if freq is not in (0, Nyquist) or amplitude < 0.
std::vector<double> oscillate(Waveshape shape, double freq, double amplitude, double phase, std::size_t n,
                              int sample_rate, OscillatorMode mode = OscillatorMode::ideal);

/// Piecewise-linear envelope sampled at n / sample_rate for
/// n < round(duration * sample_rate).
std::vector<double> adsr_gain_curve(const AdsrProfile& profile, double duration, int sample_rate);

/// Sum of one oscillator per frequency (phase 0 at onset) scaled by
/// peak_level / count, with the boundary fade applied. round(duration * rate)
/// samples long.
std::vector<double> render_chord(std::span<const double> freqs, double duration, const RenderConfig& config);

/// Chords concatenated and looped to fill the clip, before the envelope.
/// Chord boundaries sit at round(cumulative_time * rate) so the loop period
/// is round(cycle_duration * rate) samples.
std::vector<double> render_melody_unshaped(const MelodySpec& spec, const RenderConfig& config);

/// render_melody_unshaped times the ADSR curve over the whole clip.
AudioClip render_melody(const MelodySpec& spec, const RenderConfig& config);

}  // namespace melodyforge
