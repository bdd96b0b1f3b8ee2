#include "melodyforge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace melodyforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t to_samples(double seconds, int rate) {
    return static_cast<std::size_t>(std::llround(seconds * static_cast<double>(rate)));
}

double ideal_sample(Waveshape shape, double cycles) {
    const double frac = cycles - std::floor(cycles);
    switch (shape) {
        case Waveshape::sine: return std::sin(kTwoPi * cycles);
        case Waveshape::square: return frac < 0.5 ? 1.0 : -1.0;
        case Waveshape::sawtooth: {
            const double shifted = frac + 0.5;
            return 2.0 * (shifted - std::floor(shifted)) - 1.0;
        }
        case Waveshape::triangle: {
            const double shifted = frac + 0.25;
            return 1.0 - 4.0 * std::abs(shifted - std::floor(shifted) - 0.5);
        }
    }
    return 0.0;
}

// Fourier series of the unit-amplitude ideal shapes, truncated below Nyquist.
double band_limited_sample(Waveshape shape, double cycles, int max_harmonic) {
    if (shape == Waveshape::sine) return std::sin(kTwoPi * cycles);
    double acc = 0.0;
    for (int k = 1; k <= max_harmonic; ++k) {
        const double s = std::sin(kTwoPi * k * cycles);
        switch (shape) {
            case Waveshape::square:
                if (k % 2 == 1) acc += 4.0 / (std::numbers::pi * k) * s;
                break;
            case Waveshape::sawtooth:
                acc += (k % 2 == 1 ? 2.0 : -2.0) / (std::numbers::pi * k) * s;
                break;
            case Waveshape::triangle:
                if (k % 2 == 1) {
                    const double sign = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
                    acc += sign * 8.0 / (std::numbers::pi * std::numbers::pi * k * k) * s;
                }
                break;
            case Waveshape::sine: break;
        }
    }
    return acc;
}

}  // namespace

std::string_view waveshape_name(Waveshape w) {
    switch (w) {
        case Waveshape::sine: return "sine";
        case Waveshape::square: return "square";
        case Waveshape::sawtooth: return "sawtooth";
        case Waveshape::triangle: return "triangle";
    }
    return "?";
}

Waveshape parse_waveshape(std::string_view text) {
    for (auto w : kAllWaveshapes)
        if (waveshape_name(w) == text) return w;
    throw std::invalid_argument("unknown waveshape '" + std::string(text) + "'");
}

std::string_view amplitude_profile_name(AmplitudeProfile p) {
    switch (p) {
        case AmplitudeProfile::stable: return "stable";
        case AmplitudeProfile::increase: return "increase";
        case AmplitudeProfile::decrease: return "decrease";
        case AmplitudeProfile::custom: return "custom";
    }
    return "?";
}

AmplitudeProfile parse_amplitude_profile(std::string_view text) {
    for (auto p : {AmplitudeProfile::stable, AmplitudeProfile::increase, AmplitudeProfile::decrease,
                   AmplitudeProfile::custom})
        if (amplitude_profile_name(p) == text) return p;
    throw std::invalid_argument("unknown amplitude profile '" + std::string(text) + "'");
}

std::string_view oscillator_mode_name(OscillatorMode m) { return m == OscillatorMode::ideal ? "ideal" : "band_limited"; }

OscillatorMode parse_oscillator_mode(std::string_view text) {
    if (text == "ideal") return OscillatorMode::ideal;
    if (text == "band_limited") return OscillatorMode::band_limited;
    throw std::invalid_argument("unknown oscillator mode '" + std::string(text) + "'");
}

AdsrProfile AdsrProfile::named(AmplitudeProfile p) {
    switch (p) {
        case AmplitudeProfile::stable: return stable();
        case AmplitudeProfile::increase: return increase();
        case AmplitudeProfile::decrease: return decrease();
        case AmplitudeProfile::custom: break;
    }
    throw std::invalid_argument("custom profile has no preset parameters");
}

void AdsrProfile::validate() const {
    if (attack < 0.0 || decay < 0.0 || release < 0.0) throw std::invalid_argument("ADSR times must be non-negative");
    if (sustain < 0.0 || sustain > 1.0) throw std::invalid_argument("ADSR sustain must lie in [0, 1]");
}

double AdsrProfile::gain_at(double t, double duration) const {
    // Attack, decay and sustain run from the start; release occupies the final
    // `release` seconds and ramps from whatever level was reached to zero.
    const auto held = [this](double u) {
        if (u < attack) return u / attack;
        if (u < attack + decay) return 1.0 - (1.0 - sustain) * (u - attack) / decay;
        return sustain;
    };
    if (t < 0.0 || t >= duration) return 0.0;
    const double release_start = std::max(0.0, duration - release);
    if (t < release_start) return held(t);
    const double level = held(release_start);
    return release > 0.0 ? level * (duration - t) / release : level;
}

std::size_t RenderConfig::clip_samples() const { return to_samples(clip_seconds, sample_rate); }
std::size_t RenderConfig::fade_samples() const { return to_samples(fade_seconds, sample_rate); }

void RenderConfig::validate() const {
    if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
    if (!(clip_seconds > 0.0)) throw std::invalid_argument("clip length must be positive");
    const double exact = clip_seconds * sample_rate;
    if (std::abs(exact - std::round(exact)) > 1e-9) {
        throw std::invalid_argument("clip length times sample rate must be an integer sample count");
    }
    if (!(peak_level > 0.0) || peak_level > 1.0) throw std::invalid_argument("peak level must lie in (0, 1]");
    if (fade_seconds < 0.0) throw std::invalid_argument("fade length must be non-negative");
    adsr.validate();
}

std::vector<double> oscillate(Waveshape shape, double freq, double amplitude, double phase, std::size_t n,
                              int sample_rate, OscillatorMode mode) {
    if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
    const double nyquist = sample_rate / 2.0;
    if (!(freq > 0.0) || freq >= nyquist) {
        throw std::invalid_argument("oscillator frequency " + std::to_string(freq) + " Hz outside (0, Nyquist)");
    }
    if (amplitude < 0.0) throw std::invalid_argument("oscillator amplitude must be non-negative");

    const int max_harmonic = static_cast<int>(std::floor((nyquist - 1e-9) / freq));
    const double phase_cycles = phase / kTwoPi;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double cycles = freq * static_cast<double>(i) / sample_rate + phase_cycles;
        const double v = mode == OscillatorMode::ideal ? ideal_sample(shape, cycles)
                                                       : band_limited_sample(shape, cycles, max_harmonic);
        out[i] = amplitude * v;
    }
    return out;
}

std::vector<double> adsr_gain_curve(const AdsrProfile& profile, double duration, int sample_rate) {
    profile.validate();
    const std::size_t n = to_samples(duration, sample_rate);
    std::vector<double> gain(n);
    for (std::size_t i = 0; i < n; ++i) {
        gain[i] = std::clamp(profile.gain_at(static_cast<double>(i) / sample_rate, duration), 0.0, 1.0);
    }
    return gain;
}

namespace {

std::vector<double> render_chord_samples(std::span<const double> freqs, std::size_t n, const RenderConfig& config) {
    if (freqs.empty()) throw std::invalid_argument("chord has no notes");
    if (freqs.size() > 4) throw std::invalid_argument("chord has more than four notes");
    std::vector<double> mix(n, 0.0);
    const double amp = config.peak_level / static_cast<double>(freqs.size());
    for (double f : freqs) {
        const auto wave = oscillate(config.waveshape, f, amp, 0.0, n, config.sample_rate, config.oscillator);
        for (std::size_t i = 0; i < n; ++i) mix[i] += wave[i];
    }
    const std::size_t fade = std::min(config.fade_samples(), n / 2);
    for (std::size_t i = 0; i < fade; ++i) {
        const double g = static_cast<double>(i) / static_cast<double>(fade);
        mix[i] *= g;
        mix[n - 1 - i] *= g;
    }
    return mix;
}

}  // namespace

std::vector<double> render_chord(std::span<const double> freqs, double duration, const RenderConfig& config) {
    config.validate();
    return render_chord_samples(freqs, to_samples(duration, config.sample_rate), config);
}

std::vector<double> render_melody_unshaped(const MelodySpec& spec, const RenderConfig& config) {
    config.validate();
    if (spec.chords.empty()) throw std::invalid_argument("melody has no chords");

    std::vector<std::vector<double>> cycle_parts;
    std::size_t cycle_len = 0;
    double elapsed = 0.0;
    for (const auto& chord : spec.chords) {
        if (!(chord.duration > 0.0)) throw std::invalid_argument("chord duration must be positive");
        elapsed += chord.duration;
        const std::size_t end = to_samples(elapsed, config.sample_rate);
        cycle_parts.push_back(render_chord_samples(chord.frequencies, end - cycle_len, config));
        cycle_len = end;
    }
    if (cycle_len == 0) throw std::invalid_argument("melody is shorter than one sample");

    const std::size_t total = config.clip_samples();
    std::vector<double> out;
    out.reserve(total + cycle_len);
    while (out.size() < total) {
        for (const auto& part : cycle_parts) out.insert(out.end(), part.begin(), part.end());
    }
    out.resize(total);
    return out;
}

AudioClip render_melody(const MelodySpec& spec, const RenderConfig& config) {
    AudioClip clip;
    clip.samples = render_melody_unshaped(spec, config);
    clip.sample_rate = config.sample_rate;
    clip.waveshape = config.waveshape;
    clip.amplitude = config.adsr.name;
    const auto gain = adsr_gain_curve(config.adsr, config.clip_seconds, config.sample_rate);
    for (std::size_t i = 0; i < clip.samples.size(); ++i) clip.samples[i] *= gain[i];
    return clip;
}

}  // namespace melodyforge
