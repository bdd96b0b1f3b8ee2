#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "melodyforge/synth.hpp"
#include "support/oracles.hpp"

using namespace melodyforge;
using theory::ChordSymbol;

namespace {

constexpr int kRate = 16000;

std::vector<double> tone(Waveshape w, double f, std::size_t n = kRate) {
    return oscillate(w, f, 1.0, 0.0, n, kRate);
}

double harmonic(const std::vector<double>& x, double f) { return oracle::dft_magnitude(x, f, kRate); }

MelodySpec constant_spec(std::vector<double> freqs, std::vector<double> durations) {
    MelodySpec spec;
    spec.key = {theory::PitchClass(0), theory::Mode::major};
    for (double d : durations) spec.chords.push_back({ChordSymbol::parse("I"), freqs, d});
    double cycle = 0.0;
    for (double d : durations) cycle += d;
    spec.repeats = static_cast<int>(std::ceil(4.0 / cycle));
    return spec;
}

}  // namespace

TEST_CASE("3 Hz waveforms: unit peak, period of rate / 3 samples") {
    for (Waveshape w : kAllWaveshapes) {
        const auto x = oscillate(w, 3.0, 1.0, 0.0, 32000, kRate);
        const double peak = std::abs(*std::max_element(x.begin(), x.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        }));
        CHECK(peak == doctest::Approx(1.0).epsilon(1e-6));
        // 16000 / 3 is not an integer; three periods are exactly 16000 samples.
        for (std::size_t n = 0; n < 16000; ++n) CHECK(x[n] == doctest::Approx(x[n + 16000]).epsilon(1e-9));
        CHECK(x[0] == doctest::Approx(w == Waveshape::square ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("waveform shapes at phase 0") {
    const std::size_t quarter = 1000;  // 4 Hz, period 4000 samples
    const auto saw = oscillate(Waveshape::sawtooth, 4.0, 1.0, 0.0, 4000, kRate);
    CHECK(saw[quarter] == doctest::Approx(0.5));
    CHECK(saw[3 * quarter] == doctest::Approx(-0.5));
    const auto tri = oscillate(Waveshape::triangle, 4.0, 1.0, 0.0, 4000, kRate);
    CHECK(tri[quarter] == doctest::Approx(1.0));
    CHECK(tri[3 * quarter] == doctest::Approx(-1.0));
    CHECK(tri[quarter / 2] == doctest::Approx(0.5));
    const auto sq = oscillate(Waveshape::square, 4.0, 1.0, 0.0, 4000, kRate);
    CHECK(sq[quarter] == 1.0);
    CHECK(sq[3 * quarter] == -1.0);
    const auto sine = oscillate(Waveshape::sine, 4.0, 0.5, 0.0, 4000, kRate);
    CHECK(sine[0] == 0.0);
    CHECK(sine[quarter] == doctest::Approx(0.5));
}

TEST_CASE("oscillator argument checks") {
    CHECK_THROWS_AS(oscillate(Waveshape::sine, 8000.0, 1.0, 0.0, 10, kRate), std::invalid_argument);
    CHECK_THROWS_AS(oscillate(Waveshape::sine, 0.0, 1.0, 0.0, 10, kRate), std::invalid_argument);
    CHECK_THROWS_AS(oscillate(Waveshape::sine, 440.0, -1.0, 0.0, 10, kRate), std::invalid_argument);
}

TEST_CASE("square harmonics follow 4/(n pi) with even harmonics suppressed") {
    const auto x = tone(Waveshape::square, 440.0);
    const double h1 = harmonic(x, 440.0);
    for (int n = 2; n <= 8; n += 2) CHECK(oracle::db(harmonic(x, 440.0 * n) / h1) <= -40.0);
    for (int n = 3; n <= 7; n += 2) CHECK(std::abs(oracle::db(harmonic(x, 440.0 * n) / h1) - oracle::db(1.0 / n)) <= 1.0);
}

TEST_CASE("triangle harmonics follow 1/n^2") {
    const auto x = tone(Waveshape::triangle, 440.0);
    const double h1 = harmonic(x, 440.0);
    for (int n = 3; n <= 9; n += 2)
        CHECK(std::abs(oracle::db(harmonic(x, 440.0 * n) / h1) - oracle::db(1.0 / (n * n))) <= 1.0);
}

TEST_CASE("sawtooth harmonics follow 1/n") {
    const auto x = tone(Waveshape::sawtooth, 440.0);
    const double h1 = harmonic(x, 440.0);
    for (int n = 2; n <= 5; ++n) CHECK(std::abs(oracle::db(harmonic(x, 440.0 * n) / h1) - oracle::db(1.0 / n)) <= 1.0);
}

TEST_CASE("band-limited oscillators stay below Nyquist") {
    const auto x = oscillate(Waveshape::square, 3000.0, 1.0, 0.0, kRate, kRate, OscillatorMode::band_limited);
    const double h1 = harmonic(x, 3000.0);
    // 3 x 3000 = 9000 Hz would alias to 7000 Hz in the ideal form.
    CHECK(oracle::db(harmonic(x, 7000.0) / h1 + 1e-300) < -100.0);
    const auto ideal = oscillate(Waveshape::square, 3000.0, 1.0, 0.0, kRate, kRate);
    CHECK(oracle::db(harmonic(ideal, 7000.0) / harmonic(ideal, 3000.0)) > -20.0);
}

TEST_CASE("ADSR profiles") {
    SUBCASE("stable is flat between attack+decay and release") {
        const auto g = adsr_gain_curve(AdsrProfile::stable(), 4.0, kRate);
        REQUIRE(g.size() == 64000);
        for (std::size_t n = 320; n <= 63840; ++n) REQUIRE(g[n] == doctest::Approx(1.0));
        CHECK(g[0] == 0.0);
    }
    SUBCASE("increase reaches half gain at 1 s") {
        const auto p = AdsrProfile::increase();
        CHECK(p.gain_at(1.0, 4.0) == doctest::Approx(0.5));
        CHECK(adsr_gain_curve(p, 4.0, kRate)[16000] == doctest::Approx(0.5));
    }
    SUBCASE("decrease releases to zero over the final 2 s") {
        const auto p = AdsrProfile::decrease();
        // Oracle: A = D = 0.01, S = 1, R = 2 evaluated from the piecewise definition.
        const auto expected = [](double t) {
            if (t < 0.01) return t / 0.01;
            if (t < 0.02) return 1.0;
            if (t < 2.0) return 1.0;
            return std::max(0.0, (4.0 - t) / 2.0);
        };
        for (double t : {0.005, 0.5, 1.99, 2.0, 3.0, 3.5, 3.999}) CHECK(p.gain_at(t, 4.0) == doctest::Approx(expected(t)));
        CHECK(p.gain_at(4.0, 4.0) == doctest::Approx(0.0));
        const auto g = adsr_gain_curve(p, 4.0, kRate);
        CHECK(g.back() == doctest::Approx(expected(63999.0 / kRate)));
        CHECK(g.back() < 1e-4);
    }
    SUBCASE("values stay in [0, 1] for short clips") {
        for (const auto& p : {AdsrProfile::stable(), AdsrProfile::increase(), AdsrProfile::decrease()})
            for (double g : adsr_gain_curve(p, 0.5, kRate)) {
                CHECK(g >= 0.0);
                CHECK(g <= 1.0);
            }
    }
    SUBCASE("validation") {
        AdsrProfile bad = AdsrProfile::stable();
        bad.attack = -1.0;
        CHECK_THROWS(bad.validate());
        bad = AdsrProfile::stable();
        bad.sustain = 1.5;
        CHECK_THROWS(bad.validate());
    }
}

TEST_CASE("render_chord") {
    RenderConfig cfg;
    SUBCASE("single note") {
        const std::vector<double> f = {440.0};
        const auto x = render_chord(f, 0.5, cfg);
        CHECK(x.size() == 8000);
        for (double v : x) CHECK(std::abs(v) <= cfg.peak_level + 1e-12);
    }
    SUBCASE("C major triad has exactly three spectral peaks") {
        const std::vector<double> f = {261.6256, 329.6276, 391.9954};
        const auto x = render_chord(f, 0.5, cfg);
        // Hann-weighted DFT on the 2 Hz bin grid.
        std::vector<double> mag;
        for (int k = 0; k <= 4000; ++k) mag.push_back(oracle::dft_magnitude(x, 2.0 * k, kRate, true));
        const double top = *std::max_element(mag.begin(), mag.end());
        for (double note : f) {
            const auto k = static_cast<int>(std::lround(note / 2.0));
            const int local = static_cast<int>(std::max_element(mag.begin() + k - 2, mag.begin() + k + 3) - mag.begin());
            CHECK(std::abs(local - k) <= 1);
            CHECK(oracle::db(mag[static_cast<std::size_t>(local)] / top) > -1.0);
        }
        for (int k = 0; k <= 4000; ++k) {
            bool near = false;
            for (double note : f) near = near || std::abs(2.0 * k - note) <= 8.0;
            if (!near) CHECK(oracle::db(mag[static_cast<std::size_t>(k)] / top) < -40.0);
        }
    }
    SUBCASE("four notes stay within peak level") {
        const std::vector<double> f = {130.8128, 246.9417, 293.6648, 349.2282};
        for (Waveshape w : kAllWaveshapes) {
            cfg.waveshape = w;
            for (double v : render_chord(f, 0.7, cfg)) CHECK(std::abs(v) <= cfg.peak_level + 1e-12);
        }
    }
    SUBCASE("boundary fade") {
        cfg.waveshape = Waveshape::square;
        const std::vector<double> f = {440.0};
        const auto x = render_chord(f, 0.5, cfg);
        CHECK(x.front() == 0.0);
        CHECK(std::abs(x.back()) < cfg.peak_level / 32.0);
        CHECK(std::abs(x[100]) == doctest::Approx(cfg.peak_level));
    }
    SUBCASE("empty chord rejected") { CHECK_THROWS(render_chord(std::vector<double>{}, 0.5, cfg)); }
}

TEST_CASE("render_melody length, looping and determinism") {
    RenderConfig cfg;
    SUBCASE("4.2 s cycle truncates to 64,000 samples") {
        const auto spec = constant_spec({261.6256}, {0.7, 0.7, 0.7, 0.7, 0.7, 0.7});
        CHECK(render_melody(spec, cfg).samples.size() == 64000);
    }
    SUBCASE("1.5 s cycle repeats every 24,000 samples") {
        MelodySpec spec = constant_spec({261.6256, 329.6276, 391.9954}, {0.5, 0.5, 0.5});
        spec.chords[1].frequencies = {349.2282, 440.0, 523.2512};
        spec.chords[2].frequencies = {391.9954, 493.8833, 293.6648};
        const auto x = render_melody_unshaped(spec, cfg);
        REQUIRE(x.size() == 64000);
        // Oracle: normalized autocorrelation peaks at the cycle length.
        std::size_t best_lag = 0;
        double best = -2.0;
        for (std::size_t lag = 2000; lag <= 40000; lag += 1) {
            double num = 0.0, e1 = 0.0, e2 = 0.0;
            for (std::size_t n = 0; n + lag < x.size(); n += 4) {
                num += x[n] * x[n + lag];
                e1 += x[n] * x[n];
                e2 += x[n + lag] * x[n + lag];
            }
            const double r = num / std::sqrt(e1 * e2);
            if (r > best + 1e-12) {
                best = r;
                best_lag = lag;
            }
        }
        CHECK(best_lag == 24000);
        CHECK(best == doctest::Approx(1.0));
        for (std::size_t n = 0; n + 24000 < x.size(); ++n) REQUIRE(x[n] == x[n + 24000]);
    }
    SUBCASE("same spec renders identically") {
        const auto spec = generate_melody(12, theory::Mode::minor);
        cfg.waveshape = Waveshape::triangle;
        CHECK(render_melody(spec, cfg).samples == render_melody(spec, cfg).samples);
    }
    SUBCASE("no chords rejected") { CHECK_THROWS(render_melody(MelodySpec{}, cfg)); }
}

TEST_CASE("stable envelope keeps RMS of a constant chord flat") {
    // A single tone: a triad beats at 60-130 Hz, which moves 200 ms frame RMS
    // by about 2% independently of the envelope.
    RenderConfig cfg;
    const auto clip = render_melody(constant_spec({440.0}, {0.8}), cfg);
    std::vector<double> frame_rms;
    for (std::size_t start = 1600; start + 3200 <= 62400; start += 3200)
        frame_rms.push_back(oracle::rms(std::span<const double>(clip.samples).subspan(start, 3200)));
    const auto [lo, hi] = std::minmax_element(frame_rms.begin(), frame_rms.end());
    double mean = 0.0;
    for (double r : frame_rms) mean += r;
    mean /= static_cast<double>(frame_rms.size());
    CHECK((*hi - *lo) / mean < 0.01);
}

TEST_CASE("no clipping over random specs, shapes and profiles") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto spec = generate_melody(seed, seed % 2 ? theory::Mode::minor : theory::Mode::major);
        for (Waveshape w : kAllWaveshapes) {
            for (const auto& p : {AdsrProfile::stable(), AdsrProfile::increase(), AdsrProfile::decrease()}) {
                RenderConfig cfg;
                cfg.waveshape = w;
                cfg.adsr = p;
                const auto clip = render_melody(spec, cfg);
                REQUIRE(clip.samples.size() == 64000);
                for (double v : clip.samples) REQUIRE(std::abs(v) <= 1.0);
            }
        }
    }
}

TEST_CASE("render config") {
    RenderConfig cfg;
    CHECK(cfg.clip_samples() == 64000);
    CHECK(cfg.fade_samples() == 32);
    cfg.clip_seconds = 4.00001;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.peak_level = 1.5;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("enum names round-trip") {
    for (Waveshape w : kAllWaveshapes) CHECK(parse_waveshape(waveshape_name(w)) == w);
    for (auto p : {AmplitudeProfile::stable, AmplitudeProfile::increase, AmplitudeProfile::decrease})
        CHECK(parse_amplitude_profile(amplitude_profile_name(p)) == p);
    CHECK_THROWS(parse_waveshape("noise"));
    CHECK(AdsrProfile::named(AmplitudeProfile::decrease) == AdsrProfile::decrease());
}
