#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "melodyforge/melodygen.hpp"
#include "melodyforge/verifier.hpp"

using namespace melodyforge;
using theory::ChordSymbol;
using theory::Mode;

namespace {

std::vector<ChordSymbol> syms(std::initializer_list<const char*> names) {
    std::vector<ChordSymbol> out;
    for (const char* n : names) out.push_back(ChordSymbol::parse(n));
    return out;
}

bool contains(const std::vector<ChordSymbol>& v, const char* name) {
    return std::find(v.begin(), v.end(), ChordSymbol::parse(name)) != v.end();
}

// Oracle: in-range power-of-two multiples, enumerated by brute force.
std::vector<double> powers_in_range(double f, double lo, double hi, double tol) {
    std::vector<double> out;
    for (int k = -12; k <= 12; ++k) {
        const double g = std::ldexp(f, k);
        if (g >= lo - tol && g <= hi + tol) out.push_back(g);
    }
    return out;
}

}  // namespace

TEST_CASE("generation is deterministic in seed and label") {
    for (std::uint64_t seed : {0ULL, 1ULL, 17ULL, 99999ULL}) {
        for (Mode m : {Mode::major, Mode::minor}) {
            const auto a = generate_melody(seed, m);
            const auto b = generate_melody(seed, m);
            CHECK(a == b);
            CHECK(a.label == m);
            CHECK(a.key.mode == m);
        }
    }
    CHECK_FALSE(generate_melody(1, Mode::major) == generate_melody(2, Mode::major));
}

TEST_CASE("cadence triads present (V7 counts for V)") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        for (Mode m : {Mode::major, Mode::minor}) {
            const auto spec = generate_melody(seed, m);
            std::vector<ChordSymbol> s;
            for (const auto& c : spec.chords) s.push_back(c.symbol);
            CHECK(contains(s, m == Mode::major ? "I" : "i"));
            CHECK(contains(s, m == Mode::major ? "IV" : "iv"));
            CHECK((contains(s, "V") || contains(s, "V7")));
        }
    }
}

TEST_CASE("1,000 seeds: counts, durations and frequencies in range") {
    const GenConfig cfg;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto spec = generate_melody(seed, seed % 2 ? Mode::minor : Mode::major);
        const auto n = static_cast<int>(spec.chords.size());
        CHECK(n >= 3);
        CHECK(n <= 7);
        for (const auto& c : spec.chords) {
            CHECK(c.duration >= 0.2);
            CHECK(c.duration <= 0.9);
            CHECK(c.frequencies.size() == c.symbol.note_count());
            for (double f : c.frequencies) {
                CHECK(f >= 130.81 - cfg.freq_tolerance);
                CHECK(f <= 523.25 + cfg.freq_tolerance);
            }
        }
    }
}

TEST_CASE("label soundness: every note belongs to the key's scale") {
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const Mode m = seed % 3 ? Mode::major : Mode::minor;
        const auto spec = generate_melody(seed, m);
        REQUIRE(spec.key.mode == m);
        const auto scale = theory::build_scale(spec.key);
        for (const auto& c : spec.chords)
            for (double f : c.frequencies) {
                const auto pc = pitch_class_of(f);
                REQUIRE(pc.has_value());
                CHECK(scale.contains(*pc));
            }
    }
}

TEST_CASE("seventh coin is all or nothing") {
    int with_sevenths = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const Mode m = seed % 2 ? Mode::minor : Mode::major;
        const auto spec = generate_melody(seed, m);
        const auto triads = theory::diatonic_triads(m);
        bool seventh = false, eligible_triad = false;
        for (const auto& c : spec.chords) {
            seventh = seventh || c.symbol.is_seventh();
            for (std::size_t d : {1u, 4u, 6u}) eligible_triad = eligible_triad || c.symbol == triads[d];
        }
        CHECK_FALSE((seventh && eligible_triad));
        with_sevenths += seventh ? 1 : 0;
    }
    // V is always present, so the coin shows directly: about half.
    CHECK(std::abs(with_sevenths - 1000) < 120);
}

TEST_CASE("loop closure") {
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const auto spec = generate_melody(seed, Mode::major);
        const double cycle = spec.cycle_duration();
        CHECK(cycle * spec.repeats >= 4.0);
        if (cycle < 4.0) CHECK(spec.repeats >= 2);
        CHECK(cycle * (spec.repeats - 1) < 4.0);
    }
}

TEST_CASE("tonic uniformity over 12,000 seeds") {
    std::array<int, 12> counts{};
    for (std::uint64_t seed = 0; seed < 12000; ++seed)
        ++counts[static_cast<std::size_t>(generate_melody(seed, seed % 2 ? Mode::minor : Mode::major).key.tonic.index())];
    for (int c : counts) CHECK(std::abs(c - 1000) <= 100);
}

TEST_CASE("chord count is uniform on 3..7") {
    std::map<std::size_t, int> counts;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) ++counts[generate_melody(seed, Mode::minor).chords.size()];
    CHECK(counts.size() == 5);
    for (const auto& [n, c] : counts) CHECK(std::abs(c - 2000) < 200);
}

TEST_CASE("force_cadence_chords") {
    Rng rng(1);
    SUBCASE("already satisfied is unchanged") {
        const auto in = syms({"I", "IV", "V"});
        CHECK(force_cadence_chords(in, Mode::major, rng) == in);
    }
    SUBCASE("three missing triads replace all three slots") {
        const auto out = force_cadence_chords(syms({"ii", "ii", "ii"}), Mode::major, rng);
        CHECK_FALSE(contains(out, "ii"));
        CHECK(contains(out, "I"));
        CHECK(contains(out, "IV"));
        CHECK(contains(out, "V"));
    }
    SUBCASE("minor mode uses i, iv, V") {
        const auto out = force_cadence_chords(syms({"iio", "VI", "VI", "VI"}), Mode::minor, rng);
        CHECK(contains(out, "i"));
        CHECK(contains(out, "iv"));
        CHECK(contains(out, "V"));
    }
    SUBCASE("present chords are not duplicated and forced slots are kept") {
        const auto out = force_cadence_chords(syms({"V", "ii", "ii"}), Mode::major, rng);
        CHECK(std::count(out.begin(), out.end(), ChordSymbol::parse("V")) == 1);
    }
    SUBCASE("too short") { CHECK_THROWS(force_cadence_chords(syms({"ii", "ii"}), Mode::major, rng)); }
}

TEST_CASE("force_cadence_chords picks positions uniformly without replacement") {
    // Three of four slots are replaced, each slot with probability 3/4.
    Rng rng(2024);
    const auto in = syms({"ii", "ii", "ii", "ii"});
    std::array<int, 4> replaced{};
    constexpr int kRuns = 10000;
    for (int r = 0; r < kRuns; ++r) {
        const auto out = force_cadence_chords(in, Mode::major, rng);
        int changed = 0;
        for (std::size_t i = 0; i < 4; ++i)
            if (out[i] != in[i]) {
                ++replaced[i];
                ++changed;
            }
        REQUIRE(changed == 3);
    }
    for (int c : replaced) CHECK(std::abs(c / double(kRuns) - 0.75) <= 0.02);
}

TEST_CASE("promote_sevenths") {
    CHECK(promote_sevenths(syms({"I", "ii", "V", "viio"}), Mode::major) == syms({"I", "ii7", "V7", "viih7"}));
    CHECK(promote_sevenths(syms({"i", "iio", "V", "viio"}), Mode::minor) == syms({"i", "iih7", "V7", "viio7"}));
}

TEST_CASE("octave candidates and randomization") {
    const GenConfig cfg;
    SUBCASE("middle C has three candidates, each drawn a third of the time") {
        const auto expected = powers_in_range(261.6256, 130.81, 523.25, cfg.freq_tolerance);
        REQUIRE(expected.size() == 3);
        CHECK(octave_candidates(261.6256, cfg) == expected);
        Rng rng(5);
        std::map<double, int> counts;
        for (int i = 0; i < 10000; ++i) ++counts[randomize_octave(261.6256, cfg, rng)];
        REQUIRE(counts.size() == 3);
        for (double f : expected) CHECK(std::abs(counts[f] / 10000.0 - 1.0 / 3.0) <= 0.02);
    }
    SUBCASE("A has two") { CHECK(octave_candidates(440.0, cfg) == std::vector<double>{220.0, 440.0}); }
    SUBCASE("singleton range") {
        GenConfig narrow = cfg;
        narrow.freq_min = 400.0;
        narrow.freq_max = 500.0;
        Rng rng(3);
        CHECK(randomize_octave(440.0, narrow, rng) == 440.0);
    }
    SUBCASE("empty range") {
        GenConfig narrow = cfg;
        narrow.freq_min = 450.0;
        narrow.freq_max = 500.0;
        Rng rng(3);
        CHECK_THROWS_AS(randomize_octave(440.0, narrow, rng), std::domain_error);
    }
    SUBCASE("every table pitch has a candidate in the default range") {
        for (int pc = 0; pc < 12; ++pc) {
            const double f = theory::pitch_frequency(theory::PitchClass(pc), 4);
            CHECK(octave_candidates(f, cfg) == powers_in_range(f, 130.81, 523.25, cfg.freq_tolerance));
        }
    }
}

TEST_CASE("config validation") {
    GenConfig bad;
    bad.freq_min = 600.0;
    CHECK_THROWS(bad.validate());
    bad = {};
    bad.chord_counts = {};
    CHECK_THROWS(bad.validate());
    bad = {};
    bad.duration_max = 5.0;
    CHECK_THROWS(bad.validate());
    CHECK_NOTHROW(GenConfig{}.validate());
}
