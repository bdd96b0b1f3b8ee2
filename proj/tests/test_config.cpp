#include <doctest.h>

#include "melodyforge/config.hpp"
#include "support/oracles.hpp"

using namespace melodyforge;

TEST_CASE("text round trip preserves every field") {
    ToolkitConfig c;
    c.base = BaseDatasetConfig::scaled_down(100);
    c.render.oscillator = OscillatorMode::band_limited;
    c.shift.shift_seed = 77;
    const auto back = parse_config(c.to_text());
    CHECK(back.to_fields() == c.to_fields());
    CHECK(back.hash() == c.hash());
}

TEST_CASE("hash tracks content") {
    ToolkitConfig a, b;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.render.peak_level = 0.7;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("parse_config syntax") {
    const auto c = parse_config("# comment\n\n  peak_level = 0.5  \ntimbres = sine, square\namplitude = decrease\n");
    CHECK(c.render.peak_level == 0.5);
    CHECK(c.base.timbres == std::vector<Waveshape>{Waveshape::sine, Waveshape::square});
    CHECK(c.render.adsr == AdsrProfile::decrease());
    CHECK_THROWS_AS(parse_config("nonsense_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("peak_level\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("peak_level = loud\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("timbres = sine, noise\n"), ConfigError);
}

TEST_CASE("a stamped manifest reads back as its config") {
    ToolkitConfig c;
    c.base = BaseDatasetConfig::scaled_down(100);
    c.shift.shift_seed = 1234;
    DatasetManifest m;
    m.records = build_records(c.base, Split::val, 3, Waveshape::sine);
    stamp_header(m.header, c);
    CHECK(m.header.require("generator").rfind("melodyforge ", 0) == 0);
    CHECK(m.header.require("generator_version") == std::to_string(kGeneratorVersion));
    CHECK(m.header.require("sample_rate") == "16000");
    CHECK(m.header.require("bit_depth") == "16");
    const auto back = parse_config(format_manifest(m));
    CHECK(back.hash() == c.hash());

    const auto dir = oracle::scratch_dir("config");
    write_manifest(m, dir / "m.tsv");
    CHECK(load_config(dir / "m.tsv").hash() == c.hash());
    CHECK_THROWS_AS(load_config(dir / "nope.cfg"), ConfigError);
}

TEST_CASE("validation") {
    ToolkitConfig c;
    CHECK_NOTHROW(c.validate());
    c.shift.bias_map.minor = Waveshape::sine;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.base.test = {100, 200};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.shift.domain_schedule = {0, 1, 2};
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
