#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "melodyforge/manifest.hpp"
#include "melodyforge/wav.hpp"
#include "support/oracles.hpp"

using namespace melodyforge;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

// Small base dataset shared by the shift and verify cases.
const fs::path& small_root() {
    static const fs::path root = [] {
        auto dir = oracle::scratch_dir("cli-base");
        const auto r = run({"generate", "--root", dir.string(), "--scale-down", "100", "-q"});
        REQUIRE(r.code == 0);
        return dir;
    }();
    return root;
}

}  // namespace

TEST_CASE("generate writes WAVs and manifests, and reruns write nothing") {
    const auto dir = oracle::scratch_dir("cli-gen");
    const std::vector<std::string> cmd = {"generate", "--root", dir.string(), "--scale-down", "100",
                                          "--timbre", "sine", "--split", "test", "-j", "3"};
    const auto first = run(cmd);
    REQUIRE(first.code == 0);
    CHECK(has(first.out, "sine/test: 100 samples"));
    CHECK(has(first.out, "100 written, 0 unchanged"));
    const auto manifest = read_manifest(cli::base_manifest_path(dir, "sine", "test"));
    REQUIRE(manifest.records.size() == 100);
    for (const auto& r : manifest.records) CHECK(fs::file_size(dir / r.wav_path) == 128044);

    const auto before = fs::last_write_time(dir / manifest.records[0].wav_path);
    const auto second = run(cmd);
    REQUIRE(second.code == 0);
    CHECK(has(second.out, "0 written, 100 unchanged, 0 bytes"));
    CHECK(fs::last_write_time(dir / manifest.records[0].wav_path) == before);
    CHECK(read_manifest(cli::base_manifest_path(dir, "sine", "test")) == manifest);
}

TEST_CASE("worker count does not change the output") {
    const auto a = oracle::scratch_dir("cli-j1"), b = oracle::scratch_dir("cli-j4");
    REQUIRE(run({"generate", "--root", a.string(), "--scale-down", "100", "--timbre", "square", "--split", "val", "--count", "12", "-j", "1", "-q"}).code == 0);
    REQUIRE(run({"generate", "--root", b.string(), "--scale-down", "100", "--timbre", "square", "--split", "val", "--count", "12", "-j", "4", "-q"}).code == 0);
    const auto ma = read_manifest(cli::base_manifest_path(a, "square", "val"));
    CHECK(ma == read_manifest(cli::base_manifest_path(b, "square", "val")));
    for (const auto& r : ma.records) CHECK(read_file_bytes(a / r.wav_path) == read_file_bytes(b / r.wav_path));
}

TEST_CASE("biased sample of 20 ties timbre to label") {
    const auto dir = oracle::scratch_dir("cli-bias");
    const auto r = run({"generate", "--root", dir.string(), "--count", "20", "--bias-level", "1.0"});
    REQUIRE(r.code == 0);
    CHECK(has(r.out, "20 samples"));
    const auto m = read_manifest(dir / "biased-p1" / "manifest.tsv");
    REQUIRE(m.records.size() == 20);
    for (const auto& rec : m.records) {
        CHECK(rec.timbre == (rec.label == theory::Mode::major ? Waveshape::sine : Waveshape::square));
        CHECK(fs::exists(dir / rec.wav_path));
    }
    CHECK(has(r.out, "P(sine | major) = 1.0000"));
    CHECK(run({"generate", "--root", dir.string(), "--count", "20", "--bias-level", "0.75"}).code == cli::kInvalidShift);
}

TEST_CASE("shift domain") {
    const auto& root = small_root();
    auto r = run({"shift", "domain", "--root", root.string(), "--level", "0"});
    REQUIRE(r.code == 0);
    CHECK(has(r.out, "train\t400\t400\t0\t"));
    r = run({"shift", "domain", "--root", root.string(), "--level", "1"});
    REQUIRE(r.code == 0);
    CHECK(has(r.out, "train\t400\t398\t2\t"));
    const auto m = read_manifest(root / "shifts" / "domain" / "level-1" / "train.tsv");
    CHECK(m.header.require("shift.level") == "1");
    CHECK(fs::exists(root / "shifts" / "domain" / "level-1" / "square_domain.tsv"));
    r = run({"shift", "domain", "--root", root.string(), "--level", "11"});
    CHECK(has(r.out, "train\t400\t200\t200\t"));
    CHECK(run({"shift", "domain", "--root", root.string(), "--level", "12"}).code == cli::kInvalidShift);
    CHECK(run({"shift", "domain", "--root", root.string(), "--level", "2", "--schedule", "0,1,2"}).code ==
          cli::kInvalidShift);
}

TEST_CASE("shift selection-bias") {
    const auto& root = small_root();
    auto r = run({"shift", "selection-bias", "--root", root.string(), "--p", "0.7"});
    REQUIRE(r.code == 0);
    CHECK(has(r.out, "train\t400\t0.5000\t0.8500"));
    CHECK(has(r.out, "anti_bias\t100\t0.5000\t0.1600"));
    CHECK(has(r.out, "unseen_timbre\t200"));
    const auto dir = root / "shifts" / "selection-bias" / "p-0.7";
    for (const char* f : {"train", "in_distribution", "neutral", "anti_bias", "unseen_timbre"})
        CHECK(fs::exists(dir / (std::string(f) + ".tsv")));

    r = run({"shift", "selection-bias", "--root", root.string(), "--p", "0"});
    REQUIRE(r.code == 0);
    const auto zero = root / "shifts" / "selection-bias" / "p-0";
    CHECK(read_manifest(zero / "in_distribution.tsv").records == read_manifest(zero / "neutral.tsv").records);
    CHECK(run({"shift", "selection-bias", "--root", root.string(), "--p", "0.33"}).code == cli::kInvalidShift);
}

TEST_CASE("missing base dataset") {
    const auto dir = oracle::scratch_dir("cli-empty");
    CHECK(run({"shift", "domain", "--root", dir.string(), "--level", "1"}).code == cli::kMissingInput);
    CHECK(run({"verify", "--root", dir.string()}).code == cli::kMissingInput);
}

TEST_CASE("verify passes a fresh dataset and names a corrupted file") {
    const auto dir = oracle::scratch_dir("cli-verify");
    REQUIRE(run({"generate", "--root", dir.string(), "--scale-down", "100", "--timbre", "sine", "--split", "val", "-q"}).code == 0);
    auto r = run({"verify", "--root", dir.string(), "--rerender"});
    REQUIRE(r.code == 0);
    CHECK(has(r.out, "100 records checked, 0 symbolic violations, 0 file failures"));
    CHECK(has(r.out, "spectral agreement"));
    CHECK(has(r.out, "sine\t"));

    const auto m = read_manifest(cli::base_manifest_path(dir, "sine", "val"));
    const auto victim = dir / m.records[17].wav_path;
    {
        std::fstream f(victim, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("JUNK", 4);
    }
    r = run({"verify", "--root", dir.string()});
    CHECK(r.code == cli::kVerificationFailed);
    CHECK(has(r.err, m.records[17].wav_path));

    // Truncation is caught too; a rerender check catches content drift.
    write_file_if_changed(victim, std::vector<std::uint8_t>(100, 0));
    CHECK(run({"verify", "--root", dir.string()}).code == cli::kVerificationFailed);
}

TEST_CASE("manifest inspect") {
    const auto& root = small_root();
    const auto path = cli::base_manifest_path(root, "triangle", "train");
    const auto r = run({"manifest", "inspect", path.string()});
    REQUIRE(r.code == 0);
    CHECK(has(r.out, "records: 400"));
    CHECK(has(r.out, "generator = melodyforge"));
    CHECK(has(r.out, "digest: " + manifest_digest(read_manifest(path))));
    CHECK(run({"manifest", "inspect", (root / "nope.tsv").string()}).code == cli::kMissingInput);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"generate", "--workers", "0", "--root", "x"}).code == cli::kUsage);
    CHECK(run({"generate", "--root", "x", "--timbre", "noise"}).code == cli::kUsage);
    CHECK(run({"shift", "domain", "--root", "x"}).code == cli::kUsage);
    CHECK(run({"--help"}).code == cli::kOk);
    const auto dir = oracle::scratch_dir("cli-config");
    {
        std::ofstream(dir / "bad.cfg") << "peak_level = loud\n";
    }
    CHECK(run({"generate", "--root", (dir / "out").string(), "--config", (dir / "bad.cfg").string()}).code == cli::kUsage);
}

TEST_CASE("unwritable root") {
    const auto dir = oracle::scratch_dir("cli-ro");
    {
        std::ofstream(dir / "file") << "x";
    }
    // A regular file where a directory is needed.
    const auto r = run({"generate", "--root", (dir / "file").string(), "--scale-down", "100", "--timbre", "sine",
                        "--split", "val", "--count", "2", "-q"});
    CHECK(r.code == cli::kIoError);
}

TEST_CASE("a config file overrides defaults and lands in the header") {
    const auto dir = oracle::scratch_dir("cli-cfg");
    {
        std::ofstream(dir / "c.cfg") << "peak_level = 0.5\namplitude = increase\n";
    }
    REQUIRE(run({"generate", "--root", (dir / "out").string(), "--config", (dir / "c.cfg").string(), "--scale-down",
                 "100", "--timbre", "sine", "--split", "test", "--count", "3", "-q"})
                .code == 0);
    const auto m = read_manifest(cli::base_manifest_path(dir / "out", "sine", "test"));
    CHECK(m.header.require("config.peak_level") == "0.5");
    CHECK(m.header.require("config.amplitude") == "increase");
    CHECK(m.records[0].amplitude == AmplitudeProfile::increase);
}
