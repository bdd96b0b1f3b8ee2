#pragma once

// Base dataset construction (seed ranges, splits, four timbres) and the two
// timbre-based shift constructors with their evaluation suites.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "melodyforge/manifest.hpp"
#include "melodyforge/melodygen.hpp"
#include "melodyforge/records.hpp"

namespace melodyforge {

/// Inclusive seed interval.
struct SeedRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;

    std::uint64_t size() const { return last - first + 1; }
    bool contains(std::uint64_t s) const { return s >= first && s <= last; }
    bool overlaps(const SeedRange& o) const { return first <= o.last && o.first <= last; }
    bool operator==(const SeedRange&) const = default;
};

/// Even seeds are major, odd seeds minor.
theory::Mode label_for_seed(std::uint64_t seed);

struct BaseDatasetConfig {
    SeedRange train_val{0, 49'999};
    std::uint64_t train_size = 40'000;  // first seeds of train_val; the rest is validation
    std::uint64_t val_size = 10'000;
    SeedRange test{55'000, 64'999};
    std::vector<Waveshape> timbres{std::begin(kAllWaveshapes), std::end(kAllWaveshapes)};
    AmplitudeProfile amplitude = AmplitudeProfile::stable;
    GenConfig gen;

    /// Every count and range divided by `factor` (train_val 0..N/f-1, test
    /// starting at 55000/f).
    static BaseDatasetConfig scaled_down(std::uint64_t factor);

    void validate() const;
    SeedRange train_seeds() const { return {train_val.first, train_val.first + train_size - 1}; }
    SeedRange val_seeds() const { return {train_val.first + train_size, train_val.last}; }
    SeedRange seeds_for(Split split) const;
};

/// One manifest per requested timbre; each holds train, val and test records
/// in seed order. A seed carries the same MelodySpec in every timbre.
std::map<Waveshape, DatasetManifest> build_base_dataset(const BaseDatasetConfig& config);

/// The first `count` records of one split in one timbre.
std::vector<SampleRecord> build_records(const BaseDatasetConfig& config, Split split, std::uint64_t count,
                                        Waveshape timbre);

/// Which timbre the confound assigns to each label.
struct BiasMap {
    Waveshape major = Waveshape::sine;
    Waveshape minor = Waveshape::square;

    Waveshape aligned(theory::Mode label) const { return label == theory::Mode::major ? major : minor; }
    Waveshape reverted(theory::Mode label) const { return label == theory::Mode::major ? minor : major; }
    /// The other member of the {major, minor} timbre pair.
    Waveshape other(Waveshape t) const { return t == major ? minor : major; }
};

enum class ShiftKind : std::uint8_t { domain_shift, selection_bias };
std::string_view shift_kind_name(ShiftKind k);

inline constexpr std::uint64_t kDefaultShiftSeed = 0x5eedULL;
inline constexpr int kDomainShiftLevels = 12;

struct ShiftConfig {
    ShiftKind kind = ShiftKind::selection_bias;
    std::vector<std::uint64_t> domain_schedule;  // empty: default_domain_schedule(train size)
    double bias_level = 0.0;
    BiasMap bias_map;
    std::uint64_t shift_seed = kDefaultShiftSeed;
};

/// {0, 2, 8, 32, 128, 512, 1024, 2048, 4096, 8192, 16384, 20000} for 40,000
/// training records; for other sizes every entry is capped at train_size / 2
/// and the last entry is train_size / 2.
std::vector<std::uint64_t> default_domain_schedule(std::uint64_t train_size);

/// Throws unless the schedule has 12 entries, starts at 0, is nondecreasing
/// and ends at train_size / 2.
void validate_domain_schedule(const std::vector<std::uint64_t>& schedule, std::uint64_t train_size);

/// True for p in {0.0, 0.1, ..., 1.0}.
bool is_bias_grid_level(double p);

/// The sine training set with the first schedule[level] seeds of a seeded
/// shuffle replaced by their square twins (role domain_replaced).
DatasetManifest build_domain_shift(int level, const std::vector<std::uint64_t>& schedule,
                                   const DatasetManifest& sine, const DatasetManifest& square,
                                   std::uint64_t shift_seed = kDefaultShiftSeed);

/// Timbre assignment over `pool` (one record per seed, any timbre). A quota of
/// round(p * n) records, split evenly across labels, is biased: after a seeded
/// shuffle within each label, the first records of the quota take the
/// aligned (or, if `reverted`, the reverted) timbre. The remainder alternates
/// between the map's two timbres and keeps role clean.
std::vector<SampleRecord> assign_timbres(const std::vector<SampleRecord>& pool, double p, const BiasMap& map,
                                         bool reverted, std::uint64_t shift_seed, std::uint64_t stream);

/// Training manifest at bias level p drawn from the sine/square train splits.
DatasetManifest build_selection_bias(double p, const DatasetManifest& sine, const DatasetManifest& square,
                                     const BiasMap& map = {}, std::uint64_t shift_seed = kDefaultShiftSeed);

enum class TestSuiteKind : std::uint8_t { in_distribution, neutral, anti_bias, square_domain, unseen_timbre };
std::string_view test_suite_name(TestSuiteKind k);

struct TestSuite {
    TestSuiteKind kind = TestSuiteKind::in_distribution;
    DatasetManifest manifest;
};

struct BiasTestSuites {
    TestSuite in_distribution;
    TestSuite neutral;
    TestSuite anti_bias;
};

/// In-distribution applies the training rule at p, neutral the rule at 0,
/// anti-bias the reverted map at p; all over the test split. All three use
/// the same shuffle, so in_distribution at p = 0 equals neutral.
BiasTestSuites build_test_suites(double p, const DatasetManifest& sine, const DatasetManifest& square,
                                 const BiasMap& map = {}, std::uint64_t shift_seed = kDefaultShiftSeed);

/// The square test split, for evaluating domain-shift models.
TestSuite build_square_domain_suite(const DatasetManifest& square);

/// Union of the sawtooth and triangle test splits, ordered by (seed, timbre).
TestSuite build_unseen_timbre_suite(const DatasetManifest& sawtooth, const DatasetManifest& triangle);

struct CompositionStats {
    std::uint64_t total = 0;
    std::uint64_t major = 0;
    std::map<Waveshape, std::uint64_t> timbre_major;
    std::map<Waveshape, std::uint64_t> timbre_minor;
    std::map<ShiftRole, std::uint64_t> roles;

    double p_major() const;
    /// P(timbre | label).
    double p_timbre_given(Waveshape t, theory::Mode label) const;
    /// Point-biserial (Pearson) correlation between [timbre == t] and
    /// [label == major]; 0 when either indicator is constant.
    double correlation(Waveshape t) const;
};

CompositionStats summarize(const std::vector<SampleRecord>& records);

}  // namespace melodyforge
