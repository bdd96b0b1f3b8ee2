#include "melodyforge/shiftlab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "melodyforge/rng.hpp"

namespace melodyforge {
namespace {

// Stream ids keep the shuffles of different constructions independent.
constexpr std::uint64_t kDomainStream = 1;
constexpr std::uint64_t kTrainBiasStream = 2;
constexpr std::uint64_t kTestBiasStream = 3;

std::vector<SampleRecord> split_records(const DatasetManifest& m, Split split, Waveshape expected) {
    std::vector<SampleRecord> out;
    for (const auto& r : m.records) {
        if (r.split != split) continue;
        if (r.timbre != expected) {
            throw std::invalid_argument("manifest for " + std::string(waveshape_name(expected)) + " contains a " +
                                        std::string(waveshape_name(r.timbre)) + " record");
        }
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
    return out;
}

void require_twins(const std::vector<SampleRecord>& a, const std::vector<SampleRecord>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("timbre manifests differ in size");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].seed != b[i].seed || a[i].chords != b[i].chords || a[i].key != b[i].key) {
            throw std::invalid_argument("timbre manifests disagree at seed " + std::to_string(a[i].seed));
        }
    }
}

void require_grid(double p) {
    if (!is_bias_grid_level(p)) throw std::invalid_argument("bias level must be one of 0.0, 0.1, ..., 1.0");
}

DatasetManifest shift_manifest(std::vector<SampleRecord> records, std::string_view dataset) {
    DatasetManifest m;
    m.header.set("dataset", std::string(dataset));
    m.records = std::move(records);
    return m;
}

}  // namespace

theory::Mode label_for_seed(std::uint64_t seed) { return seed % 2 == 0 ? theory::Mode::major : theory::Mode::minor; }

BaseDatasetConfig BaseDatasetConfig::scaled_down(std::uint64_t factor) {
    if (factor == 0) throw std::invalid_argument("scale factor must be positive");
    BaseDatasetConfig c;
    c.train_size = 40'000 / factor;
    c.val_size = 10'000 / factor;
    c.train_val = {0, c.train_size + c.val_size - 1};
    const std::uint64_t test_first = 55'000 / factor;
    c.test = {test_first, test_first + 10'000 / factor - 1};
    return c;
}

void BaseDatasetConfig::validate() const {
    gen.validate();
    if (train_val.last < train_val.first || test.last < test.first) throw std::invalid_argument("empty seed range");
    if (train_size + val_size != train_val.size()) {
        throw std::invalid_argument("train_size + val_size must equal the train/val seed range size");
    }
    if (train_size == 0) throw std::invalid_argument("training split is empty");
    if (train_val.overlaps(test)) throw std::invalid_argument("train/val and test seed ranges overlap");
    if (timbres.empty()) throw std::invalid_argument("no timbres requested");
}

SeedRange BaseDatasetConfig::seeds_for(Split split) const {
    switch (split) {
        case Split::train: return train_seeds();
        case Split::val: return val_seeds();
        case Split::test: return test;
    }
    return test;
}

std::vector<SampleRecord> build_records(const BaseDatasetConfig& config, Split split, std::uint64_t count,
                                        Waveshape timbre) {
    const SeedRange range = config.seeds_for(split);
    if (split == Split::val && config.val_size == 0) return {};
    const std::uint64_t n = std::min<std::uint64_t>(count, range.size());
    std::vector<SampleRecord> out;
    out.reserve(n);
    for (std::uint64_t s = range.first; s < range.first + n; ++s) {
        const auto spec = generate_melody(s, label_for_seed(s), config.gen);
        out.push_back(SampleRecord::from_spec(spec, timbre, config.amplitude, split));
    }
    return out;
}

std::map<Waveshape, DatasetManifest> build_base_dataset(const BaseDatasetConfig& config) {
    config.validate();
    std::map<Waveshape, DatasetManifest> out;
    for (auto t : config.timbres) out[t].header.set("dataset", "base/" + std::string(waveshape_name(t)));

    for (auto split : {Split::train, Split::val, Split::test}) {
        if (split == Split::val && config.val_size == 0) continue;
        const SeedRange range = config.seeds_for(split);
        for (std::uint64_t s = range.first; s <= range.last; ++s) {
            const auto spec = generate_melody(s, label_for_seed(s), config.gen);
            for (auto t : config.timbres) {
                out[t].records.push_back(SampleRecord::from_spec(spec, t, config.amplitude, split));
            }
        }
    }
    return out;
}

std::string_view shift_kind_name(ShiftKind k) {
    return k == ShiftKind::domain_shift ? "domain_shift" : "selection_bias";
}

std::vector<std::uint64_t> default_domain_schedule(std::uint64_t train_size) {
    static constexpr std::uint64_t kFull[] = {0, 2, 8, 32, 128, 512, 1'024, 2'048, 4'096, 8'192, 16'384, 20'000};
    const std::uint64_t half = train_size / 2;
    std::vector<std::uint64_t> out;
    for (auto c : kFull) out.push_back(std::min(c, half));
    out.back() = half;
    return out;
}

void validate_domain_schedule(const std::vector<std::uint64_t>& schedule, std::uint64_t train_size) {
    if (schedule.size() != static_cast<std::size_t>(kDomainShiftLevels)) {
        throw std::invalid_argument("domain-shift schedule needs 12 levels");
    }
    if (schedule.front() != 0) throw std::invalid_argument("domain-shift schedule must start at 0");
    if (!std::is_sorted(schedule.begin(), schedule.end())) {
        throw std::invalid_argument("domain-shift schedule must be nondecreasing");
    }
    if (schedule.back() > train_size / 2) {
        throw std::invalid_argument("domain-shift count exceeds half the training set");
    }
    if (schedule.back() != train_size / 2) {
        throw std::invalid_argument("domain-shift schedule must end at half the training set");
    }
}

bool is_bias_grid_level(double p) {
    const double tenths = p * 10.0;
    return p >= 0.0 && p <= 1.0 && std::abs(tenths - std::round(tenths)) < 1e-9;
}

DatasetManifest build_domain_shift(int level, const std::vector<std::uint64_t>& schedule,
                                   const DatasetManifest& sine, const DatasetManifest& square,
                                   std::uint64_t shift_seed) {
    const auto sine_train = split_records(sine, Split::train, Waveshape::sine);
    const auto square_train = split_records(square, Split::train, Waveshape::square);
    require_twins(sine_train, square_train);
    validate_domain_schedule(schedule, sine_train.size());
    if (level < 0 || level >= kDomainShiftLevels) throw std::invalid_argument("domain-shift level must be 0-11");

    std::vector<std::size_t> order(sine_train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(shift_seed, kDomainStream);
    rng.shuffle(std::span(order));

    std::vector<SampleRecord> out = sine_train;
    for (std::uint64_t k = 0; k < schedule[static_cast<std::size_t>(level)]; ++k) {
        const std::size_t i = order[k];
        out[i] = square_train[i];
        out[i].role = ShiftRole::domain_replaced;
    }
    return shift_manifest(std::move(out), "domain_shift/level-" + std::to_string(level));
}

std::vector<SampleRecord> assign_timbres(const std::vector<SampleRecord>& pool, double p, const BiasMap& map,
                                         bool reverted, std::uint64_t shift_seed, std::uint64_t stream) {
    require_grid(p);
    std::vector<std::size_t> major_idx;
    std::vector<std::size_t> minor_idx;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        (pool[i].label == theory::Mode::major ? major_idx : minor_idx).push_back(i);
    }
    const auto biased_total = static_cast<std::uint64_t>(std::llround(p * static_cast<double>(pool.size())));
    // Split the biased quota across labels, major taking the odd one.
    std::uint64_t biased_major = std::min<std::uint64_t>(biased_total - biased_total / 2, major_idx.size());
    std::uint64_t biased_minor = std::min<std::uint64_t>(biased_total - biased_major, minor_idx.size());
    biased_major = std::min<std::uint64_t>(biased_total - biased_minor, major_idx.size());

    std::vector<SampleRecord> out = pool;
    Rng rng(shift_seed, stream);
    const auto assign = [&](std::vector<std::size_t>& idx, std::uint64_t biased, theory::Mode label) {
        rng.shuffle(std::span(idx));
        const Waveshape bias_timbre = reverted ? map.reverted(label) : map.aligned(label);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            SampleRecord& r = out[idx[k]];
            if (k < biased) {
                r = r.with_timbre(bias_timbre);
                r.role = reverted ? ShiftRole::bias_reverted : ShiftRole::bias_aligned;
            } else {
                // Alternation after the shuffle is a balanced fair coin.
                const bool first = (k - biased) % 2 == 0;
                r = r.with_timbre(first ? map.major : map.minor);
                r.role = ShiftRole::clean;
            }
        }
    };
    assign(major_idx, biased_major, theory::Mode::major);
    assign(minor_idx, biased_minor, theory::Mode::minor);
    return out;
}

DatasetManifest build_selection_bias(double p, const DatasetManifest& sine, const DatasetManifest& square,
                                     const BiasMap& map, std::uint64_t shift_seed) {
    require_grid(p);
    const auto a = split_records(sine, Split::train, Waveshape::sine);
    const auto b = split_records(square, Split::train, Waveshape::square);
    require_twins(a, b);
    return shift_manifest(assign_timbres(a, p, map, false, shift_seed, kTrainBiasStream),
                          "selection_bias/p-" + format_double(p) + "/train");
}

std::string_view test_suite_name(TestSuiteKind k) {
    switch (k) {
        case TestSuiteKind::in_distribution: return "in_distribution";
        case TestSuiteKind::neutral: return "neutral";
        case TestSuiteKind::anti_bias: return "anti_bias";
        case TestSuiteKind::square_domain: return "square_domain";
        case TestSuiteKind::unseen_timbre: return "unseen_timbre";
    }
    return "?";
}

BiasTestSuites build_test_suites(double p, const DatasetManifest& sine, const DatasetManifest& square,
                                 const BiasMap& map, std::uint64_t shift_seed) {
    require_grid(p);
    const auto a = split_records(sine, Split::test, Waveshape::sine);
    const auto b = split_records(square, Split::test, Waveshape::square);
    require_twins(a, b);
    const std::string prefix = "selection_bias/p-" + format_double(p) + "/";
    BiasTestSuites s;
    s.in_distribution = {TestSuiteKind::in_distribution,
                         shift_manifest(assign_timbres(a, p, map, false, shift_seed, kTestBiasStream),
                                        prefix + "in_distribution")};
    s.neutral = {TestSuiteKind::neutral,
                 shift_manifest(assign_timbres(a, 0.0, map, false, shift_seed, kTestBiasStream), prefix + "neutral")};
    s.anti_bias = {TestSuiteKind::anti_bias,
                   shift_manifest(assign_timbres(a, p, map, true, shift_seed, kTestBiasStream), prefix + "anti_bias")};
    return s;
}

TestSuite build_square_domain_suite(const DatasetManifest& square) {
    return {TestSuiteKind::square_domain,
            shift_manifest(split_records(square, Split::test, Waveshape::square), "domain_shift/square_test")};
}

TestSuite build_unseen_timbre_suite(const DatasetManifest& sawtooth, const DatasetManifest& triangle) {
    auto records = split_records(sawtooth, Split::test, Waveshape::sawtooth);
    auto tri = split_records(triangle, Split::test, Waveshape::triangle);
    require_twins(records, tri);
    records.insert(records.end(), tri.begin(), tri.end());
    std::stable_sort(records.begin(), records.end(), [](const auto& x, const auto& y) {
        return x.seed != y.seed ? x.seed < y.seed : x.timbre < y.timbre;
    });
    return {TestSuiteKind::unseen_timbre, shift_manifest(std::move(records), "unseen_timbre")};
}

double CompositionStats::p_major() const { return total == 0 ? 0.0 : static_cast<double>(major) / total; }

double CompositionStats::p_timbre_given(Waveshape t, theory::Mode label) const {
    const auto& table = label == theory::Mode::major ? timbre_major : timbre_minor;
    const std::uint64_t denom = label == theory::Mode::major ? major : total - major;
    const auto it = table.find(t);
    if (denom == 0 || it == table.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(denom);
}

double CompositionStats::correlation(Waveshape t) const {
    if (total == 0) return 0.0;
    const auto get = [](const std::map<Waveshape, std::uint64_t>& m, Waveshape w) {
        const auto it = m.find(w);
        return it == m.end() ? std::uint64_t{0} : it->second;
    };
    const double n = static_cast<double>(total);
    const double n_t = static_cast<double>(get(timbre_major, t) + get(timbre_minor, t));
    const double n_major = static_cast<double>(major);
    const double n_both = static_cast<double>(get(timbre_major, t));
    const double cov = n_both / n - (n_t / n) * (n_major / n);
    const double var_t = (n_t / n) * (1.0 - n_t / n);
    const double var_y = (n_major / n) * (1.0 - n_major / n);
    if (var_t <= 0.0 || var_y <= 0.0) return 0.0;
    return cov / std::sqrt(var_t * var_y);
}

CompositionStats summarize(const std::vector<SampleRecord>& records) {
    CompositionStats s;
    for (const auto& r : records) {
        ++s.total;
        ++s.roles[r.role];
        if (r.label == theory::Mode::major) {
            ++s.major;
            ++s.timbre_major[r.timbre];
        } else {
            ++s.timbre_minor[r.timbre];
        }
    }
    return s;
}

}  // namespace melodyforge
