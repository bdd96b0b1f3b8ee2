#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "melodyforge/config.hpp"
#include "melodyforge/dataset.hpp"
#include "melodyforge/manifest.hpp"
#include "melodyforge/shiftlab.hpp"
#include "melodyforge/verifier.hpp"
#include "melodyforge/wav.hpp"

namespace melodyforge::cli {
namespace fs = std::filesystem;

namespace {

struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw Failure{code, message}; }

struct CommonOptions {
    std::string root;
    std::string config_file;
    std::uint64_t scale_down = 1;
    int workers = 1;
    int verbosity = 1;
};

struct GenerateOptions {
    std::vector<std::string> timbres;
    std::vector<std::string> splits;
    std::optional<std::uint64_t> count;
    std::optional<double> bias_level;
};

struct ShiftOptions {
    int level = -1;
    double p = -1.0;
    std::string schedule;
    std::optional<std::uint64_t> shift_seed;
};

struct VerifyOptions {
    std::vector<std::string> manifests;
    std::uint64_t spectral_sample = 100;
    bool rerender = false;
    std::string report_file;
};

ToolkitConfig resolve_config(const CommonOptions& o) {
    ToolkitConfig cfg;
    if (o.scale_down > 1) cfg.base = BaseDatasetConfig::scaled_down(o.scale_down);
    if (!o.config_file.empty()) cfg = load_config(o.config_file, cfg);
    cfg.validate();
    return cfg;
}

ToolkitConfig config_from_header(const ManifestHeader& header) {
    std::string text;
    for (const auto& [k, v] : header.fields()) {
        if (k.rfind("config.", 0) == 0) text += k.substr(7) + " = " + v + "\n";
    }
    return parse_config(text);
}

std::string fixed(double v, int digits = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

fs::path require_root(const CommonOptions& o) {
    if (o.root.empty()) fail(kUsage, "--root is required");
    return fs::path(o.root);
}

void write_manifest_or_fail(const DatasetManifest& m, const fs::path& path) {
    try {
        write_manifest(m, path);
    } catch (const ManifestError& e) {
        fail(kIoError, e.what());
    }
}

/// All splits of one timbre found under root, merged; nullopt if none exist.
std::optional<DatasetManifest> load_base(const fs::path& root, Waveshape timbre) {
    std::optional<DatasetManifest> merged;
    for (auto split : {Split::train, Split::val, Split::test}) {
        const auto path = base_manifest_path(root, std::string(waveshape_name(timbre)), std::string(split_name(split)));
        if (!fs::exists(path)) continue;
        auto m = read_manifest(path);
        if (!merged) {
            merged = std::move(m);
        } else {
            merged->records.insert(merged->records.end(), m.records.begin(), m.records.end());
        }
    }
    return merged;
}

DatasetManifest require_base(const fs::path& root, Waveshape timbre, Split split) {
    auto m = load_base(root, timbre);
    const bool has_split = m && std::any_of(m->records.begin(), m->records.end(),
                                            [&](const SampleRecord& r) { return r.split == split; });
    if (!has_split) {
        fail(kMissingInput, "base dataset missing: " +
                                base_manifest_path(root, std::string(waveshape_name(timbre)), std::string(split_name(split)))
                                    .string() +
                                " (run `generate` first)");
    }
    return *m;
}

void report_progress(std::ostream& err, int verbosity, std::size_t done, std::size_t total) {
    if (verbosity < 1 || total == 0) return;
    const std::size_t step = std::max<std::size_t>(total / 10, 1);
    if (done % step == 0 || done == total) err << "  rendered " << done << "/" << total << "\n";
}

void materialize_or_fail(const std::vector<SampleRecord>& records, const fs::path& root, const ToolkitConfig& cfg,
                         const CommonOptions& o, std::ostream& out, std::ostream& err) {
    const auto stats = materialize(records, root, cfg, o.workers,
                                   [&](std::size_t d, std::size_t t) { report_progress(err, o.verbosity, d, t); });
    out << "  " << stats.written << " written, " << stats.unchanged << " unchanged, " << stats.bytes_written
        << " bytes\n";
    if (!stats.failures.empty()) {
        for (const auto& f : stats.failures) err << "error: " << f << "\n";
        fail(kIoError, std::to_string(stats.failures.size()) + " file(s) could not be written");
    }
}

int cmd_generate(const CommonOptions& o, const GenerateOptions& g, std::ostream& out, std::ostream& err) {
    const fs::path root = require_root(o);
    ToolkitConfig cfg = resolve_config(o);

    std::vector<Split> splits;
    for (const auto& s : g.splits) splits.push_back(parse_split(s));
    // A biased sample draws from the training split unless told otherwise.
    if (splits.empty() && g.bias_level) splits = {Split::train};
    if (splits.empty()) splits = {Split::train, Split::val, Split::test};
    std::vector<Waveshape> timbres;
    for (const auto& t : g.timbres) timbres.push_back(parse_waveshape(t));
    if (timbres.empty()) timbres = cfg.base.timbres;

    if (g.bias_level) {
        const double p = *g.bias_level;
        if (!is_bias_grid_level(p)) fail(kInvalidShift, "--bias-level must be one of 0.0, 0.1, ..., 1.0");
        cfg.shift.bias_level = p;
        std::vector<SampleRecord> pool;
        for (auto split : splits) {
            auto part = build_records(cfg.base, split, g.count.value_or(UINT64_MAX), cfg.shift.bias_map.major);
            pool.insert(pool.end(), part.begin(), part.end());
        }
        DatasetManifest m;
        m.header.set("dataset", "biased/p-" + format_double(p));
        stamp_header(m.header, cfg);
        m.header.set("shift.kind", "selection_bias");
        m.header.set("shift.p", format_double(p));
        m.records = assign_timbres(pool, p, cfg.shift.bias_map, false, cfg.shift.shift_seed, 0);
        out << "generate biased p=" << format_double(p) << ": " << m.records.size() << " samples\n";
        materialize_or_fail(m.records, root, cfg, o, out, err);
        const auto path = root / ("biased-p" + format_double(p)) / "manifest.tsv";
        write_manifest_or_fail(m, path);
        const auto stats = summarize(m.records);
        out << "  P(" << waveshape_name(cfg.shift.bias_map.major) << " | major) = "
            << fixed(stats.p_timbre_given(cfg.shift.bias_map.major, theory::Mode::major)) << ", P("
            << waveshape_name(cfg.shift.bias_map.minor) << " | minor) = "
            << fixed(stats.p_timbre_given(cfg.shift.bias_map.minor, theory::Mode::minor)) << "\n";
        out << "  manifest " << path.string() << "\n";
        return kOk;
    }

    for (auto timbre : timbres) {
        for (auto split : splits) {
            DatasetManifest m;
            m.header.set("dataset", "base/" + std::string(waveshape_name(timbre)) + "/" + std::string(split_name(split)));
            stamp_header(m.header, cfg);
            m.header.set("shift.kind", "none");
            m.records = build_records(cfg.base, split, g.count.value_or(UINT64_MAX), timbre);
            out << "generate " << waveshape_name(timbre) << "/" << split_name(split) << ": " << m.records.size()
                << " samples\n";
            materialize_or_fail(m.records, root, cfg, o, out, err);
            write_manifest_or_fail(m, base_manifest_path(root, std::string(waveshape_name(timbre)),
                                                         std::string(split_name(split))));
        }
    }
    return kOk;
}

void print_summary_header(std::ostream& out, const BiasMap& map) {
    out << "suite\trecords\tP(major)\tP(" << waveshape_name(map.major) << "|major)\tP(" << waveshape_name(map.major)
        << "|minor)\tcorr(" << waveshape_name(map.major) << ",major)\troles\n";
}

void print_summary_row(std::ostream& out, const std::string& name, const DatasetManifest& m, const BiasMap& map) {
    const auto s = summarize(m.records);
    out << name << '\t' << s.total << '\t' << fixed(s.p_major()) << '\t'
        << fixed(s.p_timbre_given(map.major, theory::Mode::major)) << '\t'
        << fixed(s.p_timbre_given(map.major, theory::Mode::minor)) << '\t' << fixed(s.correlation(map.major)) << '\t';
    bool first = true;
    for (const auto& [role, count] : s.roles) {
        out << (first ? "" : ",") << shift_role_name(role) << "=" << count;
        first = false;
    }
    out << '\n';
}

std::vector<std::uint64_t> parse_schedule(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoull(item));
        } catch (const std::exception&) {
            fail(kUsage, "bad --schedule entry '" + item + "'");
        }
    }
    return out;
}

DatasetManifest finish_shift_manifest(DatasetManifest m, const ToolkitConfig& cfg, ShiftKind kind,
                                      const std::string& level_key, const std::string& level) {
    ManifestHeader header;
    header.set("dataset", m.header.get("dataset").value_or(""));
    stamp_header(header, cfg);
    header.set("shift.kind", std::string(shift_kind_name(kind)));
    header.set(level_key, level);
    if (kind == ShiftKind::domain_shift) {
        std::string sched;
        for (auto c : cfg.domain_schedule()) sched += (sched.empty() ? "" : ",") + std::to_string(c);
        header.set("shift.schedule", sched);
    }
    header.set("shift.seed", std::to_string(cfg.shift.shift_seed));
    m.header = std::move(header);
    return m;
}

int cmd_shift_domain(const CommonOptions& o, const ShiftOptions& s, std::ostream& out) {
    const fs::path root = require_root(o);
    const auto sine = require_base(root, Waveshape::sine, Split::train);
    const auto square = require_base(root, Waveshape::square, Split::train);
    ToolkitConfig cfg = config_from_header(sine.header);
    if (!o.config_file.empty()) cfg = load_config(o.config_file, cfg);
    if (!s.schedule.empty()) cfg.shift.domain_schedule = parse_schedule(s.schedule);
    if (s.shift_seed) cfg.shift.shift_seed = *s.shift_seed;
    cfg.shift.kind = ShiftKind::domain_shift;

    if (s.level < 0 || s.level >= kDomainShiftLevels) fail(kInvalidShift, "--level must be 0-11");
    const auto train_count = static_cast<std::uint64_t>(std::count_if(
        sine.records.begin(), sine.records.end(), [](const SampleRecord& r) { return r.split == Split::train; }));
    try {
        validate_domain_schedule(cfg.domain_schedule(), train_count);
    } catch (const std::invalid_argument& e) {
        fail(kInvalidShift, e.what());
    }

    const auto dir = root / "shifts" / "domain" / ("level-" + std::to_string(s.level));
    auto train = finish_shift_manifest(
        build_domain_shift(s.level, cfg.domain_schedule(), sine, square, cfg.shift.shift_seed), cfg,
        ShiftKind::domain_shift, "shift.level", std::to_string(s.level));
    write_manifest_or_fail(train, dir / "train.tsv");

    out << "domain shift level " << s.level << " (schedule count "
        << cfg.domain_schedule()[static_cast<std::size_t>(s.level)] << ")\n";
    const auto stats = summarize(train.records);
    out << "suite\trecords\tsine\tsquare\tP(major)\n";
    const auto count_of = [&](Waveshape t) {
        const auto get = [&](const std::map<Waveshape, std::uint64_t>& m) {
            const auto it = m.find(t);
            return it == m.end() ? std::uint64_t{0} : it->second;
        };
        return get(stats.timbre_major) + get(stats.timbre_minor);
    };
    out << "train\t" << stats.total << '\t' << count_of(Waveshape::sine) << '\t' << count_of(Waveshape::square) << '\t'
        << fixed(stats.p_major()) << '\n';

    if (std::any_of(square.records.begin(), square.records.end(), [](const auto& r) { return r.split == Split::test; })) {
        auto suite = finish_shift_manifest(build_square_domain_suite(square).manifest, cfg, ShiftKind::domain_shift,
                                           "shift.level", std::to_string(s.level));
        write_manifest_or_fail(suite, dir / "square_domain.tsv");
        out << "square_domain\t" << suite.records.size() << "\t0\t" << suite.records.size() << '\t'
            << fixed(summarize(suite.records).p_major()) << '\n';
    }
    out << "manifests in " << dir.string() << "\n";
    return kOk;
}

int cmd_shift_bias(const CommonOptions& o, const ShiftOptions& s, std::ostream& out) {
    const fs::path root = require_root(o);
    if (!is_bias_grid_level(s.p)) fail(kInvalidShift, "--p must be one of 0.0, 0.1, ..., 1.0");
    const auto sine = require_base(root, Waveshape::sine, Split::train);
    const auto square = require_base(root, Waveshape::square, Split::train);
    ToolkitConfig cfg = config_from_header(sine.header);
    if (!o.config_file.empty()) cfg = load_config(o.config_file, cfg);
    if (s.shift_seed) cfg.shift.shift_seed = *s.shift_seed;
    cfg.shift.kind = ShiftKind::selection_bias;
    cfg.shift.bias_level = s.p;
    const auto& map = cfg.shift.bias_map;
    const std::string p_text = format_double(s.p);

    const auto dir = root / "shifts" / "selection-bias" / ("p-" + p_text);
    const auto emit = [&](DatasetManifest m, const std::string& name) {
        m = finish_shift_manifest(std::move(m), cfg, ShiftKind::selection_bias, "shift.p", p_text);
        write_manifest_or_fail(m, dir / (name + ".tsv"));
        print_summary_row(out, name, m, map);
    };

    out << "selection bias p=" << p_text << "\n";
    print_summary_header(out, map);
    emit(build_selection_bias(s.p, sine, square, map, cfg.shift.shift_seed), "train");

    const auto has_test = [](const DatasetManifest& m) {
        return std::any_of(m.records.begin(), m.records.end(), [](const auto& r) { return r.split == Split::test; });
    };
    if (has_test(sine) && has_test(square)) {
        auto suites = build_test_suites(s.p, sine, square, map, cfg.shift.shift_seed);
        emit(std::move(suites.in_distribution.manifest), "in_distribution");
        emit(std::move(suites.neutral.manifest), "neutral");
        emit(std::move(suites.anti_bias.manifest), "anti_bias");
    } else {
        out << "(no sine/square test split; test suites skipped)\n";
    }
    const auto saw = load_base(root, Waveshape::sawtooth);
    const auto tri = load_base(root, Waveshape::triangle);
    if (saw && tri && has_test(*saw) && has_test(*tri)) {
        emit(build_unseen_timbre_suite(*saw, *tri).manifest, "unseen_timbre");
    }
    out << "manifests in " << dir.string() << "\n";
    return kOk;
}

std::vector<fs::path> discover_manifests(const fs::path& root) {
    std::vector<fs::path> found;
    if (!fs::exists(root)) return found;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        const auto& p = entry.path();
        if (p.filename() == "manifest.tsv" || (p.extension() == ".tsv" && p.string().find("shifts") != std::string::npos)) {
            found.push_back(p);
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

int cmd_verify(const CommonOptions& o, const VerifyOptions& v, std::ostream& out, std::ostream& err) {
    const fs::path root = require_root(o);
    std::vector<fs::path> manifests;
    for (const auto& m : v.manifests) manifests.emplace_back(m);
    if (manifests.empty()) manifests = discover_manifests(root);
    if (manifests.empty()) fail(kMissingInput, "no manifests found under " + root.string());

    std::ostringstream verdicts;
    std::uint64_t symbolic_checked = 0;
    std::uint64_t symbolic_violations = 0;
    std::uint64_t file_failures = 0;
    AccuracyTable table;
    std::set<std::string> checked_files;

    for (const auto& path : manifests) {
        DatasetManifest m;
        try {
            m = read_manifest(path);
        } catch (const ManifestError& e) {
            err << "error: " << e.what() << "\n";
            ++file_failures;
            continue;
        }
        const ToolkitConfig cfg = config_from_header(m.header);
        if (o.verbosity > 0) out << "manifest " << path.string() << ": " << m.records.size() << " records\n";

        for (const auto& r : m.records) {
            ++symbolic_checked;
            const auto report = verify_symbolic(r.spec(), cfg.base.gen);
            if (!report.passed()) {
                ++symbolic_violations;
                for (const auto& msg : report.violations) verdicts << "SYMBOLIC-FAIL\t" << r.wav_path << '\t' << msg << '\n';
            }
            if (!r.selected) {
                ++symbolic_violations;
                verdicts << "SYMBOLIC-FAIL\t" << r.wav_path << "\trecord listed with selected=0\n";
            }
        }

        // File checks: every referenced WAV once per run.
        std::vector<const SampleRecord*> to_check;
        for (const auto& r : m.records)
            if (checked_files.insert(r.wav_path).second) to_check.push_back(&r);
        std::vector<std::string> problems(to_check.size());
        parallel_for(to_check.size(), o.workers, [&](std::size_t i) {
            const auto& r = *to_check[i];
            const auto wav = root / r.wav_path;
            try {
                const auto bytes = read_file_bytes(wav);
                const auto clip = decode_wav(bytes, cfg.render.sample_rate);
                if (clip.samples.size() != cfg.render.clip_samples()) {
                    problems[i] = "expected " + std::to_string(cfg.render.clip_samples()) + " samples, found " +
                                  std::to_string(clip.samples.size());
                } else if (v.rerender && encode_wav(render_record(r, cfg)) != bytes) {
                    problems[i] = "contents differ from a fresh render";
                }
            } catch (const std::exception& e) {
                problems[i] = e.what();
            }
        });
        for (std::size_t i = 0; i < to_check.size(); ++i) {
            if (problems[i].empty()) continue;
            ++file_failures;
            const auto wav = (root / to_check[i]->wav_path).string();
            err << "error: " << wav << ": " << problems[i] << "\n";
            verdicts << "FILE-FAIL\t" << to_check[i]->wav_path << '\t' << problems[i] << '\n';
        }

        // Spectral check on an evenly spaced subset.
        const std::uint64_t n = std::min<std::uint64_t>(v.spectral_sample, m.records.size());
        std::vector<const SampleRecord*> sample;
        for (std::uint64_t k = 0; k < n; ++k) sample.push_back(&m.records[k * m.records.size() / n]);
        std::vector<std::optional<KeyEstimate>> estimates(sample.size());
        parallel_for(sample.size(), o.workers, [&](std::size_t i) {
            try {
                estimates[i] = estimate_key(read_wav(root / sample[i]->wav_path, cfg.render.sample_rate));
            } catch (const std::exception&) {
            }
        });
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (!estimates[i]) continue;
            const auto& r = *sample[i];
            table.add(r.timbre, r.key, *estimates[i]);
            verdicts << (estimates[i]->key.mode == r.label ? "SPECTRAL-OK" : "SPECTRAL-MISS") << '\t' << r.wav_path
                     << "\tlabel=" << r.key.name() << "\testimate=" << estimates[i]->key.name() << '\n';
        }
    }

    if (!v.report_file.empty()) {
        std::ofstream rep(v.report_file);
        if (!rep) fail(kIoError, "cannot write report " + v.report_file);
        rep << verdicts.str() << "\n" << table.format();
    } else if (o.verbosity > 1) {
        out << verdicts.str();
    }
    out << symbolic_checked << " records checked, " << symbolic_violations << " symbolic violations, "
        << file_failures << " file failures\n";
    if (!table.rows.empty()) out << "spectral agreement\n" << table.format();
    return symbolic_violations == 0 && file_failures == 0 ? kOk : kVerificationFailed;
}

int cmd_inspect(const std::string& path, std::ostream& out) {
    DatasetManifest m;
    try {
        m = read_manifest(path);
    } catch (const ManifestError& e) {
        fail(e.kind() == ManifestErrorKind::io ? kMissingInput : kVerificationFailed, e.what());
    }
    out << "manifest " << path << "\n";
    for (const auto& [k, v] : m.header.fields()) out << "  " << k << " = " << v << "\n";
    out << "records: " << m.records.size() << "\n";
    std::map<std::string, std::uint64_t> groups;
    for (const auto& r : m.records) {
        groups[std::string(split_name(r.split)) + "\t" + std::string(waveshape_name(r.timbre)) + "\t" +
               std::string(theory::mode_name(r.label)) + "\t" + std::string(shift_role_name(r.role))]++;
    }
    out << "split\ttimbre\tlabel\trole\tcount\n";
    for (const auto& [k, c] : groups) out << k << '\t' << c << '\n';
    out << "digest: " << manifest_digest(m) << "\n";
    return kOk;
}

}  // namespace

fs::path base_manifest_path(const fs::path& root, const std::string& timbre, const std::string& split) {
    return root / timbre / split / "manifest.tsv";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"melodyforge: synthetic melody datasets with controlled timbre shifts", "melodyforge"};
    app.require_subcommand(1);

    CommonOptions common;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--root", common.root, "Dataset root directory");
        sub->add_option("--config", common.config_file, "Config file (key = value) or a manifest");
        sub->add_option("--scale-down", common.scale_down, "Divide every seed range and split size by this factor")
            ->check(CLI::PositiveNumber);
        sub->add_option("-j,--workers", common.workers, "Rendering threads")->check(CLI::PositiveNumber);
        sub->add_flag_function("-v,--verbose", [&](std::int64_t n) { common.verbosity = 1 + static_cast<int>(n); },
                               "More output");
        sub->add_flag_function("-q,--quiet", [&](std::int64_t) { common.verbosity = 0; }, "Less output");
    };

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Render base datasets (or a biased sample) to WAV + manifest");
    add_common(generate);
    generate->add_option("--timbre", gen.timbres, "sine, square, sawtooth, triangle (repeatable)");
    generate->add_option("--split", gen.splits, "train, val, test (repeatable)");
    generate->add_option("--count", gen.count, "Only the first N seeds of each split");
    generate->add_option("--bias-level", gen.bias_level, "Emit a selection-biased sine/square sample at this level");

    ShiftOptions shift_opts;
    auto* shift = app.add_subcommand("shift", "Build shifted training manifests and test suites");
    shift->require_subcommand(1);
    auto* domain = shift->add_subcommand("domain", "Domain shift: replace sine training samples by square twins");
    add_common(domain);
    domain->add_option("--level", shift_opts.level, "Shift level 0-11")->required();
    domain->add_option("--schedule", shift_opts.schedule, "12 comma-separated square counts");
    domain->add_option("--shift-seed", shift_opts.shift_seed, "Seed of the replacement order");
    auto* bias = shift->add_subcommand("selection-bias", "Selection bias: correlate timbre with label");
    add_common(bias);
    bias->add_option("--p", shift_opts.p, "Bias level 0.0-1.0 in steps of 0.1")->required();
    bias->add_option("--shift-seed", shift_opts.shift_seed, "Seed of the assignment shuffles");

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "Check manifests and audio against their labels");
    add_common(verify);
    verify->add_option("--manifest", verify_opts.manifests, "Manifest to check (repeatable; default: all under root)");
    verify->add_option("--spectral-sample", verify_opts.spectral_sample, "Clips per manifest for key estimation");
    verify->add_flag("--rerender", verify_opts.rerender, "Compare every WAV with a fresh render");
    verify->add_option("--report", verify_opts.report_file, "Write per-sample verdicts to this file");

    std::string inspect_path;
    auto* manifest = app.add_subcommand("manifest", "Manifest utilities");
    manifest->require_subcommand(1);
    auto* inspect = manifest->add_subcommand("inspect", "Print header and composition of a manifest");
    inspect->add_option("path", inspect_path, "Manifest file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(common, gen, out, err);
        if (domain->parsed()) return cmd_shift_domain(common, shift_opts, out);
        if (bias->parsed()) return cmd_shift_bias(common, shift_opts, out);
        if (verify->parsed()) return cmd_verify(common, verify_opts, out, err);
        if (inspect->parsed()) return cmd_inspect(inspect_path, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ManifestError& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ManifestErrorKind::io ? kMissingInput : kVerificationFailed;
    } catch (const WavError& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == WavErrorKind::io ? kIoError : kVerificationFailed;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}

}  // namespace melodyforge::cli
