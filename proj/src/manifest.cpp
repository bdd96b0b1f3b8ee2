#include "melodyforge/manifest.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "melodyforge/wav.hpp"

namespace melodyforge {
namespace {

constexpr std::string_view kColumns =
    "seed\tlabel\ttonic\tmode\ttimbre\tamplitude\tsplit\tshift_role\tselected\trepeats\tpath\tchords";
constexpr std::size_t kColumnCount = 12;

std::vector<std::string_view> split_on(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

template <typename T>
T parse_int(std::string_view text, std::string_view what) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

std::string format_chords(const std::vector<ChordEvent>& chords) {
    std::string out;
    for (std::size_t i = 0; i < chords.size(); ++i) {
        if (i > 0) out += ';';
        out += chords[i].symbol.name();
        out += ':';
        for (std::size_t j = 0; j < chords[i].frequencies.size(); ++j) {
            if (j > 0) out += ',';
            out += format_double(chords[i].frequencies[j]);
        }
        out += '@';
        out += format_double(chords[i].duration);
    }
    return out;
}

std::vector<ChordEvent> parse_chords(std::string_view text) {
    std::vector<ChordEvent> chords;
    if (text.empty()) return chords;
    for (auto item : split_on(text, ';')) {
        const auto colon = item.find(':');
        const auto at = item.rfind('@');
        if (colon == std::string_view::npos || at == std::string_view::npos || at < colon) {
            throw std::invalid_argument("bad chord entry '" + std::string(item) + "'");
        }
        ChordEvent ev;
        ev.symbol = theory::ChordSymbol::parse(item.substr(0, colon));
        for (auto f : split_on(item.substr(colon + 1, at - colon - 1), ',')) ev.frequencies.push_back(parse_double(f));
        ev.duration = parse_double(item.substr(at + 1));
        chords.push_back(std::move(ev));
    }
    return chords;
}

std::string format_row(const SampleRecord& r) {
    std::string row;
    row += std::to_string(r.seed);
    for (std::string_view field :
         {theory::mode_name(r.label), r.key.tonic.name(), theory::mode_name(r.key.mode), waveshape_name(r.timbre),
          amplitude_profile_name(r.amplitude), split_name(r.split), shift_role_name(r.role)}) {
        row += '\t';
        row += field;
    }
    row += '\t';
    row += r.selected ? '1' : '0';
    row += '\t';
    row += std::to_string(r.repeats);
    row += '\t';
    row += r.wav_path;
    row += '\t';
    row += format_chords(r.chords);
    return row;
}

SampleRecord parse_row(std::string_view line) {
    const auto f = split_on(line, '\t');
    if (f.size() != kColumnCount) {
        throw std::invalid_argument("expected " + std::to_string(kColumnCount) + " columns, found " +
                                    std::to_string(f.size()));
    }
    SampleRecord r;
    r.seed = parse_int<std::uint64_t>(f[0], "seed");
    r.label = theory::parse_mode(f[1]);
    r.key.tonic = theory::PitchClass::parse(f[2]);
    r.key.mode = theory::parse_mode(f[3]);
    r.timbre = parse_waveshape(f[4]);
    r.amplitude = parse_amplitude_profile(f[5]);
    r.split = parse_split(f[6]);
    r.role = parse_shift_role(f[7]);
    if (f[8] != "0" && f[8] != "1") throw std::invalid_argument("selected must be 0 or 1");
    r.selected = f[8] == "1";
    r.repeats = parse_int<int>(f[9], "repeats");
    r.wav_path = std::string(f[10]);
    r.chords = parse_chords(f[11]);
    return r;
}

void check_row(const SampleRecord& r) {
    if (r.wav_path.empty() || r.wav_path.front() == '/' || r.wav_path.find("..") != std::string::npos ||
        r.wav_path.find('\t') != std::string::npos) {
        throw std::invalid_argument("path '" + r.wav_path + "' does not resolve inside the dataset root");
    }
}

}  // namespace

void ManifestHeader::set(std::string key, std::string value) {
    if (key.empty() || key.find_first_of("=\n\t") != std::string::npos || value.find('\n') != std::string::npos) {
        throw std::invalid_argument("bad manifest header field '" + key + "'");
    }
    for (auto& [k, v] : fields_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    fields_.emplace_back(std::move(key), std::move(value));
}

std::optional<std::string> ManifestHeader::get(std::string_view key) const {
    for (const auto& [k, v] : fields_)
        if (k == key) return v;
    return std::nullopt;
}

std::string ManifestHeader::require(std::string_view key) const {
    auto v = get(key);
    if (!v) throw ManifestError(ManifestErrorKind::parse, 0, "header field '" + std::string(key) + "' missing");
    return *v;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format double");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad number '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    return out;
}

std::string format_manifest(const DatasetManifest& m) {
    std::string out;
    out += kManifestMagic;
    out += ' ';
    out += std::to_string(kManifestVersion);
    out += '\n';
    for (const auto& [k, v] : m.header.fields()) {
        out += '#';
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    out += kColumns;
    out += '\n';
    std::set<std::tuple<std::uint64_t, Waveshape, Split>> seen;
    for (std::size_t i = 0; i < m.records.size(); ++i) {
        const auto& r = m.records[i];
        check_row(r);
        if (!seen.emplace(r.seed, r.timbre, r.split).second) {
            throw ManifestError(ManifestErrorKind::duplicate_key, 0,
                                "duplicate (seed, timbre, split) in record " + std::to_string(i + 1));
        }
        out += format_row(r);
        out += '\n';
    }
    return out;
}

DatasetManifest parse_manifest(std::string_view text) {
    DatasetManifest m;
    std::size_t line_no = 0;
    bool columns_seen = false;
    std::set<std::tuple<std::uint64_t, Waveshape, Split>> seen;

    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (line_no == 1) {
            const std::string expected = std::string(kManifestMagic) + " " + std::to_string(kManifestVersion);
            if (line.substr(0, kManifestMagic.size()) != kManifestMagic) {
                throw ManifestError(ManifestErrorKind::parse, line_no, "not a melodyforge manifest");
            }
            if (line != expected) {
                throw ManifestError(ManifestErrorKind::version_mismatch, line_no,
                                    "schema version '" + std::string(line.substr(kManifestMagic.size())) +
                                        "' is not supported (expected " + std::to_string(kManifestVersion) + ")");
            }
            continue;
        }
        if (line.empty()) continue;
        if (!columns_seen && line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ManifestError(ManifestErrorKind::parse, line_no, "header line without '='");
            m.header.set(std::string(line.substr(1, eq - 1)), std::string(line.substr(eq + 1)));
            continue;
        }
        if (!columns_seen) {
            if (line != kColumns) throw ManifestError(ManifestErrorKind::parse, line_no, "unexpected column line");
            columns_seen = true;
            continue;
        }
        SampleRecord r;
        try {
            r = parse_row(line);
            check_row(r);
        } catch (const std::invalid_argument& e) {
            throw ManifestError(ManifestErrorKind::parse, line_no, e.what());
        }
        if (!seen.emplace(r.seed, r.timbre, r.split).second) {
            throw ManifestError(ManifestErrorKind::duplicate_key, line_no,
                                "duplicate (seed, timbre, split) = (" + std::to_string(r.seed) + ", " +
                                    std::string(waveshape_name(r.timbre)) + ", " + std::string(split_name(r.split)) +
                                    ")");
        }
        m.records.push_back(std::move(r));
    }
    if (line_no == 0) throw ManifestError(ManifestErrorKind::parse, 0, "empty manifest");
    if (!columns_seen) throw ManifestError(ManifestErrorKind::parse, line_no, "column line missing");
    return m;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    const std::string text = format_manifest(manifest);
    try {
        write_file_if_changed(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    } catch (const WavError& e) {
        throw ManifestError(ManifestErrorKind::io, 0, e.what());
    }
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError(ManifestErrorKind::io, 0, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_manifest(buf.str());
    } catch (const ManifestError& e) {
        throw ManifestError(e.kind(), e.line(), e.detail(), path.string());
    }
}

std::string manifest_digest(const DatasetManifest& manifest) { return hex64(fnv1a64(format_manifest(manifest))); }

}  // namespace melodyforge
