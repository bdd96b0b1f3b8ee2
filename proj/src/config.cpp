#include "melodyforge/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace melodyforge {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T>
std::string join(const std::vector<T>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ',';
        if constexpr (std::is_same_v<T, Waveshape>) out += waveshape_name(items[i]);
        else out += std::to_string(items[i]);
    }
    return out;
}

std::uint64_t to_u64(std::string_view v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw std::invalid_argument("expected an integer");
    return out;
}

double to_double(std::string_view v) { return parse_double(v); }

using Setter = void (*)(ToolkitConfig&, std::string_view);

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"freq_min", [](ToolkitConfig& c, std::string_view v) { c.base.gen.freq_min = to_double(v); }},
        {"freq_max", [](ToolkitConfig& c, std::string_view v) { c.base.gen.freq_max = to_double(v); }},
        {"freq_tolerance", [](ToolkitConfig& c, std::string_view v) { c.base.gen.freq_tolerance = to_double(v); }},
        {"chord_counts",
         [](ToolkitConfig& c, std::string_view v) {
             c.base.gen.chord_counts.clear();
             for (auto item : split_list(v)) c.base.gen.chord_counts.push_back(static_cast<int>(to_u64(item)));
         }},
        {"duration_min", [](ToolkitConfig& c, std::string_view v) { c.base.gen.duration_min = to_double(v); }},
        {"duration_max", [](ToolkitConfig& c, std::string_view v) { c.base.gen.duration_max = to_double(v); }},
        {"target_seconds", [](ToolkitConfig& c, std::string_view v) { c.base.gen.target_seconds = to_double(v); }},
        {"train_val_first", [](ToolkitConfig& c, std::string_view v) { c.base.train_val.first = to_u64(v); }},
        {"train_val_last", [](ToolkitConfig& c, std::string_view v) { c.base.train_val.last = to_u64(v); }},
        {"train_size", [](ToolkitConfig& c, std::string_view v) { c.base.train_size = to_u64(v); }},
        {"val_size", [](ToolkitConfig& c, std::string_view v) { c.base.val_size = to_u64(v); }},
        {"test_first", [](ToolkitConfig& c, std::string_view v) { c.base.test.first = to_u64(v); }},
        {"test_last", [](ToolkitConfig& c, std::string_view v) { c.base.test.last = to_u64(v); }},
        {"timbres",
         [](ToolkitConfig& c, std::string_view v) {
             c.base.timbres.clear();
             for (auto item : split_list(v)) c.base.timbres.push_back(parse_waveshape(item));
         }},
        {"amplitude",
         [](ToolkitConfig& c, std::string_view v) {
             const auto p = parse_amplitude_profile(v);
             c.base.amplitude = p;
             if (p != AmplitudeProfile::custom) c.render.adsr = AdsrProfile::named(p);
             c.render.adsr.name = p;
         }},
        {"adsr_attack", [](ToolkitConfig& c, std::string_view v) { c.render.adsr.attack = to_double(v); }},
        {"adsr_decay", [](ToolkitConfig& c, std::string_view v) { c.render.adsr.decay = to_double(v); }},
        {"adsr_sustain", [](ToolkitConfig& c, std::string_view v) { c.render.adsr.sustain = to_double(v); }},
        {"adsr_release", [](ToolkitConfig& c, std::string_view v) { c.render.adsr.release = to_double(v); }},
        {"sample_rate", [](ToolkitConfig& c, std::string_view v) { c.render.sample_rate = static_cast<int>(to_u64(v)); }},
        {"clip_seconds", [](ToolkitConfig& c, std::string_view v) { c.render.clip_seconds = to_double(v); }},
        {"peak_level", [](ToolkitConfig& c, std::string_view v) { c.render.peak_level = to_double(v); }},
        {"fade_seconds", [](ToolkitConfig& c, std::string_view v) { c.render.fade_seconds = to_double(v); }},
        {"oscillator", [](ToolkitConfig& c, std::string_view v) { c.render.oscillator = parse_oscillator_mode(v); }},
        {"shift_seed", [](ToolkitConfig& c, std::string_view v) { c.shift.shift_seed = to_u64(v); }},
        {"domain_schedule",
         [](ToolkitConfig& c, std::string_view v) {
             c.shift.domain_schedule.clear();
             if (v == "default") return;
             for (auto item : split_list(v)) c.shift.domain_schedule.push_back(to_u64(item));
         }},
        {"bias_major_timbre", [](ToolkitConfig& c, std::string_view v) { c.shift.bias_map.major = parse_waveshape(v); }},
        {"bias_minor_timbre", [](ToolkitConfig& c, std::string_view v) { c.shift.bias_map.minor = parse_waveshape(v); }},
    };
    return table;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> ToolkitConfig::to_fields() const {
    const auto& g = base.gen;
    return {
        {"freq_min", format_double(g.freq_min)},
        {"freq_max", format_double(g.freq_max)},
        {"freq_tolerance", format_double(g.freq_tolerance)},
        {"chord_counts", join(g.chord_counts)},
        {"duration_min", format_double(g.duration_min)},
        {"duration_max", format_double(g.duration_max)},
        {"target_seconds", format_double(g.target_seconds)},
        {"train_val_first", std::to_string(base.train_val.first)},
        {"train_val_last", std::to_string(base.train_val.last)},
        {"train_size", std::to_string(base.train_size)},
        {"val_size", std::to_string(base.val_size)},
        {"test_first", std::to_string(base.test.first)},
        {"test_last", std::to_string(base.test.last)},
        {"timbres", join(base.timbres)},
        {"amplitude", std::string(amplitude_profile_name(base.amplitude))},
        {"adsr_attack", format_double(render.adsr.attack)},
        {"adsr_decay", format_double(render.adsr.decay)},
        {"adsr_sustain", format_double(render.adsr.sustain)},
        {"adsr_release", format_double(render.adsr.release)},
        {"sample_rate", std::to_string(render.sample_rate)},
        {"clip_seconds", format_double(render.clip_seconds)},
        {"peak_level", format_double(render.peak_level)},
        {"fade_seconds", format_double(render.fade_seconds)},
        {"oscillator", std::string(oscillator_mode_name(render.oscillator))},
        {"shift_seed", std::to_string(shift.shift_seed)},
        {"domain_schedule", join(domain_schedule())},
        {"bias_major_timbre", std::string(waveshape_name(shift.bias_map.major))},
        {"bias_minor_timbre", std::string(waveshape_name(shift.bias_map.minor))},
    };
}

std::string ToolkitConfig::to_text() const {
    std::string out;
    for (const auto& [k, v] : to_fields()) out += k + " = " + v + "\n";
    return out;
}

std::string ToolkitConfig::hash() const { return hex64(fnv1a64(to_text())); }

std::vector<std::uint64_t> ToolkitConfig::domain_schedule() const {
    return shift.domain_schedule.empty() ? default_domain_schedule(base.train_size) : shift.domain_schedule;
}

RenderConfig ToolkitConfig::render_for(Waveshape timbre) const {
    RenderConfig r = render;
    r.waveshape = timbre;
    return r;
}

void ToolkitConfig::validate() const {
    try {
        base.validate();
        render.validate();
        if (render.adsr.name != base.amplitude) throw std::invalid_argument("ADSR profile name disagrees with amplitude");
        if (shift.bias_map.major == shift.bias_map.minor) throw std::invalid_argument("bias map needs two timbres");
        validate_domain_schedule(domain_schedule(), base.train_size);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

ToolkitConfig parse_config(std::string_view text, ToolkitConfig base) {
    constexpr std::string_view kHeaderPrefix = "#config.";
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        line = trim(line);
        if (line.substr(0, kHeaderPrefix.size()) == kHeaderPrefix) {
            line.remove_prefix(kHeaderPrefix.size());
        } else if (line.empty() || line.front() == '#') {
            continue;
        } else if (line.find('\t') != std::string_view::npos && line.find('=') == std::string_view::npos) {
            continue;  // manifest rows when a manifest is used as a config
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
        try {
            it->second(base, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": bad value for " + std::string(key) + ": " +
                              e.what());
        }
    }
    return base;
}

ToolkitConfig load_config(const std::filesystem::path& path, ToolkitConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

void stamp_header(ManifestHeader& header, const ToolkitConfig& config) {
    header.set("generator", std::string(kToolName) + " " + std::string(kToolVersion));
    header.set("generator_version", std::to_string(kGeneratorVersion));
    header.set("audio", "wav pcm16 mono");
    header.set("sample_rate", std::to_string(config.render.sample_rate));
    header.set("bit_depth", "16");
    header.set("config_hash", config.hash());
    for (const auto& [k, v] : config.to_fields()) header.set("config." + k, v);
}

}  // namespace melodyforge
