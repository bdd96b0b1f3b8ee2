#pragma once

// Human-readable `key = value` configuration covering generation, rendering,
// dataset layout and shift construction. The same keys appear in every
// manifest header as `#config.<key>=<value>`, so a manifest can be fed back
// as a config file.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "melodyforge/manifest.hpp"
#include "melodyforge/shiftlab.hpp"
#include "melodyforge/synth.hpp"

namespace melodyforge {

inline constexpr std::string_view kToolName = "melodyforge";
inline constexpr std::string_view kToolVersion = "1.0.0";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ToolkitConfig {
    BaseDatasetConfig base;
    RenderConfig render;  // waveshape is set per record
    ShiftConfig shift;

    /// Every setting in canonical order, fully resolved.
    std::vector<std::pair<std::string, std::string>> to_fields() const;
    std::string to_text() const;
    /// FNV-1a over to_text(), 16 hex digits.
    std::string hash() const;

    std::vector<std::uint64_t> domain_schedule() const;
    RenderConfig render_for(Waveshape timbre) const;
    void validate() const;
};

/// Applies `key = value` lines on top of `base`. Blank lines and `#` comments
/// are skipped, except `#config.key=value` lines, which are read as settings.
ToolkitConfig parse_config(std::string_view text, ToolkitConfig base = {});
ToolkitConfig load_config(const std::filesystem::path& path, ToolkitConfig base = {});

/// Header fields written into every manifest: tool, versions, audio format,
/// config hash and the resolved config.
void stamp_header(ManifestHeader& header, const ToolkitConfig& config);

}  // namespace melodyforge
