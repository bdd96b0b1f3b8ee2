#pragma once

// Line-oriented text manifest:
//
//   ##melodyforge-manifest 1
//   #<key>=<value>                     (header fields, in order)
//   seed<TAB>label<TAB>...<TAB>chords  (column line)
//   <one tab-separated row per sample>
//
// The chords column is `;`-separated `<symbol>:<f1>,<f2>,...@<seconds>`;
// numbers use the shortest text that parses back to the same double.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "melodyforge/records.hpp"

namespace melodyforge {

inline constexpr int kManifestVersion = 1;
inline constexpr std::string_view kManifestMagic = "##melodyforge-manifest";

class ManifestHeader {
public:
    void set(std::string key, std::string value);
    std::optional<std::string> get(std::string_view key) const;
    std::string require(std::string_view key) const;
    const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

    bool operator==(const ManifestHeader&) const = default;

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

struct DatasetManifest {
    ManifestHeader header;
    std::vector<SampleRecord> records;

    bool operator==(const DatasetManifest&) const = default;
};

enum class ManifestErrorKind { io, version_mismatch, parse, duplicate_key };

class ManifestError : public std::runtime_error {
public:
    ManifestError(ManifestErrorKind kind, std::size_t line, const std::string& detail, const std::string& context = "")
        : std::runtime_error((context.empty() ? "" : context + ": ") +
                             (line > 0 ? "line " + std::to_string(line) + ": " : "") + detail),
          kind_(kind),
          line_(line),
          detail_(detail) {}
    ManifestErrorKind kind() const { return kind_; }
    std::size_t line() const { return line_; }
    const std::string& detail() const { return detail_; }

private:
    ManifestErrorKind kind_;
    std::size_t line_;
    std::string detail_;
};

std::string format_manifest(const DatasetManifest& manifest);
/// Throws ManifestError. Duplicate (seed, timbre, split) rows are rejected with
/// their line number.
DatasetManifest parse_manifest(std::string_view text);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);
double parse_double(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// FNV-1a of the formatted manifest, as 16 hex digits.
std::string manifest_digest(const DatasetManifest& manifest);

}  // namespace melodyforge
