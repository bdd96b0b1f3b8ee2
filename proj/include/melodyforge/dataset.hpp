#pragma once

// Rendering manifests to WAV files under a dataset root.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "melodyforge/config.hpp"
#include "melodyforge/records.hpp"
#include "melodyforge/synth.hpp"

namespace melodyforge {

AudioClip render_record(const SampleRecord& record, const ToolkitConfig& config);

struct MaterializeStats {
    std::size_t written = 0;
    std::size_t unchanged = 0;
    std::uint64_t bytes_written = 0;
    std::vector<std::string> failures;  // "<path>: <reason>"
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Renders every record to root / record.wav_path. Files whose bytes already
/// match are left untouched, so reruns write nothing. Records are independent
/// and spread over `workers` threads; results do not depend on the count.
MaterializeStats materialize(const std::vector<SampleRecord>& records, const std::filesystem::path& root,
                             const ToolkitConfig& config, int workers, const ProgressFn& progress = {});

/// Calls fn(i) for i in [0, n) on `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace melodyforge
