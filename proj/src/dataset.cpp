#include "melodyforge/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "melodyforge/wav.hpp"

namespace melodyforge {

AudioClip render_record(const SampleRecord& record, const ToolkitConfig& config) {
    return render_melody(record.spec(), config.render_for(record.timbre));
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const auto count = static_cast<std::size_t>(std::max(1, workers));
    if (count == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < std::min(count, n); ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    }
    threads.clear();
    if (error) std::rethrow_exception(error);
}

MaterializeStats materialize(const std::vector<SampleRecord>& records, const std::filesystem::path& root,
                             const ToolkitConfig& config, int workers, const ProgressFn& progress) {
    MaterializeStats stats;
    std::mutex mutex;
    std::size_t done = 0;
    parallel_for(records.size(), workers, [&](std::size_t i) {
        const auto& r = records[i];
        const auto path = root / r.wav_path;
        bool wrote = false;
        std::string failure;
        std::size_t bytes = 0;
        try {
            const auto encoded = encode_wav(render_record(r, config));
            bytes = encoded.size();
            wrote = write_file_if_changed(path, encoded);
        } catch (const std::exception& e) {
            failure = path.string() + ": " + e.what();
        }
        std::lock_guard lock(mutex);
        if (!failure.empty()) stats.failures.push_back(std::move(failure));
        else if (wrote) {
            ++stats.written;
            stats.bytes_written += bytes;
        } else {
            ++stats.unchanged;
        }
        ++done;
        if (progress) progress(done, records.size());
    });
    std::sort(stats.failures.begin(), stats.failures.end());
    return stats;
}

}  // namespace melodyforge
