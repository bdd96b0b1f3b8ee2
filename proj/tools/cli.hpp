#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace melodyforge::cli {

/// Process exit statuses.
enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,  // symbolic violation, unreadable or corrupt file
    kUsage = 2,               // bad arguments or config file
    kMissingInput = 3,        // base dataset or manifest not found
    kIoError = 4,             // cannot write (permissions, disk full)
    kInvalidShift = 5,        // shift level / bias level out of range
    kInternal = 70,
};

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// <root>/<timbre>/<split>/manifest.tsv
std::filesystem::path base_manifest_path(const std::filesystem::path& root, const std::string& timbre,
                                         const std::string& split);

}  // namespace melodyforge::cli
