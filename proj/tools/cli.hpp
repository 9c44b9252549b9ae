#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hardcore/block_family.hpp"

namespace hardcore::cli {

enum ExitCode { ok = 0, check_failed = 1, config_error = 2 };

/// Runs the command line. Normal output goes to `out`, warnings and
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Cache directory from the flag, else $HC_CACHE_DIR, else none.
std::optional<std::filesystem::path> resolve_cache_dir(const std::string& flag);

/// Loads the family from the cache when present and valid; otherwise
/// builds it and (re)writes the cache. A corrupt cache file is reported on
/// `err` and rebuilt.
std::shared_ptr<const BlockFamily> cached_family(int n, Reduction reduction,
                                                 const std::optional<std::filesystem::path>& dir,
                                                 std::ostream& err);

} // namespace hardcore::cli
