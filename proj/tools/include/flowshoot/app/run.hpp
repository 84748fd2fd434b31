#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flowshoot::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitEmptyField = 2;

/// Overrides output.dir from the scenario file (but not --out).
inline constexpr const char* kOutputDirEnv = "FLOWSHOOT_OUTPUT_DIR";

struct SolveOptions {
    std::optional<std::filesystem::path> out_dir;
    /// Solve even when the admission checks fail.
    bool force = false;
    /// Worker threads; 0 = hardware concurrency.
    int threads = 0;
};

/// Output directory precedence: --out, then the environment, then output.dir.
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::string& configured);

int run_solve(const std::filesystem::path& scenario, const SolveOptions& opt, std::ostream& out, std::ostream& err);

int run_check(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

int run_verify(const std::filesystem::path& summary, const std::vector<std::filesystem::path>& csvs, std::ostream& out,
               std::ostream& err);

}  // namespace flowshoot::app
