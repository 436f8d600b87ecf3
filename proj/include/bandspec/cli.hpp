#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bandspec::cli {

enum class Subcommand { moments, paths, kernel, dos, theorem, emb, verify };

std::string to_string(Subcommand s);

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,  // verify found a failing check
    exit_config = 2,        // unknown flag or key, malformed value, bad config file
    exit_numeric = 3,
    exit_io = 4,
    exit_out_of_range = 5,
    exit_missing_key = 6,
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what, int code = exit_config)
        : std::runtime_error(what), exit_code(code) {}
    int exit_code;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully resolved run parameters: every key allowed for the subcommand is
/// present, with defaults filled in.
struct RunConfig {
    Subcommand subcommand = Subcommand::verify;
    nlohmann::json parameters = nlohmann::json::object();
    std::string format = "csv";  // csv | json
    std::string output_dir;
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "BANDSPEC_OUT_DIR";

/// argv without the program name, e.g. {"theorem", "--W", "16"}. A JSON config
/// file can be given as `--config <path>` or through `config_file`; flags
/// override its values. Throws ConfigError.
RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& config_file = {});

/// Manifest: tool name, library version, subcommand, format, parameters and
/// master seed. Contains nothing that varies between identical runs.
nlohmann::json manifest(const RunConfig& config);

/// Dispatches, writes result files and manifest.json into output_dir, and
/// returns an exit code. Progress and check reports go to `log`.
int run(const RunConfig& config, std::ostream& log);

/// parse_config + run with error-to-exit-code mapping; messages go to `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& log, std::ostream& err);

}  // namespace bandspec::cli
