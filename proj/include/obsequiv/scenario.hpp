#ifndef OBSEQUIV_SCENARIO_HPP
#define OBSEQUIV_SCENARIO_HPP

#include "obsequiv/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace obsequiv {

/// Malformed scenario: bad syntax, unknown kind, undefined name or a
/// parameter outside an operation's preconditions. The message starts with
/// a line:column or JSON-path location.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { json, csv, both };

struct RunOptions {
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  OutputFormat format = OutputFormat::json;
};

struct TaskResult {
  std::size_t index = 0;
  std::string kind;
  CheckReport report;
  std::vector<std::filesystem::path> files;
};

struct ScenarioResult {
  std::vector<TaskResult> tasks;
  /// 0 all pass, 1 some check failed or was inconclusive.
  int exit_code = 0;
};

/// Parses and runs a scenario document. `stem` names the output
/// subdirectory. Throws ConfigError; all definitions and tasks are validated
/// before any task runs.
ScenarioResult run_scenario_text(const std::string &text, const std::string &stem,
                                 const RunOptions &options, std::ostream &log);

/// Runs a scenario file and maps the outcome to an exit code: 0 all checks
/// pass, 1 some check fails or is inconclusive, 2 configuration error.
int run_scenario(const std::filesystem::path &path, const RunOptions &options, std::ostream &log,
                 std::ostream &err);

OutputFormat parse_format(const std::string &text);

} // namespace obsequiv

#endif // OBSEQUIV_SCENARIO_HPP
