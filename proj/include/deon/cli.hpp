#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deon/dsl.hpp"
#include "deon/principles.hpp"

namespace deon::cli {

enum class Command { Check, Explain, Validate, SatDebug };
enum class OutputMode { Human, Structured };

namespace exit_code {
inline constexpr int kEthical = 0;
inline constexpr int kUnethical = 1;
inline constexpr int kIndeterminate = 2;
inline constexpr int kInvalid = 3;
inline constexpr int kUsage = 4;
}  // namespace exit_code

struct RunConfig {
  Command command = Command::Check;
  std::vector<std::string> inputs;
  OutputMode mode = OutputMode::Human;
  std::uint64_t budget = SolverOptions{}.decision_budget;
  bool explain = false;
  std::optional<std::string> clauses;  // query id for the clause dump
};

struct RunOutput {
  int exit = exit_code::kEthical;
  std::string out;
  std::string err;
};

/// Processes one scenario given as text; `name` is used in diagnostics.
RunOutput run_text(const RunConfig& config, const std::string& name, const std::string& text);

/// Processes one scenario file.
RunOutput run(const RunConfig& config, const std::string& path);

/// Checks all inputs (concurrently), emitting output in argument order.
int run_all(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line: argument parsing, DEON_BUDGET, dispatch.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Sorted-key JSON, two-space indent, trailing newline.
std::string render_structured(const VerdictSet& v);
std::string render_human(const VerdictSet& v, bool explain);

/// Exit status for a verdict set: unethical beats indeterminate beats ethical.
int verdict_exit_code(const VerdictSet& v);

}  // namespace deon::cli
