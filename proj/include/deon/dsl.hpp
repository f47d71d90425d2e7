#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deon/scenario.hpp"

namespace deon {

struct SourceSpan {
  std::string file;
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based
  std::size_t offset = 0;  // byte offset into the source
  std::size_t length = 0;
};

enum class Severity { Error, Warning };

/// Diagnostic codes. Lexical, syntax, duplicate and unknown-reference problems
/// found while parsing have their own codes; validation findings keep the
/// code reported by validate().
namespace diag {
inline constexpr const char* kLexical = "lexical";
inline constexpr const char* kSyntax = "syntax";
inline constexpr const char* kDuplicate = "duplicate";
inline constexpr const char* kUnknownReference = "unknown-reference";
inline constexpr const char* kLimit = "limit";
}  // namespace diag

struct ParseDiagnostic {
  SourceSpan span;
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::string expected;  // hint, may be empty

  std::string str() const;
};

struct ParseOptions {
  std::string file = "<input>";
  std::size_t max_bytes = 1 << 20;
  std::size_t max_depth = 200;
};

struct ParseResult {
  std::optional<Scenario> scenario;  // set iff no error diagnostics
  std::vector<ParseDiagnostic> diagnostics;
  /// Element name (as used in Diagnostic::element) -> where it was written.
  std::map<std::string, SourceSpan> spans;

  bool ok() const { return scenario.has_value(); }
};

/// Parses and validates scenario source. Never throws on malformed input.
ParseResult parse_scenario(std::string_view text, const ParseOptions& options = {});

/// Canonical source text; parse_scenario(print_scenario(s)) == s.
std::string print_scenario(const Scenario& s);

}  // namespace deon
