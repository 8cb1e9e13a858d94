#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spdsim {

// Half-open source range; line and column are 1-based.
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
};

inline bool hasErrors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  if (!d.span.file.empty()) os << d.span.file << ":";
  os << d.span.line << ":" << d.span.column << ": ";
  os << (d.severity == Severity::Error ? "error" : "warning");
  os << " [" << d.code << "] " << d.message;
  return os;
}

// Thrown by operations whose preconditions are violated by the caller
// (as opposed to diagnostics, which report problems in user-supplied models).
class Error : public std::exception {
 public:
  Error(std::string code, std::string message)
      : code_(std::move(code)), message_(std::move(message)),
        what_(code_ + ": " + message_) {}

  const char* what() const noexcept override { return what_.c_str(); }
  const std::string& code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string code_;
  std::string message_;
  std::string what_;
};

}  // namespace spdsim
