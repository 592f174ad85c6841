#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace argus {

struct SourceSpan {
  std::string file;
  int line = 1;
  int col = 1;
  int length = 1;
};

enum class Severity { Error, Warning };

inline const char* severity_name(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

// One reported problem. `subject` is the gid the diagnostic is attached to
// (used for cascading); it is not part of the printed line.
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
  std::optional<std::string> causedBy;
  std::optional<std::string> subject;
};

inline Diagnostic make_error(std::string code, SourceSpan span, std::string msg,
                             std::optional<std::string> subject = std::nullopt) {
  Diagnostic d;
  d.code = std::move(code);
  d.severity = Severity::Error;
  d.span = std::move(span);
  d.message = std::move(msg);
  d.subject = std::move(subject);
  return d;
}

inline Diagnostic make_warning(std::string code, SourceSpan span, std::string msg,
                               std::optional<std::string> subject = std::nullopt) {
  Diagnostic d = make_error(std::move(code), std::move(span), std::move(msg), std::move(subject));
  d.severity = Severity::Warning;
  return d;
}

// Bit-exact reporting format:
//   <file>:<line>:<col>: <severity> <code>: <message>
// cascaded lines append " [caused by <gid>]".
inline std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.span.file + ":" + std::to_string(d.span.line) + ":" +
                    std::to_string(d.span.col) + ": " + severity_name(d.severity) + " " +
                    d.code + ": " + d.message;
  if (d.causedBy) out += " [caused by " + *d.causedBy + "]";
  return out;
}

inline bool span_less(const SourceSpan& a, const SourceSpan& b) {
  if (a.file != b.file) return a.file < b.file;
  if (a.line != b.line) return a.line < b.line;
  return a.col < b.col;
}

// Source order, then code, stable; exact duplicates removed.
inline void sort_diagnostics(std::vector<Diagnostic>& ds) {
  std::stable_sort(ds.begin(), ds.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.file != b.span.file) return a.span.file < b.span.file;
    if (a.span.line != b.span.line) return a.span.line < b.span.line;
    if (a.span.col != b.span.col) return a.span.col < b.span.col;
    return a.code < b.code;
  });
  ds.erase(std::unique(ds.begin(), ds.end(),
                       [](const Diagnostic& a, const Diagnostic& b) {
                         return a.code == b.code && a.span.file == b.span.file &&
                                a.span.line == b.span.line && a.span.col == b.span.col &&
                                a.message == b.message && a.causedBy == b.causedBy;
                       }),
           ds.end());
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

// Internal hard errors (contract violations, resource limits). Recoverable
// input problems go through Diagnostic instead.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class StateSpaceTooLarge : public Error {
 public:
  StateSpaceTooLarge(unsigned long long cardinality, unsigned long long bound)
      : Error("StateSpaceTooLarge",
              "state space of " + std::to_string(cardinality) + " states exceeds bound " +
                  std::to_string(bound)),
        cardinality(cardinality),
        bound(bound) {}
  unsigned long long cardinality;
  unsigned long long bound;
};

}  // namespace argus
