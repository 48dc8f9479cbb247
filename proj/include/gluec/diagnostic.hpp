#pragma once

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace gluec {

// 1-based; line 0 means "no location".
struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;

  bool known() const { return line != 0; }
  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class Severity { Warning, Error };

inline const char* to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string entity;
  std::string message;
  SourceLocation location;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  if (d.location.known()) os << d.location.line << ':' << d.location.column << ": ";
  os << to_string(d.severity) << ": ";
  if (!d.entity.empty()) os << d.entity << ": ";
  return os << d.message;
}

inline std::string to_string(const Diagnostic& d) {
  std::ostringstream os;
  os << d;
  return os.str();
}

inline std::size_t error_count(const Diagnostics& diags) {
  std::size_t n = 0;
  for (const auto& d : diags) n += d.severity == Severity::Error;
  return n;
}

}  // namespace gluec
