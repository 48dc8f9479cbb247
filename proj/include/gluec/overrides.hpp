#pragma once

#include <map>
#include <string>

#include "gluec/diagnostic.hpp"

namespace gluec {

// Hand-supplied glue for functions the generator should not (or cannot) emit.
struct OverrideEntry {
  enum class Kind { Text, Skip };

  Kind kind = Kind::Skip;
  std::string text;  // verbatim glue, Text only
  SourceLocation location;

  bool is_skip() const { return kind == Kind::Skip; }
  bool is_text() const { return kind == Kind::Text; }
};

struct OverrideSet {
  std::map<std::string, OverrideEntry> entries;

  const OverrideEntry* find(const std::string& cname) const {
    auto it = entries.find(cname);
    return it == entries.end() ? nullptr : &it->second;
  }
  bool skips(const std::string& cname) const {
    const auto* e = find(cname);
    return e && e->is_skip();
  }
  bool has_text(const std::string& cname) const {
    const auto* e = find(cname);
    return e && e->is_text();
  }
};

}  // namespace gluec
