#pragma once

// Closed vocabularies shared by the typemap, planner, emitter and runtime.

#include <array>
#include <optional>
#include <string_view>
#include <utility>

namespace gluec {

enum class HostType { Scalar, Bool, String, Vector, Handle, Any };

enum class MarshalRule {
  ScalarToInt,
  ScalarToDouble,
  BoolToInt,
  StringToCstr,
  HandleUnbox,
  EnumToInt,
  IntToScalar,
  DoubleToScalar,
  IntToBool,
  CstrToString,
  HandleBox,
  None,
};

enum class Direction { In, Out };

inline constexpr std::array<std::pair<HostType, std::string_view>, 6> kHostTypeNames{{
    {HostType::Scalar, "scalar"},
    {HostType::Bool, "bool"},
    {HostType::String, "string"},
    {HostType::Vector, "vector"},
    {HostType::Handle, "handle"},
    {HostType::Any, "any"},
}};

inline constexpr std::array<std::pair<MarshalRule, std::string_view>, 12> kMarshalRuleNames{{
    {MarshalRule::ScalarToInt, "scalar-to-int"},
    {MarshalRule::ScalarToDouble, "scalar-to-double"},
    {MarshalRule::BoolToInt, "bool-to-int"},
    {MarshalRule::StringToCstr, "string-to-cstr"},
    {MarshalRule::HandleUnbox, "handle-unbox"},
    {MarshalRule::EnumToInt, "enum-to-int"},
    {MarshalRule::IntToScalar, "int-to-scalar"},
    {MarshalRule::DoubleToScalar, "double-to-scalar"},
    {MarshalRule::IntToBool, "int-to-bool"},
    {MarshalRule::CstrToString, "cstr-to-string"},
    {MarshalRule::HandleBox, "handle-box"},
    {MarshalRule::None, "none"},
}};

inline std::string_view to_string(HostType h) {
  for (const auto& [value, name] : kHostTypeNames)
    if (value == h) return name;
  return "?";
}

inline std::string_view to_string(MarshalRule r) {
  for (const auto& [value, name] : kMarshalRuleNames)
    if (value == r) return name;
  return "?";
}

inline std::optional<HostType> parse_host_type(std::string_view s) {
  for (const auto& [value, name] : kHostTypeNames)
    if (name == s) return value;
  return std::nullopt;
}

inline std::optional<MarshalRule> parse_marshal_rule(std::string_view s) {
  for (const auto& [value, name] : kMarshalRuleNames)
    if (name == s) return value;
  return std::nullopt;
}

// `none` is valid in both directions.
inline bool rule_has_direction(MarshalRule r, Direction d) {
  switch (r) {
    case MarshalRule::ScalarToInt:
    case MarshalRule::ScalarToDouble:
    case MarshalRule::BoolToInt:
    case MarshalRule::StringToCstr:
    case MarshalRule::HandleUnbox:
    case MarshalRule::EnumToInt:
      return d == Direction::In;
    case MarshalRule::IntToScalar:
    case MarshalRule::DoubleToScalar:
    case MarshalRule::IntToBool:
    case MarshalRule::CstrToString:
    case MarshalRule::HandleBox:
      return d == Direction::Out;
    case MarshalRule::None:
      return true;
  }
  return false;
}

// The host type a rule consumes (in) or produces (out); nullopt for `none`.
inline std::optional<HostType> rule_host_type(MarshalRule r) {
  switch (r) {
    case MarshalRule::ScalarToInt:
    case MarshalRule::ScalarToDouble:
    case MarshalRule::EnumToInt:
    case MarshalRule::IntToScalar:
    case MarshalRule::DoubleToScalar:
      return HostType::Scalar;
    case MarshalRule::BoolToInt:
    case MarshalRule::IntToBool:
      return HostType::Bool;
    case MarshalRule::StringToCstr:
    case MarshalRule::CstrToString:
      return HostType::String;
    case MarshalRule::HandleUnbox:
    case MarshalRule::HandleBox:
      return HostType::Handle;
    case MarshalRule::None:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace gluec
