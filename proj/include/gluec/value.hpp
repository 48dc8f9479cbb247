#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gluec {

// Opaque name for a registered foreign object: slot index + per-registration
// nonce + class tag. Valid only while the registry slot still carries the
// same nonce.
struct HandleId {
  std::uint64_t index = 0;
  std::uint64_t nonce = 0;
  std::string cls;

  friend bool operator==(const HandleId&, const HandleId&) = default;
};

struct Nil {
  friend bool operator==(Nil, Nil) { return true; }
};

class Value {
 public:
  enum class Kind { Nil, Scalar, Bool, Text, Vector, Handle };

  Value() = default;

  static Value nil() { return Value(); }
  static Value scalar(double d) { return Value(Storage(std::in_place_index<1>, d)); }
  static Value boolean(bool b) { return Value(Storage(std::in_place_index<2>, b)); }
  static Value text(std::string s) { return Value(Storage(std::in_place_index<3>, std::move(s))); }
  static Value vector(std::vector<double> v) { return Value(Storage(std::in_place_index<4>, std::move(v))); }
  static Value handle(HandleId h) { return Value(Storage(std::in_place_index<5>, std::move(h))); }

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is_nil() const { return kind() == Kind::Nil; }
  bool is_scalar() const { return kind() == Kind::Scalar; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_text() const { return kind() == Kind::Text; }
  bool is_vector() const { return kind() == Kind::Vector; }
  bool is_handle() const { return kind() == Kind::Handle; }

  double as_scalar() const { return std::get<1>(data_); }
  bool as_bool() const { return std::get<2>(data_); }
  const std::string& as_text() const { return std::get<3>(data_); }
  const std::vector<double>& as_vector() const { return std::get<4>(data_); }
  const HandleId& as_handle() const { return std::get<5>(data_); }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  using Storage = std::variant<Nil, double, bool, std::string, std::vector<double>, HandleId>;
  explicit Value(Storage s) : data_(std::move(s)) {}

  Storage data_;
};

inline std::string_view kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::Nil: return "nil";
    case Value::Kind::Scalar: return "scalar";
    case Value::Kind::Bool: return "bool";
    case Value::Kind::Text: return "text";
    case Value::Kind::Vector: return "vector";
    case Value::Kind::Handle: return "handle";
  }
  return "?";
}

inline std::string to_string(const Value& v) {
  std::ostringstream os;
  os.precision(17);
  switch (v.kind()) {
    case Value::Kind::Nil: os << "nil"; break;
    case Value::Kind::Scalar: os << v.as_scalar(); break;
    case Value::Kind::Bool: os << (v.as_bool() ? "true" : "false"); break;
    case Value::Kind::Text: os << '"' << v.as_text() << '"'; break;
    case Value::Kind::Vector: {
      os << '[';
      const auto& xs = v.as_vector();
      for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
      os << ']';
      break;
    }
    case Value::Kind::Handle: {
      const auto& h = v.as_handle();
      os << "<" << h.cls << " #" << h.index << ":" << std::hex << h.nonce << ">";
      break;
    }
  }
  return os.str();
}

class InterpError : public std::runtime_error {
 public:
  enum class Kind { Arity, TypeMismatch, StaleHandle, ClassMismatch, UnknownFunction, NullViolation, ForeignFault };

  InterpError(Kind kind, const std::string& message)
      : std::runtime_error(std::string(name(kind)) + ": " + message), kind_(kind), message_(message) {}

  Kind kind() const { return kind_; }
  const std::string& message() const { return message_; }

  static std::string_view name(Kind k) {
    switch (k) {
      case Kind::Arity: return "Arity";
      case Kind::TypeMismatch: return "TypeMismatch";
      case Kind::StaleHandle: return "StaleHandle";
      case Kind::ClassMismatch: return "ClassMismatch";
      case Kind::UnknownFunction: return "UnknownFunction";
      case Kind::NullViolation: return "NullViolation";
      case Kind::ForeignFault: return "ForeignFault";
    }
    return "?";
  }

 private:
  Kind kind_;
  std::string message_;
};

}  // namespace gluec
