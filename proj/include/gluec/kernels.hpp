#pragma once

// Numeric builtins for the host runtime. Vectors are plain doubles; NaN
// propagates. Handles never participate in arithmetic.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gluec/runtime.hpp"
#include "gluec/value.hpp"

namespace gluec::kernels {

inline InterpError domain_error(const std::string& what) {
  return InterpError(InterpError::Kind::TypeMismatch, what);
}

/// start, start+step, ... up to stop: floor((stop-start)/step)+1 points.
/// The quotient gets a small tolerance so that decimal steps such as 0.001
/// land on the endpoint.
inline std::vector<double> range(double start, double step, double stop) {
  if (!std::isfinite(start) || !std::isfinite(step) || !std::isfinite(stop))
    throw domain_error("range: parameters must be finite");
  if (!(step > 0)) throw domain_error("range: step must be > 0");
  if (stop < start) throw domain_error("range: stop must be >= start");
  const double span = (stop - start) / step;
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-10)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

namespace detail {

inline const Value& numeric(const Value& v, const char* fn) {
  if (v.is_handle()) throw domain_error(std::string(fn) + ": handles do not take part in arithmetic");
  if (!v.is_scalar() && !v.is_vector())
    throw domain_error(std::string(fn) + ": expected scalar or vector, got " + std::string(kind_name(v.kind())));
  return v;
}

template <typename Op>
Value elementwise(const Value& a, const Value& b, const char* fn, Op op) {
  numeric(a, fn);
  numeric(b, fn);
  if (a.is_scalar() && b.is_scalar()) return Value::scalar(op(a.as_scalar(), b.as_scalar()));
  if (a.is_scalar() || b.is_scalar()) {
    const double k = a.is_scalar() ? a.as_scalar() : b.as_scalar();
    std::vector<double> out = a.is_scalar() ? b.as_vector() : a.as_vector();
    for (double& x : out) x = a.is_scalar() ? op(k, x) : op(x, k);
    return Value::vector(std::move(out));
  }
  const auto& x = a.as_vector();
  const auto& y = b.as_vector();
  if (x.size() != y.size())
    throw domain_error(std::string(fn) + ": length mismatch (" + std::to_string(x.size()) + " vs " +
                       std::to_string(y.size()) + ")");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = op(x[i], y[i]);
  return Value::vector(std::move(out));
}

inline void arity(std::span<const Value> args, std::size_t n, const char* fn) {
  if (args.size() != n)
    throw InterpError(InterpError::Kind::Arity, std::string(fn) + ": expected " + std::to_string(n) +
                                                    " argument(s), got " + std::to_string(args.size()));
}

inline double scalar_arg(const Value& v, const char* fn) {
  if (!v.is_scalar()) throw domain_error(std::string(fn) + ": expected scalar, got " + std::string(kind_name(v.kind())));
  return v.as_scalar();
}

}  // namespace detail

inline Value cos(const Value& v) {
  detail::numeric(v, "cos");
  if (v.is_scalar()) return Value::scalar(std::cos(v.as_scalar()));
  std::vector<double> out = v.as_vector();
  for (double& x : out) x = std::cos(x);
  return Value::vector(std::move(out));
}

inline Value ew_add(const Value& a, const Value& b) {
  return detail::elementwise(a, b, "ew_add", [](double x, double y) { return x + y; });
}

inline Value ew_mul(const Value& a, const Value& b) {
  return detail::elementwise(a, b, "ew_mul", [](double x, double y) { return x * y; });
}

inline Value scale(double k, const Value& v) {
  detail::numeric(v, "scale");
  return ew_mul(Value::scalar(k), v);
}

// Zero-based.
inline double sample(const Value& v, double index) {
  if (!v.is_vector()) throw domain_error("sample: expected vector, got " + std::string(kind_name(v.kind())));
  const auto& xs = v.as_vector();
  if (!(index >= 0) || index != std::floor(index) || index >= static_cast<double>(xs.size()))
    throw domain_error("sample: index out of range");
  return xs[static_cast<std::size_t>(index)];
}

/// Registers range, cos, ew_add, ew_mul, scale and sample as builtins.
inline void install(Runtime& rt) {
  auto& st = rt.symbols();
  st.define_builtin("range", [](Runtime&, std::span<const Value> a) {
    detail::arity(a, 3, "range");
    return std::vector<Value>{Value::vector(
        range(detail::scalar_arg(a[0], "range"), detail::scalar_arg(a[1], "range"), detail::scalar_arg(a[2], "range")))};
  });
  st.define_builtin("cos", [](Runtime&, std::span<const Value> a) {
    detail::arity(a, 1, "cos");
    return std::vector<Value>{cos(a[0])};
  });
  st.define_builtin("ew_add", [](Runtime&, std::span<const Value> a) {
    detail::arity(a, 2, "ew_add");
    return std::vector<Value>{ew_add(a[0], a[1])};
  });
  st.define_builtin("ew_mul", [](Runtime&, std::span<const Value> a) {
    detail::arity(a, 2, "ew_mul");
    return std::vector<Value>{ew_mul(a[0], a[1])};
  });
  st.define_builtin("scale", [](Runtime&, std::span<const Value> a) {
    detail::arity(a, 2, "scale");
    return std::vector<Value>{scale(detail::scalar_arg(a[0], "scale"), a[1])};
  });
  st.define_builtin("sample", [](Runtime&, std::span<const Value> a) {
    detail::arity(a, 2, "sample");
    return std::vector<Value>{Value::scalar(sample(a[0], detail::scalar_arg(a[1], "sample")))};
  });
}

}  // namespace gluec::kernels
