#pragma once

#include <chrono>
#include <string>

#include "hmt/io.hpp"
#include "hmt/polish.hpp"

namespace hmt {

enum class Method { BM, ME, GP, FJ, FL, FC, CM };

inline constexpr Method kAllMethods[] = {Method::BM, Method::ME, Method::GP, Method::FJ,
                                         Method::FL, Method::FC, Method::CM};

inline std::string method_name(Method m) {
  switch (m) {
    case Method::BM:
      return "BM";
    case Method::ME:
      return "ME";
    case Method::GP:
      return "GP";
    case Method::FJ:
      return "FJ";
    case Method::FL:
      return "FL";
    case Method::FC:
      return "FC";
    case Method::CM:
      return "CM";
  }
  return "?";
}

inline Method parse_method(std::string name) {
  for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw DomainError("unknown method: " + name);
}

/// Largest order the comparison protocol runs a method at.
inline int method_order_cap(Method m) {
  switch (m) {
    case Method::BM:
      return 150;
    case Method::CM:
      return 30;
    case Method::GP:
      return 1 << 30;
    default:
      return 50;
  }
}

/// Raw samples of one method plus what it computed on the way.
struct MethodOutput {
  Method method = Method::BM;
  int n = 0;
  SampledCdf samples;
  json diagnostics = json::object();
  double transform_ms = 0.0;  // time spent computing coefficients or parameters
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <class F>
SampledCdf sample_on(const std::vector<double>& grid, F&& f) {
  SampledCdf out{grid, {}};
  out.values.reserve(grid.size());
  for (double x : grid) out.values.push_back(f(x));
  return out;
}

}  // namespace detail

}  // namespace hmt
