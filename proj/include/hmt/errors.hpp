#pragma once

#include <stdexcept>
#include <string>

namespace hmt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A prefix left the interior of the moment space, so bounds or canonical
/// moments are undefined.
class DegeneratePrefix : public Error {
 public:
  explicit DegeneratePrefix(int order)
      : Error("moment prefix is not interior at order " + std::to_string(order)), order_(order) {}
  [[nodiscard]] int order() const { return order_; }

 private:
  int order_;
};

class PrecisionInsufficient : public Error {
 public:
  PrecisionInsufficient(int have, int need)
      : Error("working precision " + std::to_string(have) + " digits, need " + std::to_string(need)),
        have_(have),
        need_(need) {}
  [[nodiscard]] int have() const { return have_; }
  [[nodiscard]] int need() const { return need_; }

 private:
  int have_;
  int need_;
};

class WeightSumError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class Degenerate : public Error {
 public:
  using Error::Error;
};

class InfeasibleMoments : public Error {
 public:
  using Error::Error;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

/// An iterative solver stopped without meeting its tolerance.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double residual) : Error(what), residual_(residual) {}
  [[nodiscard]] double residual() const { return residual_; }

 private:
  double residual_;
};

class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double condition) : Error(what), condition_(condition) {}
  [[nodiscard]] double condition() const { return condition_; }

 private:
  double condition_;
};

/// The next parameter pair would need more than the allowed number of
/// sample points; carries the last pair that was evaluated.
class MemoryGuardError : public Error {
 public:
  MemoryGuardError(double ds, double upsilon, double points)
      : Error("sample count " + std::to_string(points) + " exceeds the memory guard"),
        ds_(ds),
        upsilon_(upsilon) {}
  [[nodiscard]] double ds() const { return ds_; }
  [[nodiscard]] double upsilon() const { return upsilon_; }

 private:
  double ds_;
  double upsilon_;
};

}  // namespace hmt
