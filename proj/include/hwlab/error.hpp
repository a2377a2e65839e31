#pragma once

#include <stdexcept>
#include <string>

namespace hwlab {

/// A caller violated an operation's precondition (bad sizes, parameters out of range, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced an unusable result (NaN, collapse, non-contraction, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace hwlab
