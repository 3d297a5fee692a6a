#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bqs {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadratic form has a non-positive eigenvalue (or is otherwise unusable
/// as an elliptic symbol).
struct NotElliptic : Error {
  using Error::Error;
};

/// Two fields (or a field and a grid) that must live on the same lattice
/// do not.
struct GridMismatch : Error {
  using Error::Error;
};

/// Operation received a field on the wrong side (physical vs spectral).
struct SideMismatch : Error {
  using Error::Error;
};

/// Scenario file could not be parsed or failed validation.  `line` is the
/// 1-based line of a parse error (-1 when not line-specific); `key` names
/// the offending setting when known.
struct ConfigError : Error {
  ConfigError(const std::string& what, int line_ = -1, std::string key_ = {})
      : Error(what), line(line_), key(std::move(key_)) {}
  int line = -1;
  std::string key;
};

/// A solver produced a NaN or Inf sample.  `time_index` locates the first
/// bad time level.
struct NonFinite : Error {
  NonFinite(const std::string& what, int time_index_)
      : Error(what), time_index(time_index_) {}
  int time_index = -1;
};

/// Fixed-point iteration hit its iteration cap before meeting tolerance.
/// Carries the successive-difference ratios observed so far.
struct MaxItersExceeded : Error {
  MaxItersExceeded(const std::string& what, std::vector<double> ratios)
      : Error(what), ratio_history(std::move(ratios)) {}
  std::vector<double> ratio_history;
};

}  // namespace bqs
