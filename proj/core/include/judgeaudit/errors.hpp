#pragma once

#include <stdexcept>

namespace judgeaudit {

/// Malformed input: dataset lines, templates, flag values.
class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A statistic is undefined on the given data (zero variance, too few points).
class DegenerateDistributionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical machinery failed (non-convergent continued fraction, invalid
/// domain, non-finite input).
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// HTTP judge failure after the retry budget was spent.
class TransportError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Replay cache has no entry for the requested (example, config) pair.
class CacheMissError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace judgeaudit
