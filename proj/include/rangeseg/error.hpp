// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_ERROR_HPP
#define RANGESEG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rangeseg {

/// Malformed bytes or text: wrong length, bad header, unparsable line.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Well-formed input whose content violates a contract (non-finite value,
/// zero-range point, misaligned arrays).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Parameter values outside their documented ranges throw
// std::invalid_argument.

}  // namespace rangeseg

#endif  // RANGESEG_ERROR_HPP
