#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adpdtc {

/// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hilbert-space dimension exceeds the configured cap.
class DimensionOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spectrum whose real part sums to a non-positive value has no rms width.
class DegenerateSpectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pulse-sequence text could not be parsed. `position` is a byte offset into
/// the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A symbol was referenced during expansion without a binding.
class UnboundSymbol : public std::runtime_error {
 public:
  explicit UnboundSymbol(const std::string& name)
      : std::runtime_error("unbound symbol '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adpdtc
