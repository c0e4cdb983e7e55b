#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cellcov {

/// A query needed more points than the pattern contains.
class InsufficientPointsError : public std::runtime_error {
 public:
  explicit InsufficientPointsError(const std::string& what) : std::runtime_error(what) {}
};

/// Rejection sampling gave up before producing an accepted draw.
class SamplingFailureError : public std::runtime_error {
 public:
  SamplingFailureError(const std::string& what, std::uint64_t attempts)
      : std::runtime_error(what), attempts_(attempts) {}

  std::uint64_t attempts() const noexcept { return attempts_; }

 private:
  std::uint64_t attempts_;
};

/// A scenario is unusable as configured (e.g. the pattern regeneration limit was hit).
class ConfigurationError : public std::runtime_error {
 public:
  explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cellcov
