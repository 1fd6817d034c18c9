#pragma once

#include <stdexcept>
#include <string>

namespace hawkes {

/// Raised when a conditional intensity at an event is nonpositive or not
/// finite, which signals invalid parameters or a corrupted sequence.
struct NonFiniteLikelihood : std::runtime_error {
  explicit NonFiniteLikelihood(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised by the simulator when the event count exceeds the hard cap
/// (supercritical parameters).
struct SimulationCapExceeded : std::runtime_error {
  explicit SimulationCapExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  long line;
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

struct EmptySplit : std::runtime_error {
  explicit EmptySplit(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateTruth : std::runtime_error {
  explicit DegenerateTruth(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace hawkes
