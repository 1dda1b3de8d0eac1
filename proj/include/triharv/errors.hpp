#pragma once

#include <stdexcept>
#include <string>

namespace triharv {

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument("dimension mismatch: " + what) {}
};

struct StepOutOfRange : std::invalid_argument {
  explicit StepOutOfRange(const std::string& what)
      : std::invalid_argument("step out of range: " + what) {}
};

struct ShapeMismatch : std::invalid_argument {
  explicit ShapeMismatch(const std::string& what)
      : std::invalid_argument("shape mismatch: " + what) {}
};

struct EmptyPointSet : std::invalid_argument {
  EmptyPointSet() : std::invalid_argument("empty point set") {}
};

struct EmptyInput : std::invalid_argument {
  EmptyInput() : std::invalid_argument("empty input") {}
};

struct KExceedsPoints : std::invalid_argument {
  explicit KExceedsPoints(const std::string& what)
      : std::invalid_argument("k exceeds point count: " + what) {}
};

struct UnknownChain : std::invalid_argument {
  explicit UnknownChain(const std::string& name)
      : std::invalid_argument("unknown chain: " + name) {}
};

struct InvalidScenario : std::invalid_argument {
  explicit InvalidScenario(const std::string& what)
      : std::invalid_argument("invalid scenario: " + what) {}
};

struct IllegalTransition : std::logic_error {
  explicit IllegalTransition(const std::string& what)
      : std::logic_error("illegal mission transition: " + what) {}
};

struct InvalidConfig : std::invalid_argument {
  explicit InvalidConfig(const std::string& what)
      : std::invalid_argument("invalid config: " + what) {}
};

}  // namespace triharv
