#pragma once

#include <stdexcept>
#include <string>

namespace hypgauge {

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OutOfDisk : DomainError {
  using DomainError::DomainError;
};

struct PreconditionNotMet : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyIntersection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonInteriorStart : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonInteriorPoint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CoincidentPoints : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GateOrderInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroSurvivors : std::runtime_error {
  int stage;
  explicit ZeroSurvivors(int stage_index)
      : std::runtime_error("no survivors at splitting stage " + std::to_string(stage_index)),
        stage(stage_index) {}
};

struct Disconnected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridTooCoarse : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonRectilinear : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DepthTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InsufficientGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigParse : std::runtime_error {
  int line;
  ConfigParse(const std::string& what, int line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
};

}  // namespace hypgauge
