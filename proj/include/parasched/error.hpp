#pragma once

#include <stdexcept>
#include <string>

namespace parasched {

enum class Errc {
  InvalidTask,
  CycleDetected,
  NonPositiveWcet,
  DeadlineExceedsPeriod,
  EmptyTaskSet,
  DegenerateWindow,
  InfeasibleLeftover,
  OracleTooLarge,
  CriticalPathExceedsDeadline,
  ParseError,
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace parasched
