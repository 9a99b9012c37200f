#pragma once

#include <stdexcept>
#include <string>

namespace trustsim {

// A runtime invariant of the model was breached (maps to CLI exit code 3).
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Bad scenario name, parameter key or value (maps to CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

class InvalidDeadline : public std::invalid_argument {
 public:
  explicit InvalidDeadline(const std::string& what) : std::invalid_argument(what) {}
};

class DuplicateEvent : public std::invalid_argument {
 public:
  explicit DuplicateEvent(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace trustsim
