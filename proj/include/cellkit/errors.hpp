#pragma once

#include <stdexcept>
#include <string>

namespace cellkit {

// Malformed group spec, subset spec, Cayley file or config.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A user-supplied Cayley table that is not a group.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Refusal to build or enumerate beyond a configured size limit.
class cap_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (mixing groups, empty input, ...).
class contract_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cellkit
