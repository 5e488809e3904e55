#pragma once

#include <stdexcept>
#include <string>

namespace fsel {

// Exit-code classes used by the command-line front end: ConfigError -> 2,
// DataError -> 3, SolverError -> 4.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fsel
