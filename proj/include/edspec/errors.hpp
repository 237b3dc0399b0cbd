#pragma once

#include <stdexcept>
#include <string>

namespace edspec {

/// Bad or inconsistent user-supplied configuration (CLI exit code 2).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested analysis cannot run at the configured sizes (CLI exit code 3).
class feasibility_error : public std::runtime_error {
 public:
  explicit feasibility_error(const std::string& what) : std::runtime_error(what) {}
};

/// Too few samples / levels / bins for a statistical estimate.
class insufficient_data_error : public feasibility_error {
 public:
  explicit insufficient_data_error(const std::string& what) : feasibility_error(what) {}
};

/// Numerical failure at run time (CLI exit code 4).
class computation_error : public std::runtime_error {
 public:
  explicit computation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edspec
