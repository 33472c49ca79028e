#pragma once
#include <stdexcept>
#include <string>

namespace bohm {

// Bad user input: malformed configs, invalid grids, out-of-domain arguments.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Quadrature or root-finding that ran out of budget above tolerance.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bohm
