#pragma once

#include <stdexcept>

namespace opk {

// Error taxonomy shared by the whole library.  The CLI maps these onto
// process exit codes: config_error -> 2, the numerical failures -> 3.
struct invalid_parameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct out_of_domain : std::domain_error {
  using std::domain_error::domain_error;
};

struct truncation_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct evaluation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct membership_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace opk
