#pragma once

#include <stdexcept>
#include <string>

namespace seal {

// Error taxonomy shared across the library. The CLI maps these onto
// distinct exit codes.
struct dim_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct usage_error : std::logic_error {
  using std::logic_error::logic_error;
};

struct index_error : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace seal
