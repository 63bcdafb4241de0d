#ifndef RWALK_ERROR_HPP
#define RWALK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rwalk {

/// Malformed or inconsistent input data (CLI exit code 1).
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output location cannot be written.
class io_error : public input_error {
 public:
  using input_error::input_error;
};

/// A statistic is undefined for the data given, e.g. zero dispersion (CLI exit code 2).
class degenerate_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rwalk

#endif  // RWALK_ERROR_HPP
