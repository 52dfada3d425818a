#ifndef CAVMODE_ERRORS_HPP
#define CAVMODE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cavmode {

// Invalid argument / precondition violation; CLI exit code 1.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Tolerance or convergence failure of a numerical routine; CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed data fed to an algorithm (NaN/Inf entries, empty input).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace cavmode

#endif // CAVMODE_ERRORS_HPP
