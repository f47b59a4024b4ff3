#ifndef BPLS_ERRORS_HPP
#define BPLS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bpls {

// Exit codes used by the CLI. Library code throws; the CLI maps
// exception categories onto these.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Validation-type failures (exit code 2).
struct InvalidParameter : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct ConstantColumn : Error {
  using Error::Error;
};
struct MissingColumn : Error {
  using Error::Error;
};
struct SchemaMismatch : Error {
  using Error::Error;
};
struct InvalidFolds : Error {
  using Error::Error;
};

// Numerical failures (exit code 3).
struct NotPositiveDefinite : Error {
  using Error::Error;
};
struct DegenerateInput : Error {
  using Error::Error;
};
struct DegenerateTrace : Error {
  using Error::Error;
};
struct SingularScores : Error {
  using Error::Error;
};
struct ConvergenceFailure : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct InsufficientChain : Error {
  using Error::Error;
};

// I/O failures (exit code 4).
struct IoError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace bpls

#endif  // BPLS_ERRORS_HPP
