//==============================================================================
// errors.hpp
// Error taxonomy for the half-wave laboratory. The C++ core throws hw::Error;
// the C API translates it into status codes, the CLI into exit codes.
//==============================================================================
#pragma once

#include <stdexcept>
#include <string>

namespace hw {

enum class ErrorCode {
    invalid_argument,  // bad parameter, contract violation (grid mismatch, ...)
    io,                // filesystem problems
    format,            // malformed field/report files
    numerical,         // solver breakdown, non-convergence, NaN guard
    solvability,       // right-hand side not orthogonal to an operator kernel
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace hw
