#pragma once

#include <stdexcept>
#include <string>

namespace simroc {

enum class ErrorCode {
  kInvalidInput = 1,
  kEmptySample,
  kNoPositivePairs,
  kNoNegativePairs,
  kEmptyClass,
  kInfeasible,
  kNumerical,
  kParameterDomain,
  kFormat,
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; the C API maps the
// code one-to-one onto rocsim_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace simroc
