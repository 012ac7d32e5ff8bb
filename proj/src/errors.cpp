#include "simroc/errors.hpp"

namespace simroc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kEmptySample: return "empty sample";
    case ErrorCode::kNoPositivePairs: return "no positive pairs";
    case ErrorCode::kNoNegativePairs: return "no negative pairs";
    case ErrorCode::kEmptyClass: return "empty class";
    case ErrorCode::kInfeasible: return "infeasible problem";
    case ErrorCode::kNumerical: return "numerical failure";
    case ErrorCode::kParameterDomain: return "parameter out of domain";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

}  // namespace simroc
