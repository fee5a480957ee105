#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

enum class Errc {
  InvalidArgument,
  NonPrime,
  UnsupportedRealDim,
  ReduciblePoly,
  DivisionByNegligible,
  ScaleOutOfRange,
  EmptyInput,
  AlgebraMismatch,
  ScaleMismatch,
  BudgetExceeded,
  NoAdmissiblePairs,
  SingularMap,
  SubAlgebraTrapped,
  NotRealBase,
  RangeError,
  GenerationFailed,
  EmptyGraph,
  TrappedInput,
  ParseError,
  IoError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace dlab
