#pragma once

#include <stdexcept>
#include <string>

namespace rcnwave {

enum class ErrorCode {
  NonIntegrableAtEndpoint,
  OutOfDomain,
  OutOfRange,
  ZeroW,
  InfeasibleCertificate,
  ProfileViolatesZeroAtOrigin,
  SupportOutsideWindow,
  CoverageGap,
  DegenerateCell,
  BlowUp,
  NonFiniteValue,
  IndefiniteForm,
  OnHorizon,
  OutOfBranch,
  WrongCase,
  EqualLevels,
  Schema,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& what)
      : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rcnwave
