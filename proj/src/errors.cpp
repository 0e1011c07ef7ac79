#include "rcnwave/errors.hpp"

namespace rcnwave {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonIntegrableAtEndpoint: return "NonIntegrableAtEndpoint";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ZeroW: return "ZeroW";
    case ErrorCode::InfeasibleCertificate: return "InfeasibleCertificate";
    case ErrorCode::ProfileViolatesZeroAtOrigin: return "ProfileViolatesZeroAtOrigin";
    case ErrorCode::SupportOutsideWindow: return "SupportOutsideWindow";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IndefiniteForm: return "IndefiniteForm";
    case ErrorCode::OnHorizon: return "OnHorizon";
    case ErrorCode::OutOfBranch: return "OutOfBranch";
    case ErrorCode::WrongCase: return "WrongCase";
    case ErrorCode::EqualLevels: return "EqualLevels";
    case ErrorCode::Schema: return "SchemaError";
  }
  return "Error";
}

}  // namespace rcnwave
