#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace singlab {

enum class Errc {
  InvalidInput,
  UndecidableComparison,
  GradeOverflow,
  DimensionTooLarge,
  RationalDegenerate,
  BoxOverflow,
  SingularB,
  CertificateInvalid,
  NotApplicable,
  HorizonMismatch,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidInput: return "INVALID_INPUT";
    case Errc::UndecidableComparison: return "UNDECIDABLE_COMPARISON";
    case Errc::GradeOverflow: return "GRADE_OVERFLOW";
    case Errc::DimensionTooLarge: return "DIMENSION_TOO_LARGE";
    case Errc::RationalDegenerate: return "RATIONAL_DEGENERATE";
    case Errc::BoxOverflow: return "BOX_OVERFLOW";
    case Errc::SingularB: return "SINGULAR_B";
    case Errc::CertificateInvalid: return "CERTIFICATE_INVALID";
    case Errc::NotApplicable: return "NOT_APPLICABLE";
    case Errc::HorizonMismatch: return "HORIZON_MISMATCH";
  }
  return "UNKNOWN";
}

/// Every failure the library reports carries one of the codes above; the
/// CLI maps budget codes to exit status 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace singlab
