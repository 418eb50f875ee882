#include "nhk/error.hpp"

namespace nhk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::SingularConstraintGram: return "SingularConstraintGram";
    case ErrorKind::SingularInertia: return "SingularInertia";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::ZeroMultiplier: return "ZeroMultiplier";
    case ErrorKind::DegenerateAlmostSymplectic: return "DegenerateAlmostSymplectic";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::InvalidConstants: return "InvalidConstants";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::NotBasic: return "NotBasic";
    case ErrorKind::WrongLevel: return "WrongLevel";
    case ErrorKind::NotOnConstraintManifold: return "NotOnConstraintManifold";
    case ErrorKind::Configuration: return "Configuration";
  }
  return "Unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace nhk
