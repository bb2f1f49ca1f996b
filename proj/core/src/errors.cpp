#include "nhj/errors.hpp"

#include <sstream>

namespace nhj {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FrameDegenerate: return "FrameDegenerate";
    case ErrorCode::MetricSingular: return "MetricSingular";
    case ErrorCode::JacobianUnavailable: return "JacobianUnavailable";
    case ErrorCode::HillBoundary: return "HillBoundary";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NotInDistribution: return "NotInDistribution";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotOnSphere: return "NotOnSphere";
    case ErrorCode::NotKinetic: return "NotKinetic";
    case ErrorCode::UnknownSystem: return "UnknownSystem";
    case ErrorCode::NoAnalyticSolution: return "NoAnalyticSolution";
    case ErrorCode::NoAnalyticH: return "NoAnalyticH";
    case ErrorCode::RestrictedDomain: return "RestrictedDomain";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string format_what(ErrorCode code, const std::string& message,
                        const std::optional<double>& t) {
  std::ostringstream os;
  os << to_string(code) << ": " << message;
  if (t) os << " (t=" << *t << ")";
  return os.str();
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<double> time)
    : std::runtime_error(format_what(code, message, time)),
      code_(code),
      message_(message),
      time_(time) {}

Error Error::at_time(double t) const {
  if (time_) return *this;
  return Error(code_, message_, t);
}

Error Error::with_context(std::string_view prefix) const {
  return Error(code_, std::string(prefix) + ": " + message_, time_);
}

}  // namespace nhj
