#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nhj {

// Reason codes. The CLI prints these verbatim, so the spelling is part of the
// machine-readable interface.
enum class ErrorCode {
  FrameDegenerate,
  MetricSingular,
  JacobianUnavailable,
  HillBoundary,
  StepUnderflow,
  NotInDistribution,
  ZeroVector,
  NotOnSphere,
  NotKinetic,
  UnknownSystem,
  NoAnalyticSolution,
  NoAnalyticH,
  RestrictedDomain,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<double> time = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }
  // Integration time at which a field evaluation failed, when known.
  const std::optional<double>& time() const noexcept { return time_; }

  Error at_time(double t) const;
  Error with_context(std::string_view prefix) const;

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<double> time_;
};

}  // namespace nhj
