#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nhj/integrate.hpp"
#include "nhj/system.hpp"
#include "nhj/types.hpp"

namespace nhj::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIntegration = 3;

// Parameters shared by all subcommands. Filled from an optional JSON config
// file (keys are the long flag names without dashes, e.g. "t-end"), then
// overridden by command-line flags.
struct RunConfig {
  std::string system = "disk-harmonic";  // builtin name or path to a system file
  std::optional<double> energy;
  std::optional<Vec> q0;
  std::optional<Vec> v0;  // velocity in chart coordinates
  std::optional<Vec> y0;  // velocity in frame coordinates
  double t_end = 1.0;
  Method method = Method::rk4;
  double step = 1e-3;
  double integrator_tol = 1e-10;  // rkf45 abs and rel tolerance
  double verify_tol = 1e-6;
  std::string format;  // csv | json (per-command default when empty)
  std::string out;     // empty: stdout
  std::uint64_t seed = 0;
  std::string mode = "kinetic";  // expmap: kinetic | jacobi | mechanical
  std::size_t directions = 8;
  std::vector<double> radii = {0.0, 0.25, 0.5, 0.75, 1.0};
  bool wrap_angles = true;
};

/// Builtin name or system-file path to a definition; throws UnknownSystem
/// or ParseError.
SystemDefinition resolve_system(const std::string& spec);

/// Applies keys from a JSON config document onto cfg; throws ParseError.
void apply_config_json(RunConfig& cfg, const std::string& json_text);

/// Comma-separated list of numbers; throws ParseError.
std::vector<double> parse_list(const std::string& text);

int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_verify_maupertuis(const RunConfig& cfg, std::ostream& out);
int cmd_expmap(const RunConfig& cfg, std::ostream& out);
int cmd_list_systems(std::ostream& out);

/// Full command-line entry point. Errors print one line to `err`:
///   error: <ReasonCode>: <message>
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhj::cli
