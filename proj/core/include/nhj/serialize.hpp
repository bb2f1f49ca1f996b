#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nhj/expmap.hpp"
#include "nhj/integrate.hpp"
#include "nhj/maupertuis.hpp"
#include "nhj/systems.hpp"

namespace nhj {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Columns: t, q1..qn, p1..pm, energy, constraint_residual (of the velocity
/// reconstructed from the momenta). Periodic coordinates are wrapped into
/// [-pi, pi) when wrap_angles is set.
std::string trajectory_csv(const SystemDefinition& sys, const Trajectory& traj, bool wrap_angles);

std::string report_json(const VerificationReport& report);

/// Header: direction, radius, q1..qn. Rows in direction-major order.
std::string expgrid_csv(const ExpGrid& grid);
std::string expgrid_json(const ExpGrid& grid);

// Metadata printed by `nhj list-systems`.
struct SystemInfo {
  std::string name;
  int n = 0;
  int m = 0;
  bool has_analytic = false;
  std::string description;

  bool operator==(const SystemInfo&) const = default;
};

SystemInfo system_info(const BuiltinSystem& b);
std::string systems_json(const std::vector<SystemInfo>& systems);
/// Inverse of systems_json; throws ParseError.
std::vector<SystemInfo> parse_systems_json(std::string_view text);

}  // namespace nhj
