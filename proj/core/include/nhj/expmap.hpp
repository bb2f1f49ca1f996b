#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nhj/errors.hpp"
#include "nhj/integrate.hpp"
#include "nhj/system.hpp"
#include "nhj/types.hpp"

namespace nhj {

// Which flow an exponential map is built from.
enum class ExpKind {
  kinetic,          // V must be constant: exp^nh_q(v) = c_v(1)
  jacobi,           // kinetic flow of the Jacobi metric at energy e: exp^{nh,e}_q
  mechanical_flow,  // time-1 map of the mechanical flow (closed-form inverse on the disks)
};

std::string to_string(ExpKind kind);
ExpKind parse_exp_kind(const std::string& name);

struct ExpOptions {
  ExpKind kind = ExpKind::kinetic;
  double energy = 0.0;  // used by ExpKind::jacobi
  IntegratorOptions integrator;
  double ball_epsilon = 0.5;  // soft radius sqrt(2 eps / (e - V(q))) for exp^{nh,e}
};

/// Endpoint at time t of the kinetic trajectory from (q, v).
/// Throws NotKinetic unless the potential is constant, NotInDistribution
/// when v leaves D_q.
Vec exp_nh(const SystemDefinition& sys, const Vec& q, const Vec& v, double t,
           const IntegratorOptions& opts);

struct MechanicalExpResult {
  Vec point;
  bool ball_exceeded = false;  // warning only: |v|_g exceeded the configured ball
};

/// Time-1 endpoint of the Jacobi-kinetic flow from v in D_q.
MechanicalExpResult exp_nh_mech(const SystemDefinition& sys, double e, const Vec& q, const Vec& v,
                                const IntegratorOptions& opts, double ball_epsilon = 0.5);

/// Position at time t of the mechanical trajectory with initial velocity v.
Vec flow_endpoint(const SystemDefinition& sys, const Vec& q, const Vec& v, double t,
                  const IntegratorOptions& opts);

/// Dispatches on opts.kind (time 1).
Vec exp_point(const SystemDefinition& sys, const Vec& q, const Vec& v, const ExpOptions& opts);

struct DifferentialDefect {
  Mat matrix;  // central-difference differential at 0, in the chosen basis of D_q
  double defect = 0.0;  // max |matrix - I|
};

/// Central differences of exp at 0_q along the columns of `basis` (frame
/// coordinates, m x k; the frame itself when empty), expressed back in that
/// basis. For the kinetic and Jacobi maps this should be the identity.
DifferentialDefect differential_at_zero(const SystemDefinition& sys, const Vec& q,
                                        const ExpOptions& opts, double delta,
                                        const Mat& basis = Mat());

struct ExpGridRow {
  std::size_t direction = 0;
  std::size_t radius_index = 0;
  double radius = 0.0;
  Vec point;
};

struct ExpGridFailure {
  std::size_t direction = 0;
  double radius = 0.0;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};

struct ExpGrid {
  std::string system;
  Vec q;
  ExpKind kind = ExpKind::kinetic;
  std::optional<double> energy;
  std::vector<Vec> directions;  // frame coordinates, unit in g
  std::vector<double> radii;
  std::vector<ExpGridRow> rows;  // direction-major
  std::vector<ExpGridFailure> failures;
  std::size_t ball_warnings = 0;
};

/// Samples exp over directions x radii. Directions are frame coordinates
/// and must be g-unit; radii must be non-negative and ascending. Failing
/// cells are recorded and skipped.
ExpGrid exp_grid(const SystemDefinition& sys, const Vec& q, const ExpOptions& opts,
                 const std::vector<Vec>& directions, const std::vector<double>& radii);

/// Evenly spaced g-unit directions in D_q for m = 2 (angle k 2pi / count in
/// a g-orthonormalized frame basis).
std::vector<Vec> planar_unit_directions(const SystemDefinition& sys, const Vec& q,
                                        std::size_t count);

enum class DiskVariant { harmonic, linear };

/// Parses "disk-harmonic" / "disk-linear"; throws RestrictedDomain otherwise.
DiskVariant disk_variant(const std::string& system_name);

/// Closed-form inverse of the disk's time-1 mechanical map:
///   harmonic: (theta - theta0, (phi - phi0 cos 1) / sin 1)
///   linear:   (theta - theta0, phi - phi0 + 1/2)
Eigen::Vector2d disk_inverse_exp(DiskVariant variant, const Vec& q0, const Vec& point);

struct GaussCheckReport {
  double flat_gauss_defect = 0.0;  // |G0(v)(v, w) - G0(0)(v, w)| for the flat metric
  double max_line_deviation = 0.0; // sup |R(exp(t v)) - t (Omega, omega)|
  std::size_t samples = 0;
};

/// Pulls the flat metric on (Omega, omega) back through the closed-form
/// inverse and checks that radial curves t -> exp(t v) are straight lines
/// through the origin. Throws RestrictedDomain outside the disk variants.
GaussCheckReport gauss_pullback_check(const SystemDefinition& sys, const Vec& q0,
                                      const std::vector<Eigen::Vector2d>& velocities,
                                      const std::vector<double>& scales,
                                      const IntegratorOptions& opts);

}  // namespace nhj
