#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nhj/dynamics.hpp"
#include "nhj/integrate.hpp"
#include "nhj/system.hpp"

namespace nhj {

/// The kinetic system (Q, g_e = (e - V) g, D) on the region {e > V}.
/// Same frame, zero potential. Metric evaluation throws HillBoundary outside
/// the region.
SystemDefinition jacobi_system(const SystemDefinition& sys, double e,
                               double hill_epsilon = kHillEpsilon);

// A covector on the energy shell S_e*: 1/2 g^{ab} p_a p_b = e - V(q).
struct EnergyShellPoint {
  Vec q;
  Vec p;
};

/// Rescales the momentum direction `p_direction` onto the shell over q.
EnergyShellPoint make_shell_point(const SystemDefinition& sys, double e, const Vec& q,
                                  const Vec& p_direction);

/// |1/2 g^{ab} p_a p_b - (e - V(q))|.
double shell_defect(const SystemDefinition& sys, double e, const Vec& q, const Vec& p);

/// Throws NotOnSphere when the shell defect exceeds tol * max(1, e - V).
void require_on_shell(const SystemDefinition& sys, double e, const EnergyShellPoint& pt,
                      double tol = 1e-10);

/// P_q(v) = sqrt(2(e - V(q))) v / ||v||_g: the energy-e velocity along v.
Vec project_P(const SystemDefinition& sys, double e, const Vec& q, const Vec& v);

/// Q_q(v) = sqrt(2 / (e - V(q))) v / ||v||_g: the unit-Jacobi-energy velocity along v.
Vec project_Q(const SystemDefinition& sys, double e, const Vec& q, const Vec& v);

/// Psi_q(v) = v / (e - V(q)), defined on the image sphere of P_q.
/// Throws NotOnSphere when ||v||_g misses sqrt(2(e - V)) by more than 1e-9 relative.
Vec psi(const SystemDefinition& sys, double e, const Vec& q, const Vec& v);

struct Reparametrization {
  std::vector<double> s;       // mechanical times
  std::vector<double> h;       // h(s), h(0) = 0
  std::vector<double> rate;    // e - V(c(s)) at each sample
  double max_rate_residual = 0.0;  // sup |dh/ds - (e - V(c(s)))| on the grid
};

/// Solves dh/ds = e - V(c(s)), h(0) = 0 along an integrated mechanical
/// trajectory by composite Simpson quadrature on its sample grid.
/// Throws HillBoundary when e - V reaches the Hill boundary at a sample.
Reparametrization reparametrization(const SystemDefinition& sys, double e,
                                    const Trajectory& mechanical);

/// The inverse map s(tau) along a Jacobi-kinetic trajectory, from
/// ds/dtau = 1 / (e - V(c_e(tau))).
Reparametrization inverse_reparametrization(const SystemDefinition& sys, double e,
                                            const Trajectory& kinetic);

/// Cumulative integral of samples f over the (possibly non-uniform) grid x:
/// composite Simpson on interval pairs; odd nodes close with the quadratic
/// through the neighbouring pair.
std::vector<double> cumulative_simpson(const std::vector<double>& x, const std::vector<double>& f);

/// Derivative of samples f on grid x by five-point Fornberg stencils.
std::vector<double> five_point_derivative(const std::vector<double>& x,
                                          const std::vector<double>& f);

struct VerifyOptions {
  IntegratorOptions integrator;
  double tol = 1e-6;
};

struct VerificationReport {
  std::string system;
  double e = 0.0;
  Vec q0;
  Vec v_q;
  Vec mechanical_velocity;  // P_q(v_q)
  Vec kinetic_velocity;     // Q_q(v_q)
  std::vector<double> s_grid;
  std::vector<double> h_samples;
  double max_position_deviation = 0.0;
  double max_h_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  Vec mechanical_endpoint;
  Vec kinetic_endpoint;
};

/// Integrates the mechanical leg from P_q(v) and the Jacobi-kinetic leg from
/// Q_q(v), reparametrizes, and compares c_P(s) with c_Q(h(s)) on the
/// mechanical sample grid. Leg failures are rethrown with the leg named.
VerificationReport verify_maupertuis(const SystemDefinition& sys, double e, const Vec& q,
                                     const Vec& v, double s_end, const VerifyOptions& opts);

/// Same comparison with a caller-supplied mechanical trajectory (for example
/// a closed-form one sampled on a grid).
VerificationReport verify_against_mechanical(const SystemDefinition& sys, double e,
                                             const Trajectory& mechanical,
                                             const VerifyOptions& opts);

/// ||(e - V) X_{g_e} - X_{(g,V,D)}|| / ||X_{(g,V,D)}|| over the full (q', p') vector.
double reeb_ratio_check(const SystemDefinition& sys, double e, const EnergyShellPoint& pt);

struct ContactPairing {
  double kinetic = 0.0;     // 1/2 p_a y^a for the Jacobi-kinetic field: 1 on the shell
  double mechanical = 0.0;  // 1/2 p_a y^a for the mechanical field: e - V(q) on the shell
};

ContactPairing contact_pairing(const SystemDefinition& sys, double e, const EnergyShellPoint& pt);

}  // namespace nhj
