#pragma once

#include <functional>

#include "nhj/system.hpp"
#include "nhj/types.hpp"

namespace nhj {

// Default distance from the zero-velocity surface below which Jacobi
// quantities are refused.
inline constexpr double kHillEpsilon = 1e-8;

// A point (q^i, p_a) of the constrained phase space D*, stamped with a time.
// Momenta are components in the dual of the distribution frame, so the
// constraint holds identically.
struct AdaptedState {
  double t = 0.0;
  Vec q;
  Vec p;
};

// Time derivative of an adapted state.
struct PhaseVelocity {
  Vec q_dot;
  Vec p_dot;
};

using PhaseField = std::function<PhaseVelocity(const AdaptedState&)>;

/// Nonholonomic mechanical equations in adapted coordinates:
///   q'^i = X^i_b g^{ab} p_a
///   p'_a = -C_ab^c g^{bd} p_c p_d - X^i_a (1/2 dg^{cb}/dq^i p_c p_b + dV/dq^i)
PhaseVelocity mechanical_field(const SystemDefinition& sys, const AdaptedState& state);

/// Kinetic equations of the Jacobi co-metric g^# / (e - V) on the same
/// distribution. Throws HillBoundary when e - V(q) <= hill_epsilon.
PhaseVelocity jacobi_field(const SystemDefinition& sys, double e, const AdaptedState& state,
                           double hill_epsilon = kHillEpsilon);

PhaseField make_mechanical_field(const SystemDefinition& sys);
PhaseField make_jacobi_field(const SystemDefinition& sys, double e,
                             double hill_epsilon = kHillEpsilon);

/// 1/2 g^{ab} p_a p_b + V(q).
double energy(const SystemDefinition& sys, const AdaptedState& state);

/// 1/(2(e - V)) g^{ab} p_a p_b.
double jacobi_energy(const SystemDefinition& sys, double e, const AdaptedState& state,
                     double hill_epsilon = kHillEpsilon);

/// v = X_b g^{ab} p_a.
Vec velocity_from_momenta(const SystemDefinition& sys, const Vec& q, const Vec& p);

/// p_a = g_ab y^b for v = y^a X_a. Throws NotInDistribution when the
/// G-norm of the component of v outside D_q exceeds rel_tol * ||v||_G.
Vec momenta_from_velocity(const SystemDefinition& sys, const Vec& q, const Vec& v,
                          double rel_tol = 1e-9);

/// Frame coefficients y^a of v in D_q (least squares, no constraint check).
Vec frame_coordinates(const SystemDefinition& sys, const Vec& q, const Vec& v);

/// ||(I - P(q)) v||_G.
double constraint_residual(const SystemDefinition& sys, const Vec& q, const Vec& v);

/// ||v||_G.
double metric_norm(const SystemDefinition& sys, const Vec& q, const Vec& v);

/// Throws HillBoundary unless e - V(q) > hill_epsilon; returns e - V(q).
double hill_gap(const SystemDefinition& sys, double e, const Vec& q,
                double hill_epsilon = kHillEpsilon);

// The pieces of the right-hand side of the adapted equations, kept apart so
// the mechanical and Jacobi fields (and the Reeb identity between them) are
// assembled from the same quantities.
struct FieldTerms {
  Vec base_velocity;   // X^i_b g^{ab} p_a
  Vec bracket_term;    // -C_ab^c g^{bd} p_c p_d
  Vec metric_term;     // -X^i_a 1/2 dg^{cb}/dq^i p_c p_b
  Vec potential_term;  // -X^i_a dV/dq^i
  double momentum_norm2 = 0.0;  // g^{ab} p_a p_b
  double potential = 0.0;       // V(q)
};

FieldTerms field_terms(const SystemDefinition& sys, const Vec& q, const Vec& p);

}  // namespace nhj
