#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nhj/system.hpp"
#include "nhj/types.hpp"

namespace nhj {

// Built-in example systems.
//
//   particle-r3-linear  unit-mass particle in R^3, constraint z' = y x', V = z
//   disk-harmonic       vertical rolling disk (x, y, theta, phi), V = phi^2 / 2
//   disk-linear         vertical rolling disk, V = phi
//   disk-free           vertical rolling disk, V = 0
//
// The disks use the frame {cos(phi) d/dx + sin(phi) d/dy + d/dtheta, d/dphi},
// whose frame coordinates (Omega, omega) are the initial angular velocities.
struct BuiltinSystem {
  std::string name;
  SystemDefinition definition;
  bool has_analytic = false;
  bool has_analytic_h = false;
  std::string description;
};

std::vector<std::string> builtin_names();

/// Throws UnknownSystem.
BuiltinSystem builtin(std::string_view name);

struct AnalyticState {
  Vec q;  // (x, y, theta, phi)
  Vec v;  // its time derivative
};

/// Closed-form disk motion from q0 with frame velocities (Omega, omega):
/// theta = Omega t + theta0 and phi(t) per potential; x and y are the
/// integrals of Omega (cos phi, sin phi), evaluated by adaptive
/// Gauss-Kronrod quadrature to 1e-12. Throws NoAnalyticSolution for
/// systems without a closed form.
AnalyticState analytic_state(std::string_view name, const Vec& q0, double Omega, double omega,
                             double t);

/// Closed-form reparametrization h(s) = integral_0^s (e - V(phi(u))) du for
/// the disk with steering potential. Throws NoAnalyticH.
double analytic_h(std::string_view name, double e, double phi0, double omega, double s);

}  // namespace nhj
