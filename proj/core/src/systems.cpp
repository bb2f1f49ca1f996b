#include "nhj/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nhj/errors.hpp"

namespace nhj {

namespace {

constexpr std::string_view kParticle = "particle-r3-linear";
constexpr std::string_view kDiskHarmonic = "disk-harmonic";
constexpr std::string_view kDiskLinear = "disk-linear";
constexpr std::string_view kDiskFree = "disk-free";

SystemDefinition particle_r3() {
  SystemDefinition s;
  s.name = std::string(kParticle);
  s.n = 3;
  s.m = 2;
  s.metric = [](const Vec&) -> Mat { return Mat::Identity(3, 3); };
  s.metric_constant = true;
  s.potential = [](const Vec& q) { return q[2]; };
  s.potential_gradient = [](const Vec&) -> Vec { return Eigen::Vector3d(0.0, 0.0, 1.0); };
  s.frame = [](const Vec& q) -> Mat {
    Mat X(3, 2);
    X << 1.0, 0.0,
         0.0, 1.0,
         q[1], 0.0;
    return X;
  };
  s.frame_jacobians = [](const Vec&) {
    std::vector<Mat> J(2, Mat::Zero(3, 3));
    J[0](2, 1) = 1.0;  // d(y)/dy in the z-row of X_1
    return J;
  };
  return s;
}

enum class SteeringPotential { harmonic, linear, none };

SystemDefinition rolling_disk(std::string_view name, SteeringPotential kind) {
  SystemDefinition s;
  s.name = std::string(name);
  s.n = 4;
  s.m = 2;
  s.metric = [](const Vec&) -> Mat { return Mat::Identity(4, 4); };
  s.metric_constant = true;
  switch (kind) {
    case SteeringPotential::harmonic:
      s.potential = [](const Vec& q) { return 0.5 * q[3] * q[3]; };
      s.potential_gradient = [](const Vec& q) -> Vec { return Eigen::Vector4d(0, 0, 0, q[3]); };
      break;
    case SteeringPotential::linear:
      s.potential = [](const Vec& q) { return q[3]; };
      s.potential_gradient = [](const Vec&) -> Vec { return Eigen::Vector4d(0, 0, 0, 1); };
      break;
    case SteeringPotential::none:
      s.potential = [](const Vec&) { return 0.0; };
      s.potential_gradient = [](const Vec&) -> Vec { return Vec::Zero(4); };
      s.potential_constant = true;
      break;
  }
  s.frame = [](const Vec& q) -> Mat {
    Mat X(4, 2);
    X << std::cos(q[3]), 0.0,
         std::sin(q[3]), 0.0,
         1.0, 0.0,
         0.0, 1.0;
    return X;
  };
  s.frame_jacobians = [](const Vec& q) {
    std::vector<Mat> J(2, Mat::Zero(4, 4));
    J[0](0, 3) = -std::sin(q[3]);
    J[0](1, 3) = std::cos(q[3]);
    return J;
  };
  s.bounds.resize(4);
  s.bounds[2].periodic = true;
  s.bounds[3].periodic = true;
  return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {std::string(kParticle), std::string(kDiskHarmonic), std::string(kDiskLinear),
          std::string(kDiskFree)};
}

BuiltinSystem builtin(std::string_view name) {
  if (name == kParticle) {
    return {std::string(name), particle_r3(), false, false,
            "particle in R^3 with constraint z' = y x' and potential V = z"};
  }
  if (name == kDiskHarmonic) {
    return {std::string(name), rolling_disk(name, SteeringPotential::harmonic), true, true,
            "vertical rolling disk with V = phi^2/2"};
  }
  if (name == kDiskLinear) {
    return {std::string(name), rolling_disk(name, SteeringPotential::linear), true, true,
            "vertical rolling disk with V = phi"};
  }
  if (name == kDiskFree) {
    return {std::string(name), rolling_disk(name, SteeringPotential::none), true, false,
            "vertical rolling disk without potential"};
  }
  throw Error(ErrorCode::UnknownSystem, "no built-in system named '" + std::string(name) + "'");
}

namespace {

struct SteeringMotion {
  double phi;
  double phi_dot;
};

SteeringMotion steering(std::string_view name, double phi0, double omega, double t) {
  if (name == kDiskHarmonic) {
    return {phi0 * std::cos(t) + omega * std::sin(t), -phi0 * std::sin(t) + omega * std::cos(t)};
  }
  if (name == kDiskLinear) return {omega * t + phi0 - 0.5 * t * t, omega - t};
  if (name == kDiskFree) return {phi0 + omega * t, omega};
  if (name == kParticle) {
    throw Error(ErrorCode::NoAnalyticSolution, "particle-r3-linear has no closed-form solution");
  }
  throw Error(ErrorCode::UnknownSystem, "no built-in system named '" + std::string(name) + "'");
}

}  // namespace

AnalyticState analytic_state(std::string_view name, const Vec& q0, double Omega, double omega,
                             double t) {
  const SteeringMotion at_t = steering(name, q0.size() == 4 ? q0[3] : 0.0, omega, t);
  if (q0.size() != 4) throw Error(ErrorCode::InvalidArgument, "disk state needs 4 coordinates");

  double ix = 0.0;
  double iy = 0.0;
  if (t != 0.0) {
    using boost::math::quadrature::gauss_kronrod;
    auto phi = [&](double u) { return steering(name, q0[3], omega, u).phi; };
    const double lo = std::min(0.0, t);
    const double hi = std::max(0.0, t);
    const double sign = t > 0 ? 1.0 : -1.0;
    ix = sign * gauss_kronrod<double, 31>::integrate(
                    [&](double u) { return std::cos(phi(u)); }, lo, hi, 6, 1e-14);
    iy = sign * gauss_kronrod<double, 31>::integrate(
                    [&](double u) { return std::sin(phi(u)); }, lo, hi, 6, 1e-14);
  }
  AnalyticState s{Vec(4), Vec(4)};
  s.q << q0[0] + Omega * ix, q0[1] + Omega * iy, q0[2] + Omega * t, at_t.phi;
  s.v << Omega * std::cos(at_t.phi), Omega * std::sin(at_t.phi), Omega, at_t.phi_dot;
  return s;
}

double analytic_h(std::string_view name, double e, double phi0, double omega, double s) {
  if (name == kDiskLinear) {
    return e * s + s * s * s / 6.0 - omega * s * s / 2.0 - phi0 * s;
  }
  if (name == kDiskHarmonic) {
    const double cs = std::cos(s) * std::sin(s);
    const double s2 = std::sin(s) * std::sin(s);
    return e * s - 0.5 * ((phi0 * phi0 - omega * omega) * cs / 2.0 +
                          (phi0 * phi0 + omega * omega) * s / 2.0 + phi0 * omega * s2);
  }
  throw Error(ErrorCode::NoAnalyticH, "no closed-form h for '" + std::string(name) + "'");
}

}  // namespace nhj
