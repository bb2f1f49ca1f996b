#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nhj/dynamics.hpp"
#include "nhj/errors.hpp"
#include "nhj/geometry.hpp"
#include "nhj/integrate.hpp"
#include "nhj/maupertuis.hpp"
#include "nhj/systems.hpp"
#include "oracles.hpp"

namespace nhj {
namespace {

TEST(Builtin, Names) {
  const auto names = builtin_names();
  ASSERT_EQ(names.size(), 4u);
  for (const auto& n : names) EXPECT_EQ(builtin(n).name, n);
}

TEST(Builtin, UnknownName) {
  try {
    builtin("chaplygin-sleigh");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSystem);
  }
}

TEST(Builtin, Dimensions) {
  EXPECT_EQ(builtin("disk-harmonic").definition.m, 2);
  EXPECT_EQ(builtin("disk-harmonic").definition.n, 4);
  EXPECT_EQ(builtin("particle-r3-linear").definition.n, 3);
  EXPECT_TRUE(builtin("disk-harmonic").has_analytic);
  EXPECT_TRUE(builtin("disk-linear").has_analytic_h);
  EXPECT_FALSE(builtin("particle-r3-linear").has_analytic);
  const auto& b = builtin("disk-linear").definition.bounds;
  ASSERT_EQ(b.size(), 4u);
  EXPECT_FALSE(b[0].periodic);
  EXPECT_TRUE(b[2].periodic);
  EXPECT_TRUE(b[3].periodic);
}

TEST(Builtin, Grams) {
  oracle::Sampler rng(71);
  for (int k = 0; k < 10; ++k) {
    const Vec qd = rng.point("disk-linear");
    EXPECT_LE((gram_at(builtin("disk-linear").definition, qd).gram -
               Mat(Eigen::Vector2d(2, 1).asDiagonal()))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-15);
    const Vec qp = rng.point("particle-r3-linear");
    EXPECT_LE((gram_at(builtin("particle-r3-linear").definition, qp).gram -
               Mat(Eigen::Vector2d(1 + qp[1] * qp[1], 1).asDiagonal()))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-15);
  }
}

TEST(Builtin, Potentials) {
  const Vec q = Eigen::Vector4d(1, 2, 3, 0.6);
  EXPECT_DOUBLE_EQ(builtin("disk-harmonic").definition.potential(q), 0.18);
  EXPECT_DOUBLE_EQ(builtin("disk-linear").definition.potential(q), 0.6);
  EXPECT_DOUBLE_EQ(builtin("disk-free").definition.potential(q), 0.0);
  EXPECT_DOUBLE_EQ(builtin("particle-r3-linear").definition.potential(Eigen::Vector3d(1, 2, -0.7)),
                   -0.7);
}

TEST(AnalyticState, HarmonicSpotValue) {
  const AnalyticState a = analytic_state("disk-harmonic", Vec::Zero(4), 1, 1, 1);
  EXPECT_DOUBLE_EQ(a.q[2], 1.0);
  EXPECT_DOUBLE_EQ(a.q[3], std::sin(1.0));
}

TEST(AnalyticState, LinearSpotValue) {
  const AnalyticState a = analytic_state("disk-linear", Vec::Zero(4), 1, 1, 1);
  EXPECT_DOUBLE_EQ(a.q[2], 1.0);
  EXPECT_DOUBLE_EQ(a.q[3], 0.5);
}

TEST(AnalyticState, TimeZeroIsInitialPoint) {
  const Vec q0 = Eigen::Vector4d(0.3, -0.2, 1.1, 0.4);
  for (const char* name : {"disk-harmonic", "disk-linear", "disk-free"}) {
    EXPECT_EQ(analytic_state(name, q0, 0.7, -0.3, 0.0).q, q0) << name;
  }
}

TEST(AnalyticState, FreeDiskPlanarPathInClosedForm) {
  // With phi = phi0 + omega t: x = x0 + Omega (sin phi - sin phi0) / omega.
  const Vec q0 = Eigen::Vector4d(0.5, -0.25, 0, 0.3);
  const double Omega = 1.3, omega = 0.7;
  for (double t : {0.2, 1.0, 2.5, -0.8}) {
    const AnalyticState a = analytic_state("disk-free", q0, Omega, omega, t);
    const double phi = q0[3] + omega * t;
    EXPECT_NEAR(a.q[0], q0[0] + Omega * (std::sin(phi) - std::sin(q0[3])) / omega, 1e-12);
    EXPECT_NEAR(a.q[1], q0[1] - Omega * (std::cos(phi) - std::cos(q0[3])) / omega, 1e-12);
  }
}

TEST(AnalyticState, HarmonicPlanarPathAgainstSimpson) {
  const Vec q0 = Eigen::Vector4d(0, 0, 0, 0.2);
  const double Omega = 0.9, omega = 0.6;
  const double t = 1.3;
  auto phi = [&](double u) { return 0.2 * std::cos(u) + omega * std::sin(u); };
  const double x = Omega * oracle::simpson([&](double u) { return std::cos(phi(u)); }, 0, t, 2000);
  const double y = Omega * oracle::simpson([&](double u) { return std::sin(phi(u)); }, 0, t, 2000);
  const AnalyticState a = analytic_state("disk-harmonic", q0, Omega, omega, t);
  EXPECT_NEAR(a.q[0], x, 1e-12);
  EXPECT_NEAR(a.q[1], y, 1e-12);
}

TEST(AnalyticState, NoClosedFormForParticle) {
  try {
    analytic_state("particle-r3-linear", Vec::Zero(3), 1, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoAnalyticSolution);
  }
}

TEST(AnalyticState, SatisfiesConstraint) {
  oracle::Sampler rng(72);
  for (const char* name : {"disk-harmonic", "disk-linear", "disk-free"}) {
    for (int k = 0; k < 20; ++k) {
      const AnalyticState a = analytic_state(name, rng.point(name), rng.uniform(-1, 1),
                                             rng.uniform(-1, 1), rng.uniform(0, 2));
      EXPECT_NEAR(a.v[0], a.v[2] * std::cos(a.q[3]), 1e-15);
      EXPECT_NEAR(a.v[1], a.v[2] * std::sin(a.q[3]), 1e-15);
    }
  }
}

TEST(AnalyticState, SatisfiesMechanicalOde) {
  oracle::Sampler rng(73);
  for (const char* name : {"disk-harmonic", "disk-linear", "disk-free"}) {
    const SystemDefinition s = builtin(name).definition;
    for (int k = 0; k < 100; ++k) {
      const Vec q0 = rng.point(name);
      const double Omega = rng.uniform(-1, 1), omega = rng.uniform(-1, 1);
      const double t = rng.uniform(0, 2);
      const AnalyticState a = analytic_state(name, q0, Omega, omega, t);
      const Vec p = momenta_from_velocity(s, a.q, a.v);
      const PhaseVelocity f = mechanical_field(s, {t, a.q, p});
      EXPECT_LE((f.q_dot - a.v).cwiseAbs().maxCoeff(), 1e-9) << name;
      // Fourth-order difference of the momenta along the closed form.
      const double d = 1e-3;
      auto p_at = [&](double tt) {
        const AnalyticState b = analytic_state(name, q0, Omega, omega, tt);
        return Vec(momenta_from_velocity(s, b.q, b.v));
      };
      const Vec dp = (8.0 * (p_at(t + d) - p_at(t - d)) - (p_at(t + 2 * d) - p_at(t - 2 * d))) / (12 * d);
      EXPECT_LE((f.p_dot - dp).cwiseAbs().maxCoeff(), 1e-9) << name;
    }
  }
}

TEST(AnalyticH, SpotValues) {
  EXPECT_NEAR(analytic_h("disk-linear", 2.0, 0.0, 1.0, 1.0), 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(analytic_h("disk-harmonic", 1.0, 0.0, 1.0, std::numbers::pi), 0.75 * std::numbers::pi,
              1e-15);
  EXPECT_EQ(analytic_h("disk-linear", 2.0, 0.3, 1.0, 0.0), 0.0);
  EXPECT_EQ(analytic_h("disk-harmonic", 1.0, 0.3, 1.0, 0.0), 0.0);
}

TEST(AnalyticH, NotAvailableWithoutSteeringPotential) {
  for (const char* name : {"disk-free", "particle-r3-linear"}) {
    try {
      analytic_h(name, 1.0, 0.0, 1.0, 1.0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NoAnalyticH);
    }
  }
}

TEST(AnalyticH, DerivativeIsGap) {
  oracle::Sampler rng(74);
  for (const char* name : {"disk-harmonic", "disk-linear"}) {
    const SystemDefinition s = builtin(name).definition;
    for (int k = 0; k < 50; ++k) {
      const double e = 3.0, phi0 = rng.uniform(-1, 1), omega = rng.uniform(-1, 1);
      const double t = rng.uniform(0, 2), d = 1e-3;
      auto h = [&](double u) { return analytic_h(name, e, phi0, omega, u); };
      const double dh = (8.0 * (h(t + d) - h(t - d)) - (h(t + 2 * d) - h(t - 2 * d))) / (12 * d);
      const AnalyticState a = analytic_state(name, Eigen::Vector4d(0, 0, 0, phi0), 1.0, omega, t);
      EXPECT_NEAR(dh, e - s.potential(a.q), 1e-8) << name;
    }
  }
}

// Reduced Lagrange-d'Alembert equations of L = f(phi)(2 theta'^2 + phi'^2) / 2
// with f = e - V:  (f theta')' = 0  and  (f phi')' = f_phi (2 theta'^2 + phi'^2) / 2.
TEST(DiskKineticEquations, SecondOrderFormAlongJacobiFlow) {
  for (const char* name : {"disk-harmonic", "disk-linear"}) {
    const SystemDefinition s = builtin(name).definition;
    const double e = 2.0;
    const SystemDefinition kin = jacobi_system(s, e);
    const Vec q0 = Eigen::Vector4d(0.1, -0.2, 0.3, 0.4);
    const Vec v0 = frame_at(kin, q0) * Eigen::Vector2d(0.7, -0.5);
    IntegratorOptions o;
    o.step = 1e-3;
    const Trajectory tr = simulate_mechanical(kin, {0.0, q0, momenta_from_velocity(kin, q0, v0)}, 1.0, o);
    std::vector<Vec> vel;
    for (const auto& st : tr.samples) vel.push_back(velocity_from_momenta(kin, st.q, st.p));
    for (std::size_t k = 2; k + 2 < tr.size(); k += 50) {
      const Vec acc = (8.0 * (vel[k + 1] - vel[k - 1]) - (vel[k + 2] - vel[k - 2])) / (12 * o.step);
      const double phi = tr.samples[k].q[3], th = vel[k][2], ph = vel[k][3];
      const double f = e - s.potential(tr.samples[k].q);
      const double df = std::string(name) == "disk-harmonic" ? -phi : -1.0;  // df/dphi
      EXPECT_NEAR(acc[2], -df * ph * th / f, 1e-8) << name;
      EXPECT_NEAR(acc[3], (df * (2 * th * th + ph * ph) / 2 - df * ph * ph) / f, 1e-8) << name;
    }
  }
}

}  // namespace
}  // namespace nhj
