#include <cmath>

#include <gtest/gtest.h>

#include "nhj/dynamics.hpp"
#include "nhj/errors.hpp"
#include "nhj/geometry.hpp"
#include "nhj/maupertuis.hpp"
#include "nhj/systems.hpp"
#include "oracles.hpp"

namespace nhj {
namespace {

SystemDefinition sys_named(const std::string& name) { return builtin(name).definition; }

const std::vector<std::string> kAll = {"particle-r3-linear", "disk-harmonic", "disk-linear",
                                       "disk-free"};

TEST(MechanicalField, ParticleWorkedValues) {
  const PhaseVelocity f = mechanical_field(sys_named("particle-r3-linear"),
                                           {0.0, Eigen::Vector3d(0, 1, 0), Eigen::Vector2d(1, 1)});
  EXPECT_NEAR((f.q_dot - Eigen::Vector3d(0.5, 1, 0.5)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(f.p_dot[0], -0.5, 1e-15);
  EXPECT_NEAR(f.p_dot[1], 0.0, 1e-15);
}

TEST(MechanicalField, ParticleMatchesDisplayedEquations) {
  oracle::Sampler rng(21);
  const SystemDefinition s = sys_named("particle-r3-linear");
  for (int k = 0; k < 50; ++k) {
    const Vec q = rng.point(s.name);
    const Vec p = rng.normal_vec(2);
    const double y = q[1];
    const PhaseVelocity f = mechanical_field(s, {0.0, q, p});
    EXPECT_NEAR(f.q_dot[0], p[0] / (y * y + 1), 1e-14);
    EXPECT_NEAR(f.q_dot[1], p[1], 1e-14);
    EXPECT_NEAR(f.q_dot[2], y * p[0] / (y * y + 1), 1e-14);
    EXPECT_NEAR(f.p_dot[0], y * p[0] * p[1] / (y * y + 1) - y, 1e-13);
    EXPECT_NEAR(f.p_dot[1], 0.0, 1e-14);
  }
}

TEST(MechanicalField, ZeroMomentumWithoutPotentialIsEquilibrium) {
  const PhaseVelocity f =
      mechanical_field(sys_named("disk-free"), {0.0, Eigen::Vector4d(1, 2, 3, 0.4), Vec::Zero(2)});
  EXPECT_EQ(f.q_dot, Vec::Zero(4));
  EXPECT_EQ(f.p_dot, Vec::Zero(2));
}

TEST(MechanicalField, MatchesInverseGramDifferenceOracle) {
  oracle::Sampler rng(22);
  for (const auto& name : kAll) {
    const SystemDefinition s = sys_named(name);
    for (int k = 0; k < 30; ++k) {
      const Vec q = rng.point(name);
      const Vec p = rng.normal_vec(s.m);
      const PhaseVelocity f = mechanical_field(s, {0.0, q, p});
      const auto o = oracle::mechanical_field_fd(s, q, p);
      EXPECT_LE((f.q_dot - o.q_dot).cwiseAbs().maxCoeff(), 1e-12) << name;
      EXPECT_LE((f.p_dot - o.p_dot).cwiseAbs().maxCoeff(), 1e-7) << name;
    }
  }
}

TEST(MechanicalField, MatchesLagrangeDAlembertForm) {
  oracle::Sampler rng(23);
  for (const auto& name : kAll) {
    const SystemDefinition s = sys_named(name);
    for (int k = 0; k < 30; ++k) {
      const Vec q = rng.point(name);
      const Vec p = rng.normal_vec(s.m);
      const PhaseVelocity f = mechanical_field(s, {0.0, q, p});
      const auto o = oracle::lagrange_dalembert(s, q, p);
      EXPECT_LE((f.p_dot - o.p_dot).cwiseAbs().maxCoeff(), 1e-7) << name;
    }
  }
}

// Non-euclidean metric and a non-orthogonal frame exercise the metric term.
SystemDefinition warped_system() {
  SystemDefinition s;
  s.name = "warped";
  s.n = 3;
  s.m = 2;
  s.metric = [](const Vec& q) -> Mat {
    Mat G = Mat::Identity(3, 3);
    G(0, 0) = 1.0 + 0.5 * std::sin(q[1]);
    G(1, 1) = 2.0 + q[2] * q[2];
    G(0, 2) = G(2, 0) = 0.2 * q[0];
    return G;
  };
  s.potential = [](const Vec& q) { return q[0] * q[1] + 0.3 * q[2] * q[2]; };
  s.frame = [](const Vec& q) -> Mat {
    Mat X(3, 2);
    X << 1.0, 0.2, std::cos(q[2]), 1.0, q[1], 0.0;
    return X;
  };
  return s;
}

TEST(MechanicalField, WarpedMetricMatchesBothOracles) {
  const SystemDefinition s = warped_system();
  oracle::Sampler rng(24);
  for (int k = 0; k < 30; ++k) {
    const Vec q = rng.uniform_vec(3, -0.8, 0.8);
    const Vec p = rng.normal_vec(2);
    const PhaseVelocity f = mechanical_field(s, {0.0, q, p});
    const auto a = oracle::mechanical_field_fd(s, q, p);
    const auto b = oracle::lagrange_dalembert(s, q, p);
    EXPECT_LE((f.q_dot - a.q_dot).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((f.p_dot - a.p_dot).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LE((f.p_dot - b.p_dot).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(JacobiField, FreeSystemAtUnitEnergyEqualsMechanical) {
  oracle::Sampler rng(25);
  const SystemDefinition s = sys_named("disk-free");
  for (int k = 0; k < 20; ++k) {
    const AdaptedState st{0.0, rng.point(s.name), rng.normal_vec(2)};
    const PhaseVelocity a = jacobi_field(s, 1.0, st);
    const PhaseVelocity b = mechanical_field(s, st);
    EXPECT_LE((a.q_dot - b.q_dot).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((a.p_dot - b.p_dot).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(JacobiField, ParticleAtOrigin) {
  const PhaseVelocity f = jacobi_field(sys_named("particle-r3-linear"), 1.0,
                                       {0.0, Vec::Zero(3), Eigen::Vector2d(1, 0)});
  EXPECT_NEAR((f.q_dot - Eigen::Vector3d(1, 0, 0)).norm(), 0.0, 1e-15);
}

TEST(JacobiField, ParticleMatchesDisplayedEquations) {
  oracle::Sampler rng(26);
  const SystemDefinition s = sys_named("particle-r3-linear");
  const double e = 1.0;
  for (int k = 0; k < 50; ++k) {
    const Vec q = rng.point(s.name);
    const Vec p = rng.normal_vec(2);
    const double y = q[1], k_e = 1.0 / (e - q[2]);
    const double norm2 = p[0] * p[0] / (1 + y * y) + p[1] * p[1];
    const PhaseVelocity f = jacobi_field(s, e, {0.0, q, p});
    EXPECT_NEAR(f.q_dot[0], k_e * p[0] / (y * y + 1), 1e-13);
    EXPECT_NEAR(f.q_dot[2], k_e * y * p[0] / (y * y + 1), 1e-13);
    // The potential enters through d/dz of 1/(e - z) = (e - z)^-2.
    EXPECT_NEAR(f.p_dot[0], k_e * y * p[0] * p[1] / (y * y + 1) - 0.5 * k_e * k_e * y * norm2,
                1e-12);
    EXPECT_NEAR(f.p_dot[1], 0.0, 1e-13);
  }
}

TEST(JacobiField, MatchesHamiltonianGradientOracle) {
  oracle::Sampler rng(27);
  for (const auto& name : kAll) {
    const SystemDefinition s = sys_named(name);
    const double e = oracle::shell_energy(name);
    auto H = [&](const Vec& q, const Vec& p) {
      return oracle::kinetic_energy(s, q, p) / (e - s.potential(q));
    };
    for (int k = 0; k < 30; ++k) {
      const Vec q = rng.point(name);
      const Vec p = rng.normal_vec(s.m);
      const PhaseVelocity f = jacobi_field(s, e, {0.0, q, p});
      const auto o = oracle::hamel_field(s, H, q, p);
      EXPECT_LE((f.q_dot - o.q_dot).cwiseAbs().maxCoeff(), 1e-8) << name;
      EXPECT_LE((f.p_dot - o.p_dot).cwiseAbs().maxCoeff(), 1e-7) << name;
    }
  }
}

TEST(JacobiField, MechanicalFieldIsHamelFormOfEnergy) {
  oracle::Sampler rng(28);
  const SystemDefinition s = sys_named("disk-linear");
  auto H = [&](const Vec& q, const Vec& p) { return oracle::kinetic_energy(s, q, p) + s.potential(q); };
  for (int k = 0; k < 20; ++k) {
    const Vec q = rng.point(s.name);
    const Vec p = rng.normal_vec(2);
    const PhaseVelocity f = mechanical_field(s, {0.0, q, p});
    const auto o = oracle::hamel_field(s, H, q, p);
    EXPECT_LE((f.p_dot - o.p_dot).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(JacobiField, HillBoundaryThrows) {
  const SystemDefinition s = sys_named("disk-linear");
  const AdaptedState st{0.0, Eigen::Vector4d(0, 0, 0, 2.0), Eigen::Vector2d(1, 1)};
  try {
    jacobi_field(s, 2.0, st);
    FAIL() << "expected HillBoundary";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HillBoundary);
  }
  EXPECT_THROW(jacobi_energy(s, 1.5, st), Error);
}

TEST(Energy, DiskUnitVelocities) {
  const SystemDefinition s = sys_named("disk-harmonic");
  const Vec q = Vec::Zero(4);
  const Vec p = momenta_from_velocity(s, q, frame_at(s, q) * Eigen::Vector2d(1, 1));
  EXPECT_DOUBLE_EQ(energy(s, {0.0, q, p}), 1.5);
}

TEST(Energy, ZeroMomentumIsPotential) {
  const SystemDefinition s = sys_named("disk-harmonic");
  const Vec q = Eigen::Vector4d(1, 1, 1, 0.6);
  EXPECT_DOUBLE_EQ(energy(s, {0.0, q, Vec::Zero(2)}), 0.18);
}

TEST(Energy, ShellPointsHaveUnitJacobiEnergy) {
  oracle::Sampler rng(29);
  for (const auto& name : kAll) {
    const SystemDefinition s = sys_named(name);
    const double e = oracle::shell_energy(name);
    for (int k = 0; k < 20; ++k) {
      const EnergyShellPoint pt = make_shell_point(s, e, rng.point(name), rng.normal_vec(s.m));
      EXPECT_NEAR(jacobi_energy(s, e, {0.0, pt.q, pt.p}), 1.0, 1e-13) << name;
      EXPECT_NEAR(energy(s, {0.0, pt.q, pt.p}), e, 1e-13) << name;
    }
  }
}

TEST(Momenta, OrthonormalFrameIsIdentityMap) {
  SystemDefinition s;
  s.n = 3;
  s.m = 2;
  s.metric = [](const Vec&) -> Mat { return Mat::Identity(3, 3); };
  s.potential = [](const Vec&) { return 0.0; };
  s.frame = [](const Vec&) -> Mat { return Mat::Identity(3, 2); };
  const Vec p = momenta_from_velocity(s, Vec::Zero(3), Eigen::Vector3d(0.25, -3, 0));
  EXPECT_EQ(p, Vec(Eigen::Vector2d(0.25, -3)));
}

TEST(Momenta, ParticleFrameVector) {
  const Vec p = momenta_from_velocity(sys_named("particle-r3-linear"), Eigen::Vector3d(0, 1, 0),
                                      Eigen::Vector3d(1, 0, 1));
  EXPECT_NEAR((p - Eigen::Vector2d(2, 0)).norm(), 0.0, 1e-15);
}

TEST(Momenta, DiskUnitFrameVelocities) {
  const SystemDefinition s = sys_named("disk-free");
  const Vec q = Eigen::Vector4d(0.5, -0.5, 1.0, 0.7);
  const Vec p = momenta_from_velocity(s, q, frame_at(s, q) * Eigen::Vector2d(1, 1));
  EXPECT_NEAR((p - Eigen::Vector2d(2, 1)).norm(), 0.0, 1e-15);
}

TEST(Momenta, RoundTrip) {
  oracle::Sampler rng(30);
  for (const auto& name : kAll) {
    const SystemDefinition s = sys_named(name);
    for (int k = 0; k < 20; ++k) {
      const Vec q = rng.point(name);
      const Vec v = frame_at(s, q) * rng.normal_vec(s.m);
      const Vec back = velocity_from_momenta(s, q, momenta_from_velocity(s, q, v));
      EXPECT_LE((back - v).cwiseAbs().maxCoeff(), 1e-14 * std::max(1.0, v.norm()));
    }
  }
}

TEST(Momenta, OffDistributionVelocityRejected) {
  try {
    momenta_from_velocity(sys_named("particle-r3-linear"), Vec::Zero(3), Eigen::Vector3d(0, 0, 1));
    FAIL() << "expected NotInDistribution";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInDistribution);
  }
}

TEST(ConstraintResidual, Values) {
  const SystemDefinition s = sys_named("particle-r3-linear");
  EXPECT_NEAR(constraint_residual(s, Vec::Zero(3), Eigen::Vector3d(0, 0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(constraint_residual(s, Eigen::Vector3d(0, 2, 0), Eigen::Vector3d(1, 0, 2)), 0.0,
              1e-15);
  // Against the dense projector: |(I - P) v|_G.
  const Vec q = Eigen::Vector3d(0.3, 0.8, 0.1);
  const Vec v = Eigen::Vector3d(0.2, -1, 0.9);
  const Mat P = oracle::projector(Mat::Identity(3, 3), s.frame(q));
  EXPECT_NEAR(constraint_residual(s, q, v), ((Mat::Identity(3, 3) - P) * v).norm(), 1e-14);
}

TEST(FieldTerms, AssembleMechanicalField) {
  const SystemDefinition s = sys_named("disk-harmonic");
  const Vec q = Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
  const Vec p = Eigen::Vector2d(0.7, -0.2);
  const FieldTerms t = field_terms(s, q, p);
  const PhaseVelocity f = mechanical_field(s, {0.0, q, p});
  EXPECT_LE((t.base_velocity - f.q_dot).norm(), 1e-15);
  EXPECT_LE((t.bracket_term + t.metric_term + t.potential_term - f.p_dot).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(t.potential, 0.08);
}

}  // namespace
}  // namespace nhj
