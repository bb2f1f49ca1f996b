#include "nhj/maupertuis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "nhj/errors.hpp"
#include "nhj/geometry.hpp"

namespace nhj {

SystemDefinition jacobi_system(const SystemDefinition& sys, double e, double hill_epsilon) {
  auto base = std::make_shared<const SystemDefinition>(sys);
  SystemDefinition out;
  std::ostringstream name;
  name << sys.name << "/jacobi(e=" << e << ")";
  out.name = name.str();
  out.n = sys.n;
  out.m = sys.m;
  out.metric = [base, e, hill_epsilon](const Vec& q) -> Mat {
    return hill_gap(*base, e, q, hill_epsilon) * metric_at(*base, q);
  };
  // d((e - V) G) = -dV (x) G + (e - V) dG
  out.metric_jacobian = [base, e, hill_epsilon](const Vec& q) {
    const double gap = hill_gap(*base, e, q, hill_epsilon);
    const Mat G = metric_at(*base, q);
    const Vec dV = potential_differential(*base, q);
    std::vector<Mat> dG = metric_jacobian_at(*base, q);
    for (int i = 0; i < base->n; ++i) {
      auto& d = dG[static_cast<size_t>(i)];
      d = gap * d - dV[i] * G;
    }
    return dG;
  };
  out.metric_constant = sys.metric_constant && sys.potential_constant;
  out.potential = [](const Vec&) { return 0.0; };
  out.potential_gradient = [n = sys.n](const Vec&) -> Vec { return Vec::Zero(n); };
  out.potential_constant = true;
  out.frame = sys.frame;
  out.frame_jacobians = sys.frame_jacobians;
  out.bounds = sys.bounds;
  return out;
}

double shell_defect(const SystemDefinition& sys, double e, const Vec& q, const Vec& p) {
  const Mat gram_inv = gram_at(sys, q).gram_inv;
  return std::abs(0.5 * p.dot(gram_inv * p) - (e - sys.potential(q)));
}

EnergyShellPoint make_shell_point(const SystemDefinition& sys, double e, const Vec& q,
                                  const Vec& p_direction) {
  const double gap = hill_gap(sys, e, q);
  const Mat gram_inv = gram_at(sys, q).gram_inv;
  const double norm2 = p_direction.dot(gram_inv * p_direction);
  if (!(norm2 > 0)) throw Error(ErrorCode::ZeroVector, "momentum direction is zero");
  return {q, std::sqrt(2.0 * gap / norm2) * p_direction};
}

void require_on_shell(const SystemDefinition& sys, double e, const EnergyShellPoint& pt,
                      double tol) {
  const double gap = hill_gap(sys, e, pt.q);
  const double defect = shell_defect(sys, e, pt.q, pt.p);
  if (defect > tol * std::max(1.0, gap)) {
    std::ostringstream os;
    os << "point is off the energy shell by " << defect;
    throw Error(ErrorCode::NotOnSphere, os.str());
  }
}

namespace {

// Norm of a nonzero velocity in D_q; shared preconditions of P_q and Q_q.
double checked_direction_norm(const SystemDefinition& sys, const Vec& q, const Vec& v) {
  const double norm = metric_norm(sys, q, v);
  if (!(norm > 0)) throw Error(ErrorCode::ZeroVector, "velocity is zero");
  if (constraint_residual(sys, q, v) > 1e-9 * norm) {
    throw Error(ErrorCode::NotInDistribution, "velocity leaves the distribution");
  }
  return norm;
}

}  // namespace

Vec project_P(const SystemDefinition& sys, double e, const Vec& q, const Vec& v) {
  const double gap = hill_gap(sys, e, q);
  const double norm = checked_direction_norm(sys, q, v);
  return (std::sqrt(2.0 * gap) / norm) * v;
}

Vec project_Q(const SystemDefinition& sys, double e, const Vec& q, const Vec& v) {
  const double gap = hill_gap(sys, e, q);
  const double norm = checked_direction_norm(sys, q, v);
  return (std::sqrt(2.0 / gap) / norm) * v;
}

Vec psi(const SystemDefinition& sys, double e, const Vec& q, const Vec& v) {
  const double gap = hill_gap(sys, e, q);
  const double radius = std::sqrt(2.0 * gap);
  const double norm = metric_norm(sys, q, v);
  if (std::abs(norm - radius) > 1e-9 * radius) {
    std::ostringstream os;
    os << "|v| = " << norm << " is not on the sphere of radius " << radius;
    throw Error(ErrorCode::NotOnSphere, os.str());
  }
  return v / gap;
}

std::vector<double> cumulative_simpson(const std::vector<double>& x, const std::vector<double>& f) {
  const size_t N = x.size();
  if (f.size() != N) throw Error(ErrorCode::InvalidArgument, "grid and samples differ in size");
  std::vector<double> out(N, 0.0);
  if (N < 2) return out;
  if (N == 2) {
    out[1] = 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
    return out;
  }
  // Exact integral over [x0 + u0, x0 + u1] of the quadratic through
  // (x0,f0), (x1,f1), (x2,f2), written in Newton form.
  auto quad = [&](size_t i0, double u0, double u1) {
    const double h0 = x[i0 + 1] - x[i0];
    const double h1 = x[i0 + 2] - x[i0 + 1];
    const double d1 = (f[i0 + 1] - f[i0]) / h0;
    const double d2 = ((f[i0 + 2] - f[i0 + 1]) / h1 - d1) / (h0 + h1);
    auto F = [&](double u) {
      return f[i0] * u + d1 * u * u / 2.0 + d2 * (u * u * u / 3.0 - h0 * u * u / 2.0);
    };
    return F(u1) - F(u0);
  };
  size_t k = 0;
  for (; k + 2 < N; k += 2) {
    const double h0 = x[k + 1] - x[k];
    const double h01 = x[k + 2] - x[k];
    out[k + 1] = out[k] + quad(k, 0.0, h0);
    out[k + 2] = out[k] + quad(k, 0.0, h01);
  }
  if (k + 1 < N) {
    // One interval left: close it with the quadratic through the last three nodes.
    const size_t i0 = k - 1;
    out[k + 1] = out[k] + quad(i0, x[k] - x[i0], x[k + 1] - x[i0]);
  }
  return out;
}

namespace {

// Fornberg weights for the first derivative at z from nodes xs.
std::vector<double> fornberg_first_derivative(double z, const std::vector<double>& xs) {
  const size_t n = xs.size();
  std::vector<std::array<double, 2>> c(n, {0.0, 0.0});
  double c1 = 1.0;
  double c4 = xs[0] - z;
  c[0][0] = 1.0;
  for (size_t i = 1; i < n; ++i) {
    const size_t mn = std::min<size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - z;
    for (size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

}  // namespace

std::vector<double> five_point_derivative(const std::vector<double>& x,
                                          const std::vector<double>& f) {
  const size_t N = x.size();
  std::vector<double> d(N, 0.0);
  if (N < 2) return d;
  const size_t width = std::min<size_t>(5, N);
  std::vector<double> xs(width);
  for (size_t i = 0; i < N; ++i) {
    size_t start = i >= width / 2 ? i - width / 2 : 0;
    start = std::min(start, N - width);
    for (size_t j = 0; j < width; ++j) xs[j] = x[start + j];
    const std::vector<double> w = fornberg_first_derivative(x[i], xs);
    double acc = 0.0;
    for (size_t j = 0; j < width; ++j) acc += w[j] * f[start + j];
    d[i] = acc;
  }
  return d;
}

namespace {

Reparametrization reparametrize_with(const Trajectory& traj,
                                     const std::function<double(const Vec&)>& rate) {
  Reparametrization r;
  const size_t N = traj.samples.size();
  r.s.reserve(N);
  r.rate.reserve(N);
  const double t0 = traj.samples.front().t;
  for (const auto& smp : traj.samples) {
    r.s.push_back(smp.t - t0);
    try {
      r.rate.push_back(rate(smp.q));
    } catch (const Error& err) {
      throw err.at_time(smp.t);
    }
  }
  r.h = cumulative_simpson(r.s, r.rate);
  const std::vector<double> dh = five_point_derivative(r.s, r.h);
  for (size_t i = 0; i < N; ++i) {
    r.max_rate_residual = std::max(r.max_rate_residual, std::abs(dh[i] - r.rate[i]));
  }
  return r;
}

}  // namespace

Reparametrization reparametrization(const SystemDefinition& sys, double e,
                                    const Trajectory& mechanical) {
  return reparametrize_with(mechanical, [&](const Vec& q) { return hill_gap(sys, e, q); });
}

Reparametrization inverse_reparametrization(const SystemDefinition& sys, double e,
                                            const Trajectory& kinetic) {
  return reparametrize_with(kinetic, [&](const Vec& q) { return 1.0 / hill_gap(sys, e, q); });
}

VerificationReport verify_against_mechanical(const SystemDefinition& sys, double e,
                                             const Trajectory& mechanical,
                                             const VerifyOptions& opts) {
  const AdaptedState& start = mechanical.front();
  VerificationReport rep;
  rep.system = sys.name;
  rep.e = e;
  rep.q0 = start.q;
  rep.tol = opts.tol;

  const Vec v0 = velocity_from_momenta(sys, start.q, start.p);
  rep.v_q = v0;
  rep.mechanical_velocity = project_P(sys, e, start.q, v0);
  rep.kinetic_velocity = project_Q(sys, e, start.q, v0);

  Reparametrization r;
  try {
    r = reparametrization(sys, e, mechanical);
  } catch (const Error& err) {
    throw err.with_context("mechanical leg");
  }

  // Legendre map of the Jacobi metric (e - V) g applied to Q_q(v).
  const double gap0 = hill_gap(sys, e, start.q);
  const Vec p_kin = gap0 * momenta_from_velocity(sys, start.q, rep.kinetic_velocity);

  IntegratorOptions kin_opts = opts.integrator;
  kin_opts.output_times.assign(r.h.begin() + 1, r.h.end());
  Trajectory kinetic;
  try {
    kinetic = simulate_jacobi(sys, e, {0.0, start.q, p_kin}, r.h.back(), kin_opts);
  } catch (const Error& err) {
    throw err.with_context("kinetic leg");
  }
  if (kinetic.output_index.size() + 1 != r.h.size()) {
    throw Error(ErrorCode::InvalidArgument, "reparametrization samples are not distinct");
  }

  double dev = 0.0;
  for (size_t k = 1; k < r.h.size(); ++k) {
    const Vec& qk = kinetic.samples[kinetic.output_index[k - 1]].q;
    dev = std::max(dev, (mechanical.samples[k].q - qk).norm());
  }
  rep.s_grid = r.s;
  rep.h_samples = r.h;
  rep.max_position_deviation = dev;
  rep.max_h_residual = r.max_rate_residual;
  rep.pass = dev <= opts.tol;
  rep.mechanical_endpoint = mechanical.back().q;
  rep.kinetic_endpoint = kinetic.back().q;
  return rep;
}

VerificationReport verify_maupertuis(const SystemDefinition& sys, double e, const Vec& q,
                                     const Vec& v, double s_end, const VerifyOptions& opts) {
  const Vec vP = project_P(sys, e, q, v);
  const Vec p_mech = momenta_from_velocity(sys, q, vP);
  IntegratorOptions mech_opts = opts.integrator;
  mech_opts.output_times.clear();
  Trajectory mechanical;
  try {
    mechanical = simulate_mechanical(sys, {0.0, q, p_mech}, s_end, mech_opts);
  } catch (const Error& err) {
    throw err.with_context("mechanical leg");
  }
  VerificationReport rep = verify_against_mechanical(sys, e, mechanical, opts);
  rep.v_q = v;
  return rep;
}

namespace {

Vec stacked(const PhaseVelocity& pv) {
  Vec z(pv.q_dot.size() + pv.p_dot.size());
  z << pv.q_dot, pv.p_dot;
  return z;
}

}  // namespace

double reeb_ratio_check(const SystemDefinition& sys, double e, const EnergyShellPoint& pt) {
  require_on_shell(sys, e, pt);
  const AdaptedState s{0.0, pt.q, pt.p};
  const double gap = hill_gap(sys, e, pt.q);
  const Vec mech = stacked(mechanical_field(sys, s));
  const Vec jac = stacked(jacobi_field(sys, e, s));
  return (gap * jac - mech).norm() / mech.norm();
}

ContactPairing contact_pairing(const SystemDefinition& sys, double e, const EnergyShellPoint& pt) {
  require_on_shell(sys, e, pt);
  const AdaptedState s{0.0, pt.q, pt.p};
  const Vec y_kin = frame_coordinates(sys, pt.q, jacobi_field(sys, e, s).q_dot);
  const Vec y_mech = frame_coordinates(sys, pt.q, mechanical_field(sys, s).q_dot);
  return {0.5 * pt.p.dot(y_kin), 0.5 * pt.p.dot(y_mech)};
}

}  // namespace nhj
