#include "nhj/expmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nhj/dynamics.hpp"
#include "nhj/geometry.hpp"

namespace nhj {

std::string to_string(ExpKind kind) {
  switch (kind) {
    case ExpKind::kinetic: return "kinetic";
    case ExpKind::jacobi: return "jacobi";
    case ExpKind::mechanical_flow: return "mechanical";
  }
  return "kinetic";
}

ExpKind parse_exp_kind(const std::string& name) {
  if (name == "kinetic") return ExpKind::kinetic;
  if (name == "jacobi") return ExpKind::jacobi;
  if (name == "mechanical") return ExpKind::mechanical_flow;
  throw Error(ErrorCode::InvalidArgument, "unknown exponential map kind '" + name + "'");
}

namespace {

bool is_zero(const Vec& v) { return v.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

Vec exp_nh(const SystemDefinition& sys, const Vec& q, const Vec& v, double t,
           const IntegratorOptions& opts) {
  if (!sys.potential_constant) {
    throw Error(ErrorCode::NotKinetic, "exp_nh needs a system without potential; '" + sys.name +
                                           "' has one");
  }
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "time must be non-negative");
  const Vec p = momenta_from_velocity(sys, q, v);
  if (t == 0.0 || is_zero(v)) return q;
  return integrate(make_mechanical_field(sys), {0.0, q, p}, t, opts).back().q;
}

MechanicalExpResult exp_nh_mech(const SystemDefinition& sys, double e, const Vec& q, const Vec& v,
                                const IntegratorOptions& opts, double ball_epsilon) {
  const double gap = hill_gap(sys, e, q);
  MechanicalExpResult out;
  out.ball_exceeded = metric_norm(sys, q, v) > std::sqrt(2.0 * ball_epsilon / gap);
  const Vec p = gap * momenta_from_velocity(sys, q, v);
  if (is_zero(v)) {
    out.point = q;
    return out;
  }
  out.point = integrate(make_jacobi_field(sys, e), {0.0, q, p}, 1.0, opts).back().q;
  return out;
}

Vec flow_endpoint(const SystemDefinition& sys, const Vec& q, const Vec& v, double t,
                  const IntegratorOptions& opts) {
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "time must be non-negative");
  const Vec p = momenta_from_velocity(sys, q, v);
  if (t == 0.0) return q;
  return integrate(make_mechanical_field(sys), {0.0, q, p}, t, opts).back().q;
}

Vec exp_point(const SystemDefinition& sys, const Vec& q, const Vec& v, const ExpOptions& opts) {
  switch (opts.kind) {
    case ExpKind::kinetic: return exp_nh(sys, q, v, 1.0, opts.integrator);
    case ExpKind::jacobi:
      return exp_nh_mech(sys, opts.energy, q, v, opts.integrator, opts.ball_epsilon).point;
    case ExpKind::mechanical_flow: return flow_endpoint(sys, q, v, 1.0, opts.integrator);
  }
  return q;
}

DifferentialDefect differential_at_zero(const SystemDefinition& sys, const Vec& q,
                                        const ExpOptions& opts, double delta, const Mat& basis) {
  if (opts.kind == ExpKind::mechanical_flow) {
    throw Error(ErrorCode::InvalidArgument,
                "the time-1 mechanical map does not fix q; its differential at 0 is not compared");
  }
  if (!(delta > 0)) throw Error(ErrorCode::InvalidArgument, "difference step must be positive");
  const Mat B = basis.size() == 0 ? Mat::Identity(sys.m, sys.m) : basis;
  if (B.rows() != sys.m) throw Error(ErrorCode::InvalidArgument, "basis must have m rows");

  const Mat X = frame_at(sys, q);
  const Mat XB = X * B;
  const auto k = XB.cols();
  Mat D(sys.n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Vec v = delta * XB.col(j);
    D.col(j) = (exp_point(sys, q, v, opts) - exp_point(sys, q, -v, opts)) / (2.0 * delta);
  }
  DifferentialDefect out;
  out.matrix = XB.colPivHouseholderQr().solve(D);
  out.defect = (out.matrix - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
  return out;
}

ExpGrid exp_grid(const SystemDefinition& sys, const Vec& q, const ExpOptions& opts,
                 const std::vector<Vec>& directions, const std::vector<double>& radii) {
  const Mat gram = gram_at(sys, q).gram;
  for (const Vec& d : directions) {
    if (d.size() != sys.m) throw Error(ErrorCode::InvalidArgument, "direction must have m entries");
    if (std::abs(d.dot(gram * d) - 1.0) > 1e-9) {
      throw Error(ErrorCode::InvalidArgument, "directions must be unit vectors in g");
    }
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0) || (i > 0 && radii[i] < radii[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "radii must be non-negative and ascending");
    }
  }
  if (opts.kind == ExpKind::jacobi) hill_gap(sys, opts.energy, q);

  ExpGrid grid;
  grid.system = sys.name;
  grid.q = q;
  grid.kind = opts.kind;
  if (opts.kind == ExpKind::jacobi) grid.energy = opts.energy;
  grid.directions = directions;
  grid.radii = radii;

  const Mat X = frame_at(sys, q);
  for (std::size_t di = 0; di < directions.size(); ++di) {
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      const double r = radii[ri];
      if (r == 0.0 && opts.kind != ExpKind::mechanical_flow) {
        grid.rows.push_back({di, ri, r, q});
        continue;
      }
      const Vec v = X * (r * directions[di]);
      try {
        Vec point;
        if (opts.kind == ExpKind::jacobi) {
          MechanicalExpResult res =
              exp_nh_mech(sys, opts.energy, q, v, opts.integrator, opts.ball_epsilon);
          if (res.ball_exceeded) ++grid.ball_warnings;
          point = std::move(res.point);
        } else {
          point = exp_point(sys, q, v, opts);
        }
        grid.rows.push_back({di, ri, r, std::move(point)});
      } catch (const Error& err) {
        grid.failures.push_back({di, r, err.code(), err.message()});
      }
    }
  }
  return grid;
}

std::vector<Vec> planar_unit_directions(const SystemDefinition& sys, const Vec& q,
                                        std::size_t count) {
  if (sys.m != 2) throw Error(ErrorCode::InvalidArgument, "planar directions need m = 2");
  const Mat g = gram_at(sys, q).gram;
  // g-orthonormal basis {b1, b2} of the frame coordinates.
  Vec b1 = Vec::Unit(2, 0) / std::sqrt(g(0, 0));
  Vec b2 = Vec::Unit(2, 1);
  b2 -= b1.dot(g * b2) * b1;
  b2 /= std::sqrt(b2.dot(g * b2));
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    out.push_back(std::cos(a) * b1 + std::sin(a) * b2);
  }
  return out;
}

DiskVariant disk_variant(const std::string& system_name) {
  if (system_name == "disk-harmonic") return DiskVariant::harmonic;
  if (system_name == "disk-linear") return DiskVariant::linear;
  throw Error(ErrorCode::RestrictedDomain,
              "closed-form inverse exists only for disk-harmonic and disk-linear, not '" +
                  system_name + "'");
}

Eigen::Vector2d disk_inverse_exp(DiskVariant variant, const Vec& q0, const Vec& point) {
  if (q0.size() != 4 || point.size() != 4) {
    throw Error(ErrorCode::InvalidArgument, "disk points have 4 coordinates");
  }
  const double dtheta = point[2] - q0[2];
  switch (variant) {
    case DiskVariant::harmonic:
      return {dtheta, (point[3] - q0[3] * std::cos(1.0)) / std::sin(1.0)};
    case DiskVariant::linear:
      return {dtheta, point[3] - q0[3] + 0.5};
  }
  return {dtheta, 0.0};
}

GaussCheckReport gauss_pullback_check(const SystemDefinition& sys, const Vec& q0,
                                      const std::vector<Eigen::Vector2d>& velocities,
                                      const std::vector<double>& scales,
                                      const IntegratorOptions& opts) {
  const DiskVariant variant = disk_variant(sys.name);
  // The Gauss metric is the flat metric dOmega^2 + domega^2 on D_q0.
  auto flat_metric = [](const Eigen::Vector2d&) -> Eigen::Matrix2d {
    return Eigen::Matrix2d::Identity();
  };
  const Mat X = frame_at(sys, q0);
  GaussCheckReport rep;
  for (const Eigen::Vector2d& w : velocities) {
    const Eigen::Vector2d w_perp(-w[1], w[0]);
    for (double t : scales) {
      const Eigen::Vector2d tv = t * w;
      rep.flat_gauss_defect = std::max(
          rep.flat_gauss_defect,
          std::abs(tv.dot(flat_metric(tv) * w_perp) - tv.dot(flat_metric(Eigen::Vector2d::Zero()) * w_perp)));
      const Vec point = flow_endpoint(sys, q0, X * Vec(tv), 1.0, opts);
      const Eigen::Vector2d r = disk_inverse_exp(variant, q0, point);
      rep.max_line_deviation = std::max(rep.max_line_deviation, (r - tv).norm());
      ++rep.samples;
    }
  }
  return rep;
}

}  // namespace nhj
