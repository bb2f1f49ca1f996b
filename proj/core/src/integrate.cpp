#include "nhj/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhj/errors.hpp"

namespace nhj {

std::string to_string(Method m) { return m == Method::rk4 ? "rk4" : "rkf45"; }

Method parse_method(const std::string& name) {
  if (name == "rk4") return Method::rk4;
  if (name == "rkf45") return Method::rkf45;
  throw Error(ErrorCode::InvalidArgument, "unknown integration method '" + name + "'");
}

namespace {

// The integrators work on the stacked vector z = [q; p].
class StackedField {
 public:
  StackedField(const PhaseField& field, int n, int m) : field_(field), n_(n), m_(m) {}

  Vec operator()(double t, const Vec& z) const {
    AdaptedState s{t, z.head(n_), z.tail(m_)};
    PhaseVelocity v;
    try {
      v = field_(s);
    } catch (const Error& e) {
      throw e.at_time(t);
    }
    Vec dz(n_ + m_);
    dz << v.q_dot, v.p_dot;
    return dz;
  }

  AdaptedState unstack(double t, const Vec& z) const { return {t, z.head(n_), z.tail(m_)}; }

 private:
  const PhaseField& field_;
  int n_;
  int m_;
};

Vec rk4_step(const StackedField& f, double t, const Vec& z, double h) {
  const Vec k1 = f(t, z);
  const Vec k2 = f(t + 0.5 * h, z + 0.5 * h * k1);
  const Vec k3 = f(t + 0.5 * h, z + 0.5 * h * k2);
  const Vec k4 = f(t + h, z + h * k3);
  return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct FehlbergResult {
  Vec z5;
  Vec error;
};

// Runge-Kutta-Fehlberg 4(5); the fifth-order solution is propagated.
FehlbergResult fehlberg_step(const StackedField& f, double t, const Vec& z, const Vec& k1,
                             double h) {
  const Vec k2 = f(t + h / 4.0, z + h * (k1 / 4.0));
  const Vec k3 = f(t + 3.0 * h / 8.0, z + h * (3.0 / 32.0 * k1 + 9.0 / 32.0 * k2));
  const Vec k4 = f(t + 12.0 * h / 13.0,
                   z + h * (1932.0 / 2197.0 * k1 - 7200.0 / 2197.0 * k2 + 7296.0 / 2197.0 * k3));
  const Vec k5 = f(t + h, z + h * (439.0 / 216.0 * k1 - 8.0 * k2 + 3680.0 / 513.0 * k3 -
                                   845.0 / 4104.0 * k4));
  const Vec k6 = f(t + h / 2.0, z + h * (-8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 +
                                         1859.0 / 4104.0 * k4 - 11.0 / 40.0 * k5));
  const Vec z4 = z + h * (25.0 / 216.0 * k1 + 1408.0 / 2565.0 * k3 + 2197.0 / 4104.0 * k4 -
                          k5 / 5.0);
  Vec z5 = z + h * (16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 + 28561.0 / 56430.0 * k4 -
                    9.0 / 50.0 * k5 + 2.0 / 55.0 * k6);
  Vec err = z5 - z4;
  return {std::move(z5), std::move(err)};
}

bool same_time(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::vector<double> sorted_outputs(const std::vector<double>& requested, double t0, double t_end) {
  std::vector<double> out;
  for (double t : requested) {
    if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "output time is not finite");
    if (t > t0 && (t < t_end || same_time(t, t_end))) out.push_back(std::min(t, t_end));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), same_time), out.end());
  return out;
}

void validate(const AdaptedState& s0, double t_end, const IntegratorOptions& opts) {
  if (!(t_end > s0.t)) throw Error(ErrorCode::InvalidArgument, "t_end must exceed the start time");
  if (!(opts.step > 0) || !std::isfinite(opts.step)) {
    throw Error(ErrorCode::InvalidArgument, "step must be positive");
  }
  if (opts.method == Method::rkf45 && (!(opts.abs_tol >= 0) || !(opts.rel_tol >= 0) ||
                                       opts.abs_tol + opts.rel_tol <= 0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be non-negative and not both zero");
  }
}

Trajectory integrate_rk4(const StackedField& f, const AdaptedState& s0, double t_end,
                         const IntegratorOptions& opts, const std::vector<double>& outputs) {
  Trajectory traj;
  traj.requested_times = outputs;
  traj.output_index.resize(outputs.size());

  // Breakpoints: the regular grid t0 + k h, the forced outputs, and t_end.
  struct Break {
    double t;
    long output;  // index into outputs, or -1
  };
  std::vector<Break> breaks;
  const double h = opts.step;
  const auto nsteps = static_cast<std::size_t>(std::ceil((t_end - s0.t) / h - 1e-9));
  if (nsteps > opts.max_steps) throw Error(ErrorCode::InvalidArgument, "too many steps requested");
  breaks.reserve(nsteps + outputs.size() + 1);
  for (std::size_t k = 1; k < nsteps; ++k) breaks.push_back({s0.t + static_cast<double>(k) * h, -1});
  breaks.push_back({t_end, -1});
  for (std::size_t i = 0; i < outputs.size(); ++i) breaks.push_back({outputs[i], static_cast<long>(i)});
  std::stable_sort(breaks.begin(), breaks.end(),
                   [](const Break& a, const Break& b) { return a.t < b.t; });

  traj.samples.reserve(breaks.size() + 1);
  traj.samples.push_back(s0);
  Vec z(s0.q.size() + s0.p.size());
  z << s0.q, s0.p;
  double t = s0.t;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const Break& b = breaks[i];
    if (same_time(b.t, t)) {
      // Coincides with the previous sample; an output maps onto it, snapping
      // the sample time to the requested value.
      if (b.output >= 0) {
        traj.samples.back().t = b.t;
        t = b.t;
        traj.output_index[static_cast<std::size_t>(b.output)] = traj.samples.size() - 1;
      }
      continue;
    }
    z = rk4_step(f, t, z, b.t - t);
    t = b.t;
    traj.samples.push_back(f.unstack(t, z));
    ++traj.integrator.accepted_steps;
    if (b.output >= 0) traj.output_index[static_cast<std::size_t>(b.output)] = traj.samples.size() - 1;
  }
  // t_end may have been snapped onto an output time; keep it exact.
  traj.samples.back().t = std::max(traj.samples.back().t, t_end);
  return traj;
}

Trajectory integrate_rkf45(const StackedField& f, const AdaptedState& s0, double t_end,
                           const IntegratorOptions& opts, const std::vector<double>& outputs) {
  Trajectory traj;
  traj.requested_times = outputs;
  traj.output_index.resize(outputs.size());
  traj.samples.push_back(s0);

  Vec z(s0.q.size() + s0.p.size());
  z << s0.q, s0.p;
  double t = s0.t;
  double h = std::min(opts.step, t_end - t);
  std::size_t next_out = 0;
  std::size_t steps = 0;

  while (!same_time(t, t_end) && t < t_end) {
    if (++steps > opts.max_steps) throw Error(ErrorCode::StepUnderflow, "step budget exhausted").at_time(t);
    const double min_step = opts.min_step * std::max(1.0, std::abs(t));
    if (h < min_step) {
      std::ostringstream os;
      os << "adaptive step " << h << " fell below " << min_step;
      throw Error(ErrorCode::StepUnderflow, os.str()).at_time(t);
    }
    const bool last = t + h >= t_end || same_time(t + h, t_end);
    const double step = last ? t_end - t : h;
    const Vec k1 = f(t, z);
    FehlbergResult r = fehlberg_step(f, t, z, k1, step);

    double err = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double scale =
          opts.abs_tol + opts.rel_tol * std::max(std::abs(z[i]), std::abs(r.z5[i]));
      err = std::max(err, std::abs(r.error[i]) / scale);
    }
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      const double t_new = last ? t_end : t + step;
      // Forced outputs inside (t, t_new] come from a fresh fifth-order
      // sub-step out of the accepted step's left end.
      while (next_out < outputs.size() && (outputs[next_out] < t_new || same_time(outputs[next_out], t_new))) {
        const double to = outputs[next_out];
        if (same_time(to, t_new)) break;
        const FehlbergResult sub = fehlberg_step(f, t, z, k1, to - t);
        traj.samples.push_back(f.unstack(to, sub.z5));
        traj.output_index[next_out++] = traj.samples.size() - 1;
      }
      z = std::move(r.z5);
      t = t_new;
      traj.samples.push_back(f.unstack(t, z));
      ++traj.integrator.accepted_steps;
      while (next_out < outputs.size() && same_time(outputs[next_out], t)) {
        traj.output_index[next_out++] = traj.samples.size() - 1;
      }
    } else {
      ++traj.integrator.rejected_steps;
    }
    const double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h = step * std::clamp(factor, 0.2, 5.0);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const PhaseField& field, const AdaptedState& state0, double t_end,
                     const IntegratorOptions& opts) {
  validate(state0, t_end, opts);
  const auto n = static_cast<int>(state0.q.size());
  const auto m = static_cast<int>(state0.p.size());
  const StackedField f(field, n, m);
  const std::vector<double> outputs = sorted_outputs(opts.output_times, state0.t, t_end);

  Trajectory traj = opts.method == Method::rk4 ? integrate_rk4(f, state0, t_end, opts, outputs)
                                               : integrate_rkf45(f, state0, t_end, opts, outputs);
  traj.integrator.method = opts.method;
  traj.integrator.step = opts.step;
  if (opts.method == Method::rkf45) {
    traj.integrator.abs_tol = opts.abs_tol;
    traj.integrator.rel_tol = opts.rel_tol;
  }
  return traj;
}

void attach_energy(Trajectory& traj, const std::function<double(const AdaptedState&)>& fn) {
  traj.energy_series.clear();
  traj.energy_series.reserve(traj.samples.size());
  for (const auto& s : traj.samples) traj.energy_series.push_back(fn(s));
}

Trajectory simulate_mechanical(const SystemDefinition& sys, const AdaptedState& state0,
                               double t_end, const IntegratorOptions& opts) {
  Trajectory traj = integrate(make_mechanical_field(sys), state0, t_end, opts);
  traj.system_tag = sys.name;
  attach_energy(traj, [&sys](const AdaptedState& s) { return energy(sys, s); });
  return traj;
}

Trajectory simulate_jacobi(const SystemDefinition& sys, double e, const AdaptedState& state0,
                           double t_end, const IntegratorOptions& opts) {
  Trajectory traj = integrate(make_jacobi_field(sys, e), state0, t_end, opts);
  std::ostringstream tag;
  tag << sys.name << "@jacobi(e=" << e << ")";
  traj.system_tag = tag.str();
  attach_energy(traj, [&sys, e](const AdaptedState& s) { return jacobi_energy(sys, e, s); });
  return traj;
}

}  // namespace nhj
