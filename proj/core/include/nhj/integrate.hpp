#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nhj/dynamics.hpp"

namespace nhj {

enum class Method { rk4, rkf45 };

std::string to_string(Method m);
Method parse_method(const std::string& name);

struct IntegratorOptions {
  Method method = Method::rk4;
  double step = 1e-3;  // fixed step (rk4) or initial step (rkf45)
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double min_step = 1e-14;
  std::size_t max_steps = 50'000'000;
  // Extra times at which a sample is forced. Times outside (t0, t_end] are ignored.
  std::vector<double> output_times;
};

struct IntegratorInfo {
  Method method = Method::rk4;
  double step = 0.0;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

// Time-ordered samples of an integral curve. The first sample is the initial
// state; every accepted step contributes one sample, and forced output times
// contribute one each.
struct Trajectory {
  std::vector<AdaptedState> samples;
  std::string system_tag;
  IntegratorInfo integrator;
  std::vector<double> energy_series;
  // output_index[k] is the sample index of the k-th requested output time
  // (after sorting and de-duplication; see requested_times).
  std::vector<std::size_t> output_index;
  std::vector<double> requested_times;

  const AdaptedState& front() const { return samples.front(); }
  const AdaptedState& back() const { return samples.back(); }
  std::size_t size() const noexcept { return samples.size(); }
};

/// Integrates `field` from state0 to t_end. Field errors are rethrown with
/// the failing time attached; adaptive mode throws StepUnderflow when the
/// step shrinks below min_step.
Trajectory integrate(const PhaseField& field, const AdaptedState& state0, double t_end,
                     const IntegratorOptions& opts);

/// Fills traj.energy_series with fn(sample).
void attach_energy(Trajectory& traj, const std::function<double(const AdaptedState&)>& fn);

/// Mechanical trajectory with energy series and system tag.
Trajectory simulate_mechanical(const SystemDefinition& sys, const AdaptedState& state0,
                               double t_end, const IntegratorOptions& opts);

/// Jacobi-kinetic trajectory at energy e; energy_series holds jacobi_energy.
Trajectory simulate_jacobi(const SystemDefinition& sys, double e, const AdaptedState& state0,
                           double t_end, const IntegratorOptions& opts);

}  // namespace nhj
