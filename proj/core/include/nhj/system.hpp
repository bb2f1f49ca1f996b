#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nhj/types.hpp"

namespace nhj {

// Box limits for one chart coordinate. Periodic coordinates (angles) are never
// wrapped during integration; their limits only describe the output range.
struct CoordinateBound {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool periodic = false;
};

// Chart-level description of a nonholonomic mechanical system (Q, g, V, D).
//
// The distribution D is given by a frame: `frame(q)` returns the n x m matrix
// whose columns X_a(q) span D_q. Optional callables supply analytic
// derivatives; when absent they are approximated by fourth-order central
// differences.
//
// Instances are immutable after construction and safe to share across threads.
struct SystemDefinition {
  using ScalarField = std::function<double(const Vec&)>;
  using VectorField = std::function<Vec(const Vec&)>;
  using MatrixField = std::function<Mat(const Vec&)>;
  using MatrixListField = std::function<std::vector<Mat>(const Vec&)>;

  std::string name;
  int n = 0;
  int m = 0;

  MatrixField metric;           // q -> G(q), n x n SPD
  MatrixListField metric_jacobian;  // optional: q -> {dG/dq^i}, i = 1..n
  bool metric_constant = false;

  ScalarField potential;          // q -> V(q)
  VectorField potential_gradient;  // optional: q -> dV(q), a covector
  bool potential_constant = false;

  MatrixField frame;               // q -> [X_1 ... X_m], n x m
  MatrixListField frame_jacobians;  // optional: q -> {dX_a/dq}, each n x n

  std::vector<CoordinateBound> bounds;  // empty, or one entry per coordinate

  bool has_bounds() const noexcept { return !bounds.empty(); }
};

// Checks arity of the callables; throws InvalidArgument.
void check_definition(const SystemDefinition& sys);

// True when q lies inside the declared box (periodic coordinates always pass).
bool in_chart(const SystemDefinition& sys, const Vec& q);

// Maps periodic coordinates into [-pi, pi). Used at output time only.
Vec wrap_periodic(const SystemDefinition& sys, const Vec& q);

}  // namespace nhj
