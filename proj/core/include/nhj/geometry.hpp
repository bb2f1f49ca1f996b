#pragma once

#include <vector>

#include "nhj/system.hpp"
#include "nhj/types.hpp"

namespace nhj {

// Frame Gram matrices above this condition number are rejected.
inline constexpr double kMaxGramCondition = 1e12;

struct GramPair {
  Mat gram;      // g_ab = X_a^T G X_b
  Mat gram_inv;  // g^{ab}
};

// Rank-3 array indexed (a, b, k), used for structure functions C_ab^k.
class StructureTensor {
 public:
  StructureTensor() = default;
  StructureTensor(int m, int k) : m_(m), k_(k), data_(static_cast<size_t>(m * m * k), 0.0) {}

  int frame_dim() const noexcept { return m_; }
  int component_dim() const noexcept { return k_; }

  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }

 private:
  size_t index(int a, int b, int c) const {
    return static_cast<size_t>((a * m_ + b) * k_ + c);
  }
  int m_ = 0;
  int k_ = 0;
  std::vector<double> data_;
};

// Expansion [X_a, X_b] = C_ab^c X_c + C_ab^alpha Y_alpha.
struct StructureFunctions {
  StructureTensor in_distribution;  // C_ab^c
  StructureTensor in_complement;    // C_ab^alpha
};

// Adapted frame {X_a, Y_alpha} at one chart point with derived quantities.
struct FrameData {
  Vec q;
  Mat X;
  Mat Y;
  Mat gram;
  Mat gram_inv;
  StructureTensor structure_D;
  StructureTensor structure_perp;
};

/// Metric G(q); throws MetricSingular unless symmetric positive definite.
Mat metric_at(const SystemDefinition& sys, const Vec& q);

/// Frame matrix [X_1 ... X_m] at q.
Mat frame_at(const SystemDefinition& sys, const Vec& q);

/// dX_a/dq for each frame field (entry (i, j) is dX_a^i / dq^j).
/// Analytic when supplied, otherwise fourth-order central differences.
/// Throws JacobianUnavailable when a stencil would leave the chart.
std::vector<Mat> frame_jacobians_at(const SystemDefinition& sys, const Vec& q);

/// dG/dq^i for i = 1..n.
std::vector<Mat> metric_jacobian_at(const SystemDefinition& sys, const Vec& q);

/// The covector dV(q).
Vec potential_differential(const SystemDefinition& sys, const Vec& q);

GramPair gram_at(const SystemDefinition& sys, const Vec& q);

/// G(q)-orthonormal basis of the G-orthogonal complement of D_q, built by
/// orthonormalizing (I - P) e_i over the standard basis. Empty when m == n.
Mat complement_frame(const SystemDefinition& sys, const Vec& q);

/// Orthogonal projector onto D_q: P = X (X^T G X)^{-1} X^T G.
Mat projector_at(const SystemDefinition& sys, const Vec& q);

/// Components of the frame brackets in the adapted basis {X_a, Y_alpha}.
/// C_ab = -C_ba holds exactly; diagonal entries are zero.
StructureFunctions structure_functions_at(const SystemDefinition& sys, const Vec& q);

/// grad^g V = G^{-1} dV.
Vec grad_potential(const SystemDefinition& sys, const Vec& q);

FrameData frame_data_at(const SystemDefinition& sys, const Vec& q);

// Lie bracket of two vector fields from their values and Jacobians:
// [A, B] = (dB) A - (dA) B.
inline Vec lie_bracket(const Vec& a, const Mat& da, const Vec& b, const Mat& db) {
  return db * a - da * b;
}

namespace detail {

// Step used for the fourth-order central differences on coordinate i.
double difference_step(double qi) noexcept;

// Throws JacobianUnavailable when the +-2h stencil on coordinate i exits the
// declared chart bounds.
void check_stencil(const SystemDefinition& sys, const Vec& q, int i, double h);

// Fourth-order central difference of f along coordinate i.
template <class F>
auto central_difference(const SystemDefinition& sys, const F& f, const Vec& q, int i) {
  const double h = difference_step(q[i]);
  check_stencil(sys, q, i, h);
  Vec qp1 = q, qm1 = q, qp2 = q, qm2 = q;
  qp1[i] += h;
  qm1[i] -= h;
  qp2[i] += 2 * h;
  qm2[i] -= 2 * h;
  using R = decltype(f(q));
  R out = (8.0 * (f(qp1) - f(qm1)) - (f(qp2) - f(qm2))) / (12.0 * h);
  return out;
}

}  // namespace detail

}  // namespace nhj
