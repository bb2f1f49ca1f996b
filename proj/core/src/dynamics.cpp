#include "nhj/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "nhj/errors.hpp"
#include "nhj/geometry.hpp"

namespace nhj {

namespace {

Mat checked_gram_inverse(const Mat& X, const Mat& G) {
  Mat g = X.transpose() * G * X;
  g = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0) || hi / lo > kMaxGramCondition) {
    throw Error(ErrorCode::FrameDegenerate, "frame Gram matrix is ill-conditioned");
  }
  Mat inv = g.llt().solve(Mat::Identity(g.rows(), g.cols()));
  return 0.5 * (inv + inv.transpose());
}

}  // namespace

FieldTerms field_terms(const SystemDefinition& sys, const Vec& q, const Vec& p) {
  const int n = sys.n;
  const int m = sys.m;
  if (p.size() != m) throw Error(ErrorCode::InvalidArgument, "momentum has wrong size");
  if (q.size() != n) throw Error(ErrorCode::InvalidArgument, "position has wrong size");

  const Mat X = frame_at(sys, q);
  const Mat G = metric_at(sys, q);
  const Mat gram_inv = checked_gram_inverse(X, G);
  const std::vector<Mat> J = frame_jacobians_at(sys, q);
  const std::vector<Mat> dG = metric_jacobian_at(sys, q);
  const Vec dV = potential_differential(sys, q);

  const Mat GX = G * X;
  const Vec y = gram_inv * p;

  FieldTerms t;
  t.base_velocity = X * y;
  t.momentum_norm2 = p.dot(y);
  t.potential = sys.potential(q);
  t.potential_term = -(X.transpose() * dV);

  // C_ab^c: D-components of [X_a, X_b]. Since the complement is G-orthogonal
  // to D, they are g^{cd} <X_d, [X_a, X_b]>_G.
  StructureTensor C(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const Vec br = lie_bracket(X.col(a), J[static_cast<size_t>(a)], X.col(b),
                                 J[static_cast<size_t>(b)]);
      const Vec c = gram_inv * (GX.transpose() * br);
      for (int k = 0; k < m; ++k) {
        C(a, b, k) = c[k];
        C(b, a, k) = -c[k];
      }
    }
  }

  t.bracket_term = Vec::Zero(m);
  for (int a = 0; a < m; ++a) {
    double acc = 0.0;
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) acc += C(a, b, c) * y[b] * p[c];
    }
    t.bracket_term[a] = -acc;
  }

  // X_a-directional derivative of g_bc, then of g^{bc} by
  // d(g^{-1}) = -g^{-1} (dg) g^{-1}.
  t.metric_term = Vec::Zero(m);
  for (int a = 0; a < m; ++a) {
    const Vec Xa = X.col(a);
    Mat dXb(n, m);  // column b: derivative of X_b along X_a
    for (int b = 0; b < m; ++b) dXb.col(b) = J[static_cast<size_t>(b)] * Xa;
    Mat dGa = Mat::Zero(n, n);
    if (!sys.metric_constant) {
      for (int i = 0; i < n; ++i) dGa += Xa[i] * dG[static_cast<size_t>(i)];
    }
    Mat dgram = dXb.transpose() * GX + GX.transpose() * dXb + X.transpose() * dGa * X;
    const Mat dgram_inv = -gram_inv * dgram * gram_inv;
    t.metric_term[a] = -0.5 * p.dot(dgram_inv * p);
  }
  return t;
}

double hill_gap(const SystemDefinition& sys, double e, const Vec& q, double hill_epsilon) {
  const double gap = e - sys.potential(q);
  if (!(gap > hill_epsilon)) {
    std::ostringstream os;
    os << "e - V(q) = " << gap << " is within " << hill_epsilon << " of the Hill boundary";
    throw Error(ErrorCode::HillBoundary, os.str());
  }
  return gap;
}

PhaseVelocity mechanical_field(const SystemDefinition& sys, const AdaptedState& state) {
  FieldTerms t = field_terms(sys, state.q, state.p);
  return {std::move(t.base_velocity), t.bracket_term + t.metric_term + t.potential_term};
}

PhaseVelocity jacobi_field(const SystemDefinition& sys, double e, const AdaptedState& state,
                           double hill_epsilon) {
  const double gap = hill_gap(sys, e, state.q, hill_epsilon);
  FieldTerms t = field_terms(sys, state.q, state.p);
  const double k = 1.0 / gap;
  // -X^i_a 1/(2(e-V)^2) dV/dq^i g^{cb} p_c p_b
  const double potential_weight = 0.5 * t.momentum_norm2 * k * k;
  return {k * t.base_velocity,
          k * (t.bracket_term + t.metric_term) + potential_weight * t.potential_term};
}

PhaseField make_mechanical_field(const SystemDefinition& sys) {
  return [&sys](const AdaptedState& s) { return mechanical_field(sys, s); };
}

PhaseField make_jacobi_field(const SystemDefinition& sys, double e, double hill_epsilon) {
  return [&sys, e, hill_epsilon](const AdaptedState& s) {
    return jacobi_field(sys, e, s, hill_epsilon);
  };
}

double energy(const SystemDefinition& sys, const AdaptedState& state) {
  const Mat gram_inv = checked_gram_inverse(frame_at(sys, state.q), metric_at(sys, state.q));
  return 0.5 * state.p.dot(gram_inv * state.p) + sys.potential(state.q);
}

double jacobi_energy(const SystemDefinition& sys, double e, const AdaptedState& state,
                     double hill_epsilon) {
  const double gap = hill_gap(sys, e, state.q, hill_epsilon);
  const Mat gram_inv = checked_gram_inverse(frame_at(sys, state.q), metric_at(sys, state.q));
  return state.p.dot(gram_inv * state.p) / (2.0 * gap);
}

Vec velocity_from_momenta(const SystemDefinition& sys, const Vec& q, const Vec& p) {
  const Mat X = frame_at(sys, q);
  return X * (checked_gram_inverse(X, metric_at(sys, q)) * p);
}

Vec frame_coordinates(const SystemDefinition& sys, const Vec& q, const Vec& v) {
  const Mat X = frame_at(sys, q);
  const Mat G = metric_at(sys, q);
  // G-orthogonal projection coefficients: y = g^{-1} X^T G v.
  return checked_gram_inverse(X, G) * (X.transpose() * (G * v));
}

double metric_norm(const SystemDefinition& sys, const Vec& q, const Vec& v) {
  return std::sqrt(std::max(0.0, v.dot(metric_at(sys, q) * v)));
}

double constraint_residual(const SystemDefinition& sys, const Vec& q, const Vec& v) {
  const Mat X = frame_at(sys, q);
  const Mat G = metric_at(sys, q);
  const Vec w = v - X * (checked_gram_inverse(X, G) * (X.transpose() * (G * v)));
  return std::sqrt(std::max(0.0, w.dot(G * w)));
}

Vec momenta_from_velocity(const SystemDefinition& sys, const Vec& q, const Vec& v,
                          double rel_tol) {
  const Mat X = frame_at(sys, q);
  const Mat G = metric_at(sys, q);
  const Mat gram_inv = checked_gram_inverse(X, G);
  const Vec pv = X.transpose() * (G * v);  // <X_a, v>_G
  const Vec w = v - X * (gram_inv * pv);
  const double residual = std::sqrt(std::max(0.0, w.dot(G * w)));
  const double vnorm = std::sqrt(std::max(0.0, v.dot(G * v)));
  if (residual > rel_tol * vnorm) {
    std::ostringstream os;
    os << "velocity leaves the distribution (residual " << residual << ")";
    throw Error(ErrorCode::NotInDistribution, os.str());
  }
  // For v in D_q, <X_a, v>_G = g_ab y^b exactly.
  return pv;
}

}  // namespace nhj
