#include "nhj/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nhj/errors.hpp"

namespace nhj {

void check_definition(const SystemDefinition& sys) {
  if (sys.n <= 0 || sys.m <= 0 || sys.m > sys.n) {
    throw Error(ErrorCode::InvalidArgument, "system '" + sys.name + "' needs 0 < m <= n");
  }
  if (!sys.metric || !sys.potential || !sys.frame) {
    throw Error(ErrorCode::InvalidArgument,
                "system '" + sys.name + "' lacks a metric, potential or frame");
  }
  if (sys.has_bounds() && static_cast<int>(sys.bounds.size()) != sys.n) {
    throw Error(ErrorCode::InvalidArgument, "chart bounds must have one entry per coordinate");
  }
}

bool in_chart(const SystemDefinition& sys, const Vec& q) {
  if (!sys.has_bounds()) return true;
  for (int i = 0; i < sys.n; ++i) {
    const auto& b = sys.bounds[static_cast<size_t>(i)];
    if (b.periodic) continue;
    if (q[i] < b.lower || q[i] > b.upper) return false;
  }
  return true;
}

Vec wrap_periodic(const SystemDefinition& sys, const Vec& q) {
  Vec out = q;
  if (!sys.has_bounds()) return out;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < sys.n; ++i) {
    if (!sys.bounds[static_cast<size_t>(i)].periodic) continue;
    double w = std::fmod(q[i] + std::numbers::pi, two_pi);
    if (w < 0) w += two_pi;
    out[i] = w - std::numbers::pi;
  }
  return out;
}

namespace detail {

double difference_step(double qi) noexcept { return 1e-5 * (1.0 + std::abs(qi)); }

void check_stencil(const SystemDefinition& sys, const Vec& q, int i, double h) {
  if (!sys.has_bounds()) return;
  const auto& b = sys.bounds[static_cast<size_t>(i)];
  if (b.periodic) return;
  if (q[i] - 2 * h < b.lower || q[i] + 2 * h > b.upper) {
    std::ostringstream os;
    os << "difference stencil on coordinate " << i + 1 << " leaves the chart at q=" << q[i];
    throw Error(ErrorCode::JacobianUnavailable, os.str());
  }
}

}  // namespace detail

Mat metric_at(const SystemDefinition& sys, const Vec& q) {
  Mat G = sys.metric(q);
  if (G.rows() != sys.n || G.cols() != sys.n) {
    throw Error(ErrorCode::InvalidArgument, "metric has wrong shape");
  }
  const double scale = G.cwiseAbs().maxCoeff();
  if (!(scale > 0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::MetricSingular, "metric is zero or not finite");
  }
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::MetricSingular, "metric is not symmetric");
  }
  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::MetricSingular, "metric is not positive definite");
  }
  return G;
}

Mat frame_at(const SystemDefinition& sys, const Vec& q) {
  Mat X = sys.frame(q);
  if (X.rows() != sys.n || X.cols() != sys.m) {
    throw Error(ErrorCode::InvalidArgument, "frame has wrong shape");
  }
  return X;
}

std::vector<Mat> frame_jacobians_at(const SystemDefinition& sys, const Vec& q) {
  if (sys.frame_jacobians) return sys.frame_jacobians(q);
  std::vector<Mat> J(static_cast<size_t>(sys.m), Mat::Zero(sys.n, sys.n));
  auto X = [&](const Vec& x) -> Mat { return sys.frame(x); };
  for (int j = 0; j < sys.n; ++j) {
    const Mat dX = detail::central_difference(sys, X, q, j);
    for (int a = 0; a < sys.m; ++a) J[static_cast<size_t>(a)].col(j) = dX.col(a);
  }
  return J;
}

std::vector<Mat> metric_jacobian_at(const SystemDefinition& sys, const Vec& q) {
  if (sys.metric_constant) return std::vector<Mat>(static_cast<size_t>(sys.n), Mat::Zero(sys.n, sys.n));
  if (sys.metric_jacobian) return sys.metric_jacobian(q);
  std::vector<Mat> dG;
  dG.reserve(static_cast<size_t>(sys.n));
  auto G = [&](const Vec& x) -> Mat { return sys.metric(x); };
  for (int i = 0; i < sys.n; ++i) dG.push_back(detail::central_difference(sys, G, q, i));
  return dG;
}

Vec potential_differential(const SystemDefinition& sys, const Vec& q) {
  if (sys.potential_constant) return Vec::Zero(sys.n);
  if (sys.potential_gradient) return sys.potential_gradient(q);
  Vec dV(sys.n);
  for (int i = 0; i < sys.n; ++i) dV[i] = detail::central_difference(sys, sys.potential, q, i);
  return dV;
}

namespace {

GramPair gram_from(const Mat& X, const Mat& G) {
  Mat g = X.transpose() * G * X;
  g = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0) || hi / lo > kMaxGramCondition) {
    std::ostringstream os;
    os << "frame Gram matrix condition number " << (lo > 0 ? hi / lo : INFINITY)
       << " exceeds " << kMaxGramCondition;
    throw Error(ErrorCode::FrameDegenerate, os.str());
  }
  Mat inv = g.llt().solve(Mat::Identity(g.rows(), g.cols()));
  return {std::move(g), 0.5 * (inv + inv.transpose())};
}

Mat projector_from(const Mat& X, const Mat& G, const Mat& gram_inv) {
  return X * gram_inv * X.transpose() * G;
}

Mat complement_from(const Mat& G, const Mat& P, int n, int m) {
  const int k = n - m;
  Mat Y(n, k);
  if (k == 0) return Y;
  const double threshold = 1e-8 * std::sqrt(G.norm());
  const Mat R = Mat::Identity(n, n) - P;
  int found = 0;
  for (int i = 0; i < n && found < k; ++i) {
    Vec w = R.col(i);
    // Two Gram-Schmidt passes keep Y^T G Y at identity to round-off.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < found; ++j) w -= Y.col(j).dot(G * w) * Y.col(j);
    }
    const double nrm = std::sqrt(std::max(0.0, w.dot(G * w)));
    if (nrm <= threshold) continue;
    Y.col(found++) = w / nrm;
  }
  if (found < k) {
    throw Error(ErrorCode::FrameDegenerate, "could not complete the complement frame");
  }
  return Y;
}

}  // namespace

GramPair gram_at(const SystemDefinition& sys, const Vec& q) {
  return gram_from(frame_at(sys, q), metric_at(sys, q));
}

Mat projector_at(const SystemDefinition& sys, const Vec& q) {
  const Mat X = frame_at(sys, q);
  const Mat G = metric_at(sys, q);
  return projector_from(X, G, gram_from(X, G).gram_inv);
}

Mat complement_frame(const SystemDefinition& sys, const Vec& q) {
  const Mat X = frame_at(sys, q);
  const Mat G = metric_at(sys, q);
  const Mat P = projector_from(X, G, gram_from(X, G).gram_inv);
  return complement_from(G, P, sys.n, sys.m);
}

StructureFunctions structure_functions_at(const SystemDefinition& sys, const Vec& q) {
  const int n = sys.n;
  const int m = sys.m;
  const Mat X = frame_at(sys, q);
  const Mat G = metric_at(sys, q);
  const GramPair gp = gram_from(X, G);
  const Mat Y = complement_from(G, projector_from(X, G, gp.gram_inv), n, m);
  const std::vector<Mat> J = frame_jacobians_at(sys, q);

  Mat basis(n, n);
  basis << X, Y;
  const Eigen::PartialPivLU<Mat> lu(basis);

  StructureFunctions out{StructureTensor(m, m), StructureTensor(m, n - m)};
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const Vec bracket = lie_bracket(X.col(a), J[static_cast<size_t>(a)], X.col(b),
                                      J[static_cast<size_t>(b)]);
      const Vec coeff = lu.solve(bracket);
      for (int c = 0; c < m; ++c) {
        out.in_distribution(a, b, c) = coeff[c];
        out.in_distribution(b, a, c) = -coeff[c];
      }
      for (int al = 0; al < n - m; ++al) {
        out.in_complement(a, b, al) = coeff[m + al];
        out.in_complement(b, a, al) = -coeff[m + al];
      }
    }
  }
  return out;
}

Vec grad_potential(const SystemDefinition& sys, const Vec& q) {
  const Mat G = metric_at(sys, q);
  return G.llt().solve(potential_differential(sys, q));
}

FrameData frame_data_at(const SystemDefinition& sys, const Vec& q) {
  FrameData fd;
  fd.q = q;
  fd.X = frame_at(sys, q);
  const Mat G = metric_at(sys, q);
  GramPair gp = gram_from(fd.X, G);
  fd.Y = complement_from(G, projector_from(fd.X, G, gp.gram_inv), sys.n, sys.m);
  fd.gram = std::move(gp.gram);
  fd.gram_inv = std::move(gp.gram_inv);
  StructureFunctions sf = structure_functions_at(sys, q);
  fd.structure_D = std::move(sf.in_distribution);
  fd.structure_perp = std::move(sf.in_complement);
  return fd;
}

}  // namespace nhj
