#include "cylcap/transform.hpp"

#include <cmath>
#include <stdexcept>

#include "cylcap/errors.hpp"

namespace cylcap {

TransformParams::TransformParams(int n_, double kappa_) : n(n_), kappa(kappa_) {
  if (n < 2) throw std::invalid_argument("TransformParams: dimension must be >= 2");
  if (!(kappa > 0.0)) throw std::invalid_argument("TransformParams: kappa must be positive");
}

BallPoint forward_map(const TransformParams& params, const CylPoint& x) {
  const double s2 = x.x_prime.squaredNorm();
  const double S = 1.0 + s2;
  const double decay = std::exp(-params.kappa * x.x_n);

  Eigen::VectorXd xi(params.n);
  xi.head(params.n - 1) = (2.0 * decay / S) * x.x_prime;
  xi(params.n - 1) = decay * (1.0 - s2) / S;
  return BallPoint{std::move(xi)};
}

CylPoint inverse_map(const TransformParams& params, const BallPoint& p) {
  const int n = params.n;
  const auto xi_prime = p.xi.head(n - 1);
  const double xi_n = p.xi(n - 1);
  const double r = p.xi.norm();

  if (xi_prime.norm() < 1e-14 && xi_n <= 0.0)
    throw ExcludedRayError("inverse_map: point lies on the ray {xi'=0, xi_n<=0} where T^{-1} is undefined");

  CylPoint x;
  x.x_prime = xi_prime / (r + xi_n);
  x.x_n = -std::log(r) / params.kappa;
  return x;
}

JacobianData differential(const TransformParams& params, const CylPoint& x) {
  const int n = params.n;
  const double s2 = x.x_prime.squaredNorm();
  const double S = 1.0 + s2;
  const double decay = std::exp(-params.kappa * x.x_n);
  const double a = 2.0 * decay / S;

  JacobianData jd;
  jd.dT.resize(n, n);

  // Cross-cross block: (2 e^{-kappa x_n} / S) (I - 2 x' x'^T / S).
  jd.dT.topLeftCorner(n - 1, n - 1) =
      a * (Eigen::MatrixXd::Identity(n - 1, n - 1) - (2.0 / S) * x.x_prime * x.x_prime.transpose());
  // d xi' / d x_n = -kappa xi'.
  jd.dT.topRightCorner(n - 1, 1) = -params.kappa * a * x.x_prime;
  // d xi_n / d x'_j = -4 e^{-kappa x_n} x_j / S^2.
  jd.dT.bottomLeftCorner(1, n - 1) = (-4.0 * decay / (S * S)) * x.x_prime.transpose();
  // d xi_n / d x_n = -kappa xi_n.
  jd.dT(n - 1, n - 1) = -params.kappa * decay * (1.0 - s2) / S;

  // det dT = -kappa e^{-kappa n x_n} (2/S)^{n-1}; the cross-term determinant
  // collapses to 1 after a Schur complement.
  jd.det_abs = params.kappa * std::exp(-params.kappa * n * x.x_n) * std::pow(2.0 / S, n - 1);
  return jd;
}

BallPoint reflect(const BallPoint& p) {
  BallPoint q{p.xi};
  q.xi(q.xi.size() - 1) = -q.xi(q.xi.size() - 1);
  return q;
}

BoundsReport geometric_bounds_check(const TransformParams& params,
                                    const std::vector<std::pair<CylPoint, CylPoint>>& pairs) {
  BoundsReport report;
  report.upper_bound = 5.0 + 2.0 * params.kappa;
  report.max_upper_ratio = 0.0;
  report.min_lower_slack = std::numeric_limits<double>::infinity();
  report.min_dstar_ratio = std::numeric_limits<double>::infinity();
  report.max_dstar_ratio = 0.0;

  const int n = params.n;
  Eigen::VectorXd diff(n);

  for (const auto& [a, b] : pairs) {
    diff.head(n - 1) = a.x_prime - b.x_prime;
    diff(n - 1) = a.x_n - b.x_n;
    const double dist = diff.norm();
    if (dist == 0.0) {
      ++report.skipped_pairs;
      continue;
    }
    ++report.evaluated_pairs;

    const double image_dist = (forward_map(params, a).xi - forward_map(params, b).xi).norm();
    const double decay_min = std::exp(-params.kappa * std::min(a.x_n, b.x_n));
    const double decay_max = std::exp(-params.kappa * std::max(a.x_n, b.x_n));

    report.max_upper_ratio = std::max(report.max_upper_ratio, image_dist / (decay_min * dist));

    // The lower bound labels the pair so that |y'| <= |x'|.
    double xn = a.x_prime.norm(), yn = b.x_prime.norm();
    if (xn < yn) std::swap(xn, yn);
    const double denom = (1.0 + yn * yn) * (0.5 + xn) + 1.0 / params.kappa;
    report.min_lower_slack = std::min(report.min_lower_slack, image_dist * denom / (decay_max * dist));
  }

  // Measured constants of |dT*(x) q| vs e^{-kappa x_n} |q|, probed along the
  // coordinate axes and the diagonal at every distinct sample point.
  for (const auto& [a, b] : pairs) {
    for (const CylPoint* pt : {&a, &b}) {
      const JacobianData jd = differential(params, *pt);
      const double scale = std::exp(params.kappa * pt->x_n);
      for (int k = 0; k <= n; ++k) {
        Eigen::VectorXd q = (k < n) ? Eigen::VectorXd::Unit(n, k)
                                    : Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
        const double ratio = (jd.dT.transpose() * q).norm() * scale;
        report.min_dstar_ratio = std::min(report.min_dstar_ratio, ratio);
        report.max_dstar_ratio = std::max(report.max_dstar_ratio, ratio);
      }
    }
  }
  return report;
}

}  // namespace cylcap
