#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace cylcap {

/// Parameters of the half-cylinder <-> ball change of variables.
/// The ambient dimension is n >= 2 and kappa > 0 sets the axial decay rate
/// |T(x)| = exp(-kappa * x_n).
struct TransformParams {
  int n = 2;
  double kappa = 1.0;

  TransformParams(int n_, double kappa_);
};

/// Point of the closed half-cylinder in split coordinates (x', x_n),
/// x' in R^{n-1}, |x'| <= 1 inside the cylinder, x_n >= 0 axial.
struct CylPoint {
  Eigen::VectorXd x_prime;
  double x_n = 0.0;
};

/// Point of the (closed) unit ball in target coordinates xi in R^n.
struct BallPoint {
  Eigen::VectorXd xi;
};

/// Differential of the forward map at a cylinder point.
struct JacobianData {
  Eigen::MatrixXd dT;   // dT(k, j) = d xi_k / d x_j
  double det_abs = 0.0; // |det dT|, from the closed form
};

/// Forward map T: cylinder coordinates to ball coordinates,
///   xi' = 2 e^{-kappa x_n} x' / (1 + |x'|^2),
///   xi_n = e^{-kappa x_n} (1 - |x'|^2) / (1 + |x'|^2).
BallPoint forward_map(const TransformParams& params, const CylPoint& x);

/// Inverse map T^{-1}: x' = xi' / (|xi| + xi_n), x_n = -log|xi| / kappa.
/// Throws ExcludedRayError when |xi'| < 1e-14 and xi_n <= 0 (the ray where
/// the inverse is undefined, including the origin).
CylPoint inverse_map(const TransformParams& params, const BallPoint& xi);

/// Analytic differential of the forward map. det_abs carries the closed form
/// kappa 2^{n-1} e^{-kappa n x_n} / (1 + |x'|^2)^{n-1}, so comparing it with
/// det(dT) is a nontrivial consistency check.
JacobianData differential(const TransformParams& params, const CylPoint& x);

/// Reflection P(xi', xi_n) = (xi', -xi_n). Exact involution.
BallPoint reflect(const BallPoint& xi);

/// Measured distortion constants of the forward map over a point sample.
struct BoundsReport {
  double upper_bound = 0.0;      // 5 + 2 kappa, the proven Lipschitz factor
  double max_upper_ratio = 0.0;  // sup |T(x)-T(y)| / (e^{-kappa min(x_n,y_n)} |x-y|)
  double min_lower_slack = 0.0;  // inf |T(x)-T(y)| * denom / (e^{-kappa max(x_n,y_n)} |x-y|)
  double min_dstar_ratio = 0.0;  // bounds of |dT*(x) q| e^{kappa x_n} / |q|
  double max_dstar_ratio = 0.0;
  int evaluated_pairs = 0;
  int skipped_pairs = 0;  // coincident pairs, ratio undefined

  bool upper_ok() const { return max_upper_ratio <= upper_bound * (1.0 + 1e-12); }
  bool lower_ok() const { return min_lower_slack >= 1.0 - 1e-12; }
};

/// Evaluates the two-sided distance distortion bounds of the forward map on
/// sample pairs with |x'| <= 1, plus the measured constants in the
/// |dT* q| vs e^{-kappa x_n} |q| comparison. The lower-bound denominator is
/// (1 + |y'|^2)(1/2 + |x'|) + 1/kappa with points labelled so |y'| <= |x'|.
BoundsReport geometric_bounds_check(const TransformParams& params,
                                    const std::vector<std::pair<CylPoint, CylPoint>>& pairs);

}  // namespace cylcap
