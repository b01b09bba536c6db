#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cylcap/transform.hpp"

namespace cylcap {

/// Exponent and transform parameters shared by the weighted-operator routines.
struct OperatorContext {
  TransformParams params;
  double p = 2.0;

  OperatorContext(TransformParams params_, double p_);
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// The degeneracy weight w(xi) = |xi|^{p-n} for xi != 0, and w(0) = 0.
double weight(const OperatorContext& ctx, const BallPoint& xi);

/// Closed form of the integral of w^alpha over the centred ball B_r:
///   n omega_n / (n + alpha (p - n)) * r^{n + alpha (p - n)}   if alpha (n - p) < n,
/// and +infinity otherwise. Divergence is returned as a value, not an error.
double weight_ball_integral(const OperatorContext& ctx, double alpha, double r);

/// The transformed flux A(xi, q). For xi_n > 0 evaluated at x = T^{-1}(xi) as
///   |dT*(x) q|^{p-2} |J_T(x)|^{-1} dT(x) dT*(x) q,
/// for xi_n < 0 via A(xi, q) = P A(P xi, P q), and A = 0 on {xi_n = 0}.
/// Throws UndefinedAtOriginError for xi = 0.
Eigen::VectorXd a_operator(const OperatorContext& ctx, const BallPoint& xi, const Eigen::VectorXd& q);

/// Observed ellipticity constants over a sample of (xi, q) pairs.
struct EllipticityReport {
  double min_dot_ratio = 0.0;   // A(xi,q).q / (w |q|^p)
  double max_dot_ratio = 0.0;
  double min_norm_ratio = 0.0;  // |A(xi,q)| / (w |q|^{p-1})
  double max_norm_ratio = 0.0;
  int samples = 0;

  bool positive() const { return samples == 0 || min_dot_ratio > 0.0; }
};

EllipticityReport ellipticity_check(const OperatorContext& ctx,
                                    const std::vector<std::pair<BallPoint, Eigen::VectorXd>>& samples);

/// (A(xi,q1) - A(xi,q2)) . (q1 - q2); nonnegative, zero only for q1 = q2.
double monotonicity_check(const OperatorContext& ctx, const BallPoint& xi,
                          const Eigen::VectorXd& q1, const Eigen::VectorXd& q2);

/// Midpoint quadrature of w^alpha over the ball B(center, radius) on a tensor
/// grid graded towards the coordinate origin (where the weight is singular or
/// degenerate). Cells crossing the sphere are handled by recursive bisection.
/// `resolution` is the base number of cells per axis.
double weight_quadrature(const OperatorContext& ctx, double alpha,
                         const Eigen::VectorXd& center, double radius, int resolution);

/// Muckenhoupt quotient of the ball B(center, radius):
///   (int_B w)(int_B w^{1/(1-p)})^{p-1} / |B|^p,
/// all three integrals evaluated with the same quadrature.
double muckenhoupt_check(const OperatorContext& ctx, const Eigen::VectorXd& center,
                         double radius, int resolution);

}  // namespace cylcap
