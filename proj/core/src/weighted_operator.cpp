#include "cylcap/weighted_operator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cylcap/errors.hpp"

namespace cylcap {

OperatorContext::OperatorContext(TransformParams params_, double p_) : params(params_), p(p_) {
  if (!(p > 1.0)) throw std::invalid_argument("OperatorContext: p must satisfy p > 1");
}

double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double weight(const OperatorContext& ctx, const BallPoint& xi) {
  const double r = xi.xi.norm();
  if (r == 0.0) return 0.0;
  return std::pow(r, ctx.p - ctx.params.n);
}

double weight_ball_integral(const OperatorContext& ctx, double alpha, double r) {
  const double n = ctx.params.n;
  const double exponent = n + alpha * (ctx.p - n);
  if (exponent <= 0.0) return std::numeric_limits<double>::infinity();
  return n * unit_ball_volume(ctx.params.n) / exponent * std::pow(r, exponent);
}

Eigen::VectorXd a_operator(const OperatorContext& ctx, const BallPoint& xi, const Eigen::VectorXd& q) {
  const int n = ctx.params.n;
  if (xi.xi.norm() == 0.0)
    throw UndefinedAtOriginError("a_operator: undefined at xi = 0");
  if (q.norm() == 0.0) return Eigen::VectorXd::Zero(n);

  const double xi_n = xi.xi(n - 1);
  if (xi_n == 0.0) return Eigen::VectorXd::Zero(n);
  if (xi_n < 0.0) {
    // Lower half-ball by reflection: A(xi, q) = P A(P xi, P q).
    Eigen::VectorXd pq = q;
    pq(n - 1) = -pq(n - 1);
    Eigen::VectorXd out = a_operator(ctx, reflect(xi), pq);
    out(n - 1) = -out(n - 1);
    return out;
  }

  const CylPoint x = inverse_map(ctx.params, xi);
  const JacobianData jd = differential(ctx.params, x);
  const Eigen::VectorXd dtq = jd.dT.transpose() * q;
  return std::pow(dtq.norm(), ctx.p - 2.0) / jd.det_abs * (jd.dT * dtq);
}

EllipticityReport ellipticity_check(const OperatorContext& ctx,
                                    const std::vector<std::pair<BallPoint, Eigen::VectorXd>>& samples) {
  EllipticityReport report;
  report.min_dot_ratio = std::numeric_limits<double>::infinity();
  report.min_norm_ratio = std::numeric_limits<double>::infinity();

  for (const auto& [xi, q] : samples) {
    const double qn = q.norm();
    if (qn == 0.0 || xi.xi.norm() == 0.0) continue;
    const Eigen::VectorXd a = a_operator(ctx, xi, q);
    const double w = weight(ctx, xi);
    const double dot_ratio = a.dot(q) / (w * std::pow(qn, ctx.p));
    const double norm_ratio = a.norm() / (w * std::pow(qn, ctx.p - 1.0));
    report.min_dot_ratio = std::min(report.min_dot_ratio, dot_ratio);
    report.max_dot_ratio = std::max(report.max_dot_ratio, dot_ratio);
    report.min_norm_ratio = std::min(report.min_norm_ratio, norm_ratio);
    report.max_norm_ratio = std::max(report.max_norm_ratio, norm_ratio);
    ++report.samples;
  }
  return report;
}

double monotonicity_check(const OperatorContext& ctx, const BallPoint& xi,
                          const Eigen::VectorXd& q1, const Eigen::VectorXd& q2) {
  return (a_operator(ctx, xi, q1) - a_operator(ctx, xi, q2)).dot(q1 - q2);
}

namespace {

// Planes over [a, b], geometrically graded towards coordinate zero when the
// interval touches it. beta controls the depth of the grading.
std::vector<double> quad_axis_planes(double a, double b, int m) {
  constexpr double beta = 7.0;
  std::vector<double> planes;
  auto geometric_side = [&](double from, double to, int count) {
    // from is the singular end; spacing grows away from it.
    for (int i = 1; i < count; ++i) {
      const double t = double(i) / count;
      planes.push_back(from + (to - from) * (std::exp(beta * t) - 1.0) / (std::exp(beta) - 1.0));
    }
  };

  planes.push_back(a);
  if (a < 0.0 && b > 0.0) {
    const int ma = std::max(2, int(std::lround(m * (-a) / (b - a))));
    const int mb = std::max(2, m - ma);
    geometric_side(0.0, a, ma);  // planes in (a, 0), graded towards 0
    planes.push_back(0.0);
    geometric_side(0.0, b, mb);
  } else if (a == 0.0) {
    geometric_side(0.0, b, m);
  } else if (b == 0.0) {
    geometric_side(0.0, a, m);
  } else {
    for (int i = 1; i < m; ++i) planes.push_back(a + (b - a) * i / m);
  }
  planes.push_back(b);
  std::sort(planes.begin(), planes.end());
  return planes;
}

// Fraction of the box [lo, hi] inside the ball of radius^2 r2 around center,
// by exact in/out tests plus recursive bisection of straddling boxes.
double ball_box_fraction(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                         const Eigen::VectorXd& center, double r2, int depth) {
  const int n = int(lo.size());
  double nearest2 = 0.0, farthest2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = center(i);
    const double lo_d = lo(i) - c, hi_d = hi(i) - c;
    const double near_d = (lo_d > 0.0) ? lo_d : (hi_d < 0.0 ? -hi_d : 0.0);
    nearest2 += near_d * near_d;
    const double far_d = std::max(std::abs(lo_d), std::abs(hi_d));
    farthest2 += far_d * far_d;
  }
  if (farthest2 <= r2) return 1.0;
  if (nearest2 >= r2) return 0.0;
  if (depth == 0) return ((0.5 * (lo + hi) - center).squaredNorm() <= r2) ? 1.0 : 0.0;

  double acc = 0.0;
  Eigen::VectorXd clo(n), chi(n);
  const Eigen::VectorXd mid = 0.5 * (lo + hi);
  for (int corner = 0; corner < (1 << n); ++corner) {
    for (int i = 0; i < n; ++i) {
      const bool high = corner & (1 << i);
      clo(i) = high ? mid(i) : lo(i);
      chi(i) = high ? hi(i) : mid(i);
    }
    acc += ball_box_fraction(clo, chi, center, r2, depth - 1);
  }
  return acc / (1 << n);
}

}  // namespace

double weight_quadrature(const OperatorContext& ctx, double alpha,
                         const Eigen::VectorXd& center, double radius, int resolution) {
  const int n = ctx.params.n;
  const double r2 = radius * radius;
  std::vector<std::vector<double>> planes(n);
  for (int i = 0; i < n; ++i)
    planes[i] = quad_axis_planes(center(i) - radius, center(i) + radius, resolution);

  std::vector<int> idx(n, 0);
  Eigen::VectorXd lo(n), hi(n), mid(n);
  double total = 0.0;
  while (true) {
    double vol = 1.0;
    for (int i = 0; i < n; ++i) {
      lo(i) = planes[i][idx[i]];
      hi(i) = planes[i][idx[i] + 1];
      mid(i) = 0.5 * (lo(i) + hi(i));
      vol *= hi(i) - lo(i);
    }
    const double frac = ball_box_fraction(lo, hi, center, r2, 3);
    if (frac > 0.0)
      total += frac * vol * std::pow(mid.norm(), alpha * (ctx.p - n));

    int axis = 0;
    while (axis < n && ++idx[axis] == int(planes[axis].size()) - 1) idx[axis++] = 0;
    if (axis == n) break;
  }
  return total;
}

double muckenhoupt_check(const OperatorContext& ctx, const Eigen::VectorXd& center,
                         double radius, int resolution) {
  const double q1 = weight_quadrature(ctx, 1.0, center, radius, resolution);
  const double q2 = weight_quadrature(ctx, 1.0 / (1.0 - ctx.p), center, radius, resolution);
  const double vol = weight_quadrature(ctx, 0.0, center, radius, resolution);
  return q1 * std::pow(q2, ctx.p - 1.0) / std::pow(vol, ctx.p);
}

}  // namespace cylcap
