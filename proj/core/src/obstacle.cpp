#include "cylcap/obstacle.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "cylcap/errors.hpp"

namespace cylcap {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Distance from point to axis-aligned interval.
double interval_dist(double v, double a, double b) {
  if (v < a) return a - v;
  if (v > b) return v - b;
  return 0.0;
}

bool in_clip(const ObstacleSet& F, double x_n, double delta) {
  if (!F.axial_clip) return true;
  return x_n >= F.axial_clip->first - delta && x_n <= F.axial_clip->second + delta;
}

bool clip_overlaps(const ObstacleSet& F, double z_lo, double z_hi) {
  if (!F.axial_clip) return true;
  return z_hi >= F.axial_clip->first && z_lo <= F.axial_clip->second;
}

}  // namespace

bool obstacle_contains(const ObstacleSet& F, const Eigen::VectorXd& x, double delta) {
  const int n = int(x.size());
  const auto xp = x.head(n - 1);
  const double xn = x(n - 1);

  if (!in_clip(F, xn, delta)) return false;
  if (F.include_base && xn <= delta && xp.norm() <= 1.0 + delta) return true;

  for (const auto& prim : F.primitives) {
    if (const auto* ball = std::get_if<BallPrim>(&prim)) {
      if ((x - ball->center).norm() <= ball->radius + delta) return true;
    } else if (const auto* slab = std::get_if<SlabPrim>(&prim)) {
      if (xn < slab->a - delta || xn > slab->b + delta) continue;
      if (slab->full_cross) {
        if (xp.norm() <= 1.0 + delta) return true;
      } else if ((xp - slab->cross_center).norm() <= slab->cross_radius + delta) {
        return true;
      }
    } else if (const auto* patch = std::get_if<LateralPatchPrim>(&prim)) {
      if (xn >= patch->a - delta && xn <= patch->b + delta && xp.norm() >= 1.0 - delta) return true;
    }
  }
  return false;
}

bool primitive_intersects_box(const Primitive& prim, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const int n = int(lo.size());
  if (const auto* ball = std::get_if<BallPrim>(&prim)) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = interval_dist(ball->center(i), lo(i), hi(i));
      d2 += d * d;
    }
    return d2 <= ball->radius * ball->radius;
  }
  if (const auto* slab = std::get_if<SlabPrim>(&prim)) {
    if (hi(n - 1) < slab->a || lo(n - 1) > slab->b) return false;
    if (slab->full_cross) return true;  // grid boxes always meet the unit cross ball
    double d2 = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      const double d = interval_dist(slab->cross_center(i), lo(i), hi(i));
      d2 += d * d;
    }
    return d2 <= slab->cross_radius * slab->cross_radius;
  }
  const auto& patch = std::get<LateralPatchPrim>(prim);
  if (hi(n - 1) < patch.a || lo(n - 1) > patch.b) return false;
  double far2 = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double d = std::max(std::abs(lo(i)), std::abs(hi(i)));
    far2 += d * d;
  }
  return far2 >= 1.0;
}

bool obstacle_intersects_box(const ObstacleSet& F, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const int n = int(lo.size());
  if (!clip_overlaps(F, lo(n - 1), hi(n - 1))) return false;
  if (F.include_base && lo(n - 1) <= 0.0) return true;
  for (const auto& prim : F.primitives)
    if (primitive_intersects_box(prim, lo, hi)) return true;
  return false;
}

bool obstacle_contains_axisym(const ObstacleSet& F, double rho, double z, double delta) {
  if (!in_clip(F, z, delta)) return false;
  if (F.include_base && z <= delta && rho <= 1.0 + delta) return true;

  for (const auto& prim : F.primitives) {
    if (const auto* ball = std::get_if<BallPrim>(&prim)) {
      const double cz = ball->center(ball->center.size() - 1);
      const double d = std::hypot(rho, z - cz);
      if (d <= ball->radius + delta) return true;
    } else if (const auto* slab = std::get_if<SlabPrim>(&prim)) {
      if (z < slab->a - delta || z > slab->b + delta) continue;
      const double cross_r = slab->full_cross ? 1.0 : slab->cross_radius;
      if (rho <= cross_r + delta) return true;
    } else if (const auto* patch = std::get_if<LateralPatchPrim>(&prim)) {
      if (z >= patch->a - delta && z <= patch->b + delta && rho >= 1.0 - delta) return true;
    }
  }
  return false;
}

bool primitive_intersects_box_axisym(const Primitive& prim, double rho_lo, double rho_hi,
                                     double z_lo, double z_hi) {
  if (const auto* ball = std::get_if<BallPrim>(&prim)) {
    const double cz = ball->center(ball->center.size() - 1);
    const double dr = interval_dist(0.0, rho_lo, rho_hi);
    const double dz = interval_dist(cz, z_lo, z_hi);
    return dr * dr + dz * dz <= ball->radius * ball->radius;
  }
  if (const auto* slab = std::get_if<SlabPrim>(&prim)) {
    if (z_hi < slab->a || z_lo > slab->b) return false;
    const double cross_r = slab->full_cross ? 1.0 : slab->cross_radius;
    return rho_lo <= cross_r;
  }
  const auto& patch = std::get<LateralPatchPrim>(prim);
  return !(z_hi < patch.a || z_lo > patch.b) && rho_hi >= 1.0;
}

bool primitive_is_axisymmetric(const Primitive& prim) {
  if (const auto* ball = std::get_if<BallPrim>(&prim))
    return ball->center.head(ball->center.size() - 1).norm() == 0.0;
  if (const auto* slab = std::get_if<SlabPrim>(&prim))
    return slab->full_cross || slab->cross_center.norm() == 0.0;
  return true;  // lateral patches
}

bool obstacle_is_axisymmetric(const ObstacleSet& F) {
  return std::all_of(F.primitives.begin(), F.primitives.end(), primitive_is_axisymmetric);
}

std::pair<double, double> primitive_axial_extent(const Primitive& prim) {
  if (const auto* ball = std::get_if<BallPrim>(&prim)) {
    const double cz = ball->center(ball->center.size() - 1);
    return {cz - ball->radius, cz + ball->radius};
  }
  if (const auto* slab = std::get_if<SlabPrim>(&prim)) return {slab->a, slab->b};
  const auto& patch = std::get<LateralPatchPrim>(prim);
  return {patch.a, patch.b};
}

double obstacle_axial_extent(const ObstacleSet& F) {
  double top = 0.0;
  for (const auto& prim : F.primitives) {
    double hi = primitive_axial_extent(prim).second;
    if (F.axial_clip) hi = clamp(hi, F.axial_clip->first, F.axial_clip->second);
    top = std::max(top, hi);
  }
  return top;
}

double primitive_size(const Primitive& prim) {
  if (const auto* ball = std::get_if<BallPrim>(&prim)) return ball->radius;
  if (const auto* slab = std::get_if<SlabPrim>(&prim))
    return slab->full_cross ? slab->b - slab->a : slab->cross_radius;
  const auto& patch = std::get<LateralPatchPrim>(prim);
  return patch.b - patch.a;
}

ObstacleSet annular_piece(const ObstacleSet& F, int j) {
  if (j < 1) throw std::invalid_argument("annular_piece: j must be >= 1");
  const double band_lo = double(j), band_hi = 2.0 * double(j);

  ObstacleSet piece;
  piece.include_base = false;
  piece.axial_clip = {{band_lo, band_hi}};
  for (const auto& prim : F.primitives) {
    auto [lo, hi] = primitive_axial_extent(prim);
    if (F.axial_clip) {
      lo = std::max(lo, F.axial_clip->first);
      hi = std::min(hi, F.axial_clip->second);
    }
    if (hi <= band_lo || lo >= band_hi) continue;  // empty or zero-thickness overlap
    Primitive clipped = prim;
    if (auto* slab = std::get_if<SlabPrim>(&clipped)) {
      slab->a = std::max(slab->a, band_lo);
      slab->b = std::min(slab->b, band_hi);
    } else if (auto* patch = std::get_if<LateralPatchPrim>(&clipped)) {
      patch->a = std::max(patch->a, band_lo);
      patch->b = std::min(patch->b, band_hi);
    }
    piece.primitives.push_back(std::move(clipped));
  }
  return piece;
}

ObstacleImage::ObstacleImage(TransformParams params, ObstacleSet F, double inflation)
    : params_(params), F_(std::move(F)), inflation_(inflation) {}

bool ObstacleImage::contains(const BallPoint& xi) const {
  const int n = params_.n;
  const double r = xi.xi.norm();
  if (r <= 1e-300) return true;  // the origin is always part of the image
  if (r > 1.0 + 1e-12) return false;

  BallPoint folded{xi.xi};
  folded.xi(n - 1) = std::abs(folded.xi(n - 1));
  const CylPoint x = inverse_map(params_, folded);
  Eigen::VectorXd full(n);
  full.head(n - 1) = x.x_prime;
  full(n - 1) = x.x_n;
  return obstacle_contains(F_, full, inflation_);
}

bool ObstacleImage::contains_polar(double r, double theta) const {
  if (r <= 1e-300) return true;
  if (r > 1.0 + 1e-12) return false;
  const double cos_fold = std::abs(std::cos(theta));
  const double rho_x = std::sin(theta) / (1.0 + cos_fold);
  const double x_n = -std::log(r) / params_.kappa;
  return obstacle_contains_axisym(F_, rho_x, x_n, inflation_);
}

ObstacleImage transform_obstacle(const TransformParams& params, const ObstacleSet& F, int resolution) {
  if (resolution < 1) throw std::invalid_argument("transform_obstacle: resolution must be >= 1");
  return ObstacleImage(params, F, 1.0 / resolution);
}

ObstacleSet obstacle_from_json_text(const std::string& text, int n) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("obstacle JSON parse error: ") + e.what());
  }

  auto read_vector = [](const nlohmann::json& arr, int expected, const char* what) {
    if (!arr.is_array() || int(arr.size()) != expected)
      throw ConfigError(std::string("obstacle JSON: ") + what + " must be an array of length " +
                        std::to_string(expected));
    Eigen::VectorXd v(expected);
    for (int i = 0; i < expected; ++i) v(i) = arr.at(i).get<double>();
    return v;
  };

  ObstacleSet F;
  if (!doc.contains("primitives") || !doc["primitives"].is_array())
    throw ConfigError("obstacle JSON: missing \"primitives\" array");

  for (const auto& item : doc["primitives"]) {
    const std::string type = item.value("type", "");
    if (type == "ball") {
      BallPrim ball;
      ball.center = read_vector(item.at("center"), n, "ball center");
      ball.radius = item.at("radius").get<double>();
      if (!(ball.radius > 0.0)) throw ConfigError("obstacle JSON: ball radius must be positive");
      F.primitives.emplace_back(std::move(ball));
    } else if (type == "slab") {
      SlabPrim slab;
      const auto& cross = item.at("cross");
      if (cross.is_string() && cross.get<std::string>() == "full") {
        slab.full_cross = true;
      } else if (cross.is_object()) {
        slab.full_cross = false;
        slab.cross_center = read_vector(cross.at("center"), n - 1, "slab cross center");
        slab.cross_radius = cross.at("radius").get<double>();
        if (!(slab.cross_radius > 0.0)) throw ConfigError("obstacle JSON: slab cross radius must be positive");
      } else {
        throw ConfigError("obstacle JSON: slab cross must be \"full\" or {center, radius}");
      }
      const auto& iv = item.at("interval");
      slab.a = iv.at(0).get<double>();
      slab.b = iv.at(1).get<double>();
      if (!(slab.b > slab.a) || slab.a < 0.0)
        throw ConfigError("obstacle JSON: slab interval must satisfy 0 <= a < b");
      F.primitives.emplace_back(std::move(slab));
    } else if (type == "lateral") {
      LateralPatchPrim patch;
      const auto& iv = item.at("interval");
      patch.a = iv.at(0).get<double>();
      patch.b = iv.at(1).get<double>();
      if (!(patch.b > patch.a) || patch.a < 0.0)
        throw ConfigError("obstacle JSON: lateral interval must satisfy 0 <= a < b");
      F.primitives.emplace_back(patch);
    } else {
      throw ConfigError("obstacle JSON: unknown primitive type \"" + type + "\"");
    }
  }
  return F;
}

std::string obstacle_to_json_text(const ObstacleSet& F) {
  nlohmann::ordered_json doc;
  doc["primitives"] = nlohmann::ordered_json::array();
  for (const auto& prim : F.primitives) {
    nlohmann::ordered_json item;
    if (const auto* ball = std::get_if<BallPrim>(&prim)) {
      item["type"] = "ball";
      item["center"] = std::vector<double>(ball->center.data(), ball->center.data() + ball->center.size());
      item["radius"] = ball->radius;
    } else if (const auto* slab = std::get_if<SlabPrim>(&prim)) {
      item["type"] = "slab";
      if (slab->full_cross) {
        item["cross"] = "full";
      } else {
        item["cross"] = {{"center", std::vector<double>(slab->cross_center.data(),
                                                        slab->cross_center.data() + slab->cross_center.size())},
                         {"radius", slab->cross_radius}};
      }
      item["interval"] = {slab->a, slab->b};
    } else {
      const auto& patch = std::get<LateralPatchPrim>(prim);
      item["type"] = "lateral";
      item["interval"] = {patch.a, patch.b};
    }
    doc["primitives"].push_back(std::move(item));
  }
  return doc.dump(2);
}

}  // namespace cylcap
