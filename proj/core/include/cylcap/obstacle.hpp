#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cylcap/transform.hpp"

namespace cylcap {

/// Closed solid ball in cylinder coordinates; center = (x', x_n), size n.
struct BallPrim {
  Eigen::VectorXd center;
  double radius = 0.0;
};

/// Cross-section set times an axial interval [a, b]. The cross-section is the
/// full closed unit ball of R^{n-1} or a closed sub-ball of it.
struct SlabPrim {
  bool full_cross = true;
  Eigen::VectorXd cross_center;  // used when !full_cross, size n-1
  double cross_radius = 0.0;     // used when !full_cross
  double a = 0.0, b = 0.0;
};

/// Piece {|x'| = 1} x [a, b] of the lateral boundary.
struct LateralPatchPrim {
  double a = 0.0, b = 0.0;
};

using Primitive = std::variant<BallPrim, SlabPrim, LateralPatchPrim>;

/// The closed Dirichlet set F as a union of primitives. The base plate
/// {|x'| <= 1, x_n = 0} is part of F whenever include_base is set (always the
/// case for sets read from obstacle files); clipped pieces drop it. When
/// axial_clip is set, every membership test intersects with the closed axial
/// band it describes.
struct ObstacleSet {
  std::vector<Primitive> primitives;
  bool include_base = true;
  std::optional<std::pair<double, double>> axial_clip;

  bool empty() const { return primitives.empty() && !include_base; }
};

/// Point membership with inflation delta >= 0 (distance-to-set test) in full
/// cylinder coordinates x = (x', x_n).
bool obstacle_contains(const ObstacleSet& F, const Eigen::VectorXd& x, double delta);

/// Axis-aligned box intersection test in full cylinder coordinates.
bool obstacle_intersects_box(const ObstacleSet& F, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
bool primitive_intersects_box(const Primitive& prim, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// Same tests in axisymmetric (rho, x_n) coordinates; requires
/// obstacle_is_axisymmetric(F).
bool obstacle_contains_axisym(const ObstacleSet& F, double rho, double z, double delta);
bool primitive_intersects_box_axisym(const Primitive& prim, double rho_lo, double rho_hi,
                                     double z_lo, double z_hi);

bool primitive_is_axisymmetric(const Primitive& prim);
bool obstacle_is_axisymmetric(const ObstacleSet& F);

/// [min, max] axial extent of the primitive.
std::pair<double, double> primitive_axial_extent(const Primitive& prim);
/// Largest axial coordinate touched by F (0 when only the base is present).
double obstacle_axial_extent(const ObstacleSet& F);

/// Characteristic size of a primitive: ball radius, slab cross radius
/// (axial thickness for full-cross slabs), patch length.
double primitive_size(const Primitive& prim);

/// F intersected with the closed axial band [j, 2j], as clipped primitives.
/// The base never survives the clip (j >= 1), so include_base is false.
ObstacleSet annular_piece(const ObstacleSet& F, int j);

/// Queryable indicator of the ball-side image T(F) u PT(F) u {0} of F. A ball
/// point is tested by folding to the upper half-ball and mapping back through
/// the inverse transform; inflation is applied in cylinder metric, which the
/// log-radial ball grids keep roughly uniform.
class ObstacleImage {
 public:
  ObstacleImage(TransformParams params, ObstacleSet F, double inflation);

  /// Membership of xi in the inflated image set. Points with |xi| > 1 plus
  /// inflation are outside; the origin is always inside.
  bool contains(const BallPoint& xi) const;
  /// Axisymmetric variant in polar ball coordinates (r, theta), theta the
  /// angle from the positive xi_n axis.
  bool contains_polar(double r, double theta) const;

  double inflation() const { return inflation_; }
  const ObstacleSet& obstacle() const { return F_; }

 private:
  TransformParams params_;
  ObstacleSet F_;
  double inflation_;
};

/// Builds the ball-side indicator of F at the given resolution (inflation
/// = 1 / resolution in cylinder metric).
ObstacleImage transform_obstacle(const TransformParams& params, const ObstacleSet& F, int resolution);

/// JSON (de)serialization of obstacle files:
/// {"primitives":[{"type":"ball","center":[...],"radius":r},
///                {"type":"slab","cross":"full"|{"center":[...],"radius":r},"interval":[a,b]},
///                {"type":"lateral","interval":[a,b]}]}
/// The base plate is implicit and always present. Throws ConfigError on
/// malformed input or dimension mismatch.
ObstacleSet obstacle_from_json_text(const std::string& text, int n);
std::string obstacle_to_json_text(const ObstacleSet& F);

}  // namespace cylcap
