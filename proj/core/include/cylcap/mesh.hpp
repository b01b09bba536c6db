#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cylcap {

/// One integration cell: a topological box with 2^dim corner nodes. Corner k
/// sits at the "high" end of axis j iff bit j of k is set. edge_len holds the
/// effective physical spacing per topological axis (so curvilinear grids just
/// supply arc lengths), measure the integration volume of the cell.
struct Cell {
  std::array<std::int32_t, 8> corners{};
  double measure = 0.0;
  std::array<double, 3> edge_len{};
};

/// Geometry consumed by the energy kernel. Scalar mode (op_matrix empty):
/// the cell integrand is weight * (|grad u|^2 + eps^2)^{p/2} with the squared
/// gradient averaged over cell edges. Operator mode: the frame gradient g is
/// pushed through the cached cell matrix M (flux_matrix, space_dim x dim) and
/// the integrand is weight * (|M g|^2 + eps^2)^{p/2}, with weight = 1/|J|.
/// mass_weight, when present, adds weight_m * (|u|^2 + eps^2)^{p/2} per cell
/// with u averaged over the corners.
struct MeshData {
  int dim = 2;        // topological dimension of the cells (2 or 3)
  int space_dim = 2;  // ambient coordinate dimension
  std::vector<double> coords;       // space_dim per node
  std::vector<Cell> cells;
  std::vector<double> cell_weight;  // one per cell
  std::vector<double> flux_matrix;  // operator mode: space_dim*dim per cell, column-major
  std::vector<double> mass_weight;  // empty or one per cell

  int node_count() const { return int(coords.size()) / space_dim; }
  bool operator_mode() const { return !flux_matrix.empty(); }
  int corners_per_cell() const { return 1 << dim; }
};

/// Node classes of a classified grid.
enum class NodeClass : std::uint8_t { Interior, Dirichlet, Lateral, FarEnd, OriginAdjacent };

/// Grid-indexed scalar function.
struct DiscreteField {
  std::shared_ptr<const MeshData> mesh;
  std::vector<double> values;
};

/// Writes "x0,...,value" rows with a coordinate header.
void write_field_csv(const DiscreteField& field, const std::string& path);

/// Writes a plain structured-grid text file (dims, per-axis planes, values in
/// lexicographic node order). Requires the tensor layout metadata below.
struct StructuredLayout {
  std::vector<std::vector<double>> axes;   // planes per axis
  std::vector<std::int32_t> node_of_index; // flattened lexicographic index -> node id, -1 for dropped
};
void write_field_structured(const DiscreteField& field, const StructuredLayout& layout,
                            const std::string& path);

}  // namespace cylcap
