#include "cylcap/mesh.hpp"

#include <fstream>
#include <stdexcept>

namespace cylcap {

namespace {
std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.precision(17);
  return out;
}
}  // namespace

void write_field_csv(const DiscreteField& field, const std::string& path) {
  auto out = open_or_throw(path);
  const MeshData& mesh = *field.mesh;
  for (int d = 0; d < mesh.space_dim; ++d) out << "x" << d << ",";
  out << "value\n";
  const int n = mesh.node_count();
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < mesh.space_dim; ++d) out << mesh.coords[std::size_t(i) * mesh.space_dim + d] << ",";
    out << field.values[i] << "\n";
  }
}

void write_field_structured(const DiscreteField& field, const StructuredLayout& layout,
                            const std::string& path) {
  auto out = open_or_throw(path);
  out << "# structured grid field\n";
  out << "dims:";
  std::size_t total = 1;
  for (const auto& axis : layout.axes) {
    out << " " << axis.size();
    total *= axis.size();
  }
  out << "\n";
  for (std::size_t a = 0; a < layout.axes.size(); ++a) {
    out << "axis" << a << ":";
    for (double v : layout.axes[a]) out << " " << v;
    out << "\n";
  }
  out << "values:\n";
  if (layout.node_of_index.size() != total)
    throw std::runtime_error("write_field_structured: layout index table does not match dims");
  for (std::size_t i = 0; i < total; ++i) {
    const std::int32_t node = layout.node_of_index[i];
    if (node < 0)
      out << "nan\n";
    else
      out << field.values[node] << "\n";
  }
}

}  // namespace cylcap
