#pragma once

#include <memory>
#include <vector>

#include "cylcap/mesh.hpp"

namespace cylcap {

/// A convex discrete p-energy minimization instance. Dirichlet nodes carry
/// their values exactly; all remaining nodes are free unknowns (the zero
/// Neumann condition is natural and needs no boundary term).
struct PEnergyProblem {
  std::shared_ptr<const MeshData> mesh;
  double p = 2.0;
  double epsilon = 1e-8;  // gradient regularization (|g|^2 + eps^2)^{p/2}
  std::vector<std::uint8_t> dirichlet_mask;
  std::vector<double> dirichlet_values;

  void validate() const;  // throws std::invalid_argument on inconsistency
};

struct SolveOptions {
  double tolerance = 1e-8;     // relative gradient norm
  int max_iterations = 100000;
  int memory = 12;             // quasi-Newton history length
  int threads = 1;
};

struct SolveReport {
  double final_energy = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  double initial_gradient_norm = 0.0;
  double wall_seconds = 0.0;
  bool converged = false;
  bool hit_max_iterations = false;
  bool energy_monotone = true;
  bool line_search_failure = false;
};

/// Total discrete p-energy of the field values (one value per mesh node).
double p_energy(const PEnergyProblem& problem, const std::vector<double>& values, int threads = 1);

/// First variation of the energy; entries at Dirichlet nodes are zeroed.
std::vector<double> p_energy_gradient(const PEnergyProblem& problem, const std::vector<double>& values,
                                      int threads = 1);

/// Minimizes the energy over the free nodes with a limited-memory
/// quasi-Newton descent (diagonally preconditioned, Armijo backtracking).
/// `initial` may be empty, in which case free nodes start from the mean of
/// the Dirichlet data. Convergence means |grad| <= tol * max(1, |grad_0|).
std::pair<DiscreteField, SolveReport> minimize(const PEnergyProblem& problem, const SolveOptions& options,
                                               std::vector<double> initial = {});

}  // namespace cylcap
