#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fracdim/graph.hpp"

namespace fracdim {

class FractalGraph;

/// A graph with positive symmetric edge weights mu_xy. Holds the graph by
/// reference; the graph must outlive the network.
class WeightedNetwork {
 public:
  /// Simple weights (mu_xy = 1).
  explicit WeightedNetwork(const Graph& graph);
  WeightedNetwork(const Graph& graph, std::vector<double> edge_weights);
  // The network only borrows the graph.
  explicit WeightedNetwork(Graph&&) = delete;
  WeightedNetwork(Graph&&, std::vector<double>) = delete;

  const Graph& graph() const noexcept { return *graph_; }
  std::size_t vertex_count() const noexcept { return graph_->vertex_count(); }
  double weight(std::size_t edge_id) const { return weights_[edge_id]; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// mu_x = sum of incident weights.
  double vertex_weight(Vertex x) const { return vertex_weights_[x]; }
  /// mu(A).
  double measure(std::span<const Vertex> vertices) const;
  /// min over edges of mu_xy / mu_x; the (p0) constant.
  double p0_ratio() const;

 private:
  const Graph* graph_;
  std::vector<double> weights_;
  std::vector<double> vertex_weights_;
};

struct SolverOptions {
  double relative_tolerance = 1e-10;
  /// 0 selects max(50 * sqrt(interior size) + 1000, 2 * interior size).
  std::size_t max_iterations = 0;
};

struct PotentialSolution {
  std::vector<double> values;
  /// sum over undirected edges of (v(x) - v(y))^2 mu_xy, i.e. 1 / R(A, B).
  double energy = 0.0;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  std::vector<Vertex> source;
  std::vector<Vertex> sink;

  double resistance() const { return 1.0 / energy; }
};

/// Minimizes the Dirichlet energy with v = 1 on `source` and v = 0 on `sink`
/// by Jacobi-preconditioned conjugate gradients on the interior.
PotentialSolution solve_dirichlet(const WeightedNetwork& net, std::span<const Vertex> source,
                                  std::span<const Vertex> sink, const SolverOptions& options = {});

double effective_resistance(const WeightedNetwork& net, std::span<const Vertex> source,
                            std::span<const Vertex> sink, const SolverOptions& options = {});
double effective_resistance(const WeightedNetwork& net, Vertex x, Vertex y, const SolverOptions& options = {});

/// Dirichlet energy sum_e mu_e (v(u) - v(w))^2 of arbitrary vertex values.
double dirichlet_energy(const WeightedNetwork& net, std::span<const double> values);

/// Unique extension of boundary data that is mu-harmonic off the boundary
/// (with simple weights: each interior value is the average of its neighbors).
std::vector<double> harmonic_extension(const WeightedNetwork& net, std::span<const Vertex> boundary,
                                       std::span<const double> boundary_values, const SolverOptions& options = {});

/// Current per undirected edge, oriented from edge.u to edge.v.
///
/// Convention: theta(x, y) = mu_xy (v(x) - v(y)) / E, so the unweighted net
/// flux out of the source is 1, the unweighted divergence vanishes off the
/// terminals, and the energy is sum_e theta_e^2 / mu_e. Under simple weights
/// this coincides with the weighted-flux convention.
struct UnitFlow {
  std::vector<double> values;

  /// theta(x, y) for an edge joining x and y; antisymmetric by construction.
  double at(const Graph& g, Vertex x, Vertex y) const;
};

struct FlowDiagnostics {
  double max_interior_divergence = 0.0;
  double source_flux = 0.0;  ///< net flux out of the source set
  double sink_flux = 0.0;    ///< net flux out of the sink set (should be -1)
  double energy = 0.0;
};

/// Net outflow sum_y theta(x, y) at every vertex.
std::vector<double> flow_divergence(const Graph& g, const UnitFlow& flow);
double flow_energy(const WeightedNetwork& net, const UnitFlow& flow);
FlowDiagnostics check_flow(const WeightedNetwork& net, const UnitFlow& flow, std::span<const Vertex> source,
                           std::span<const Vertex> sink);

/// Potential-gradient flow normalized by the energy. Throws InvariantViolation
/// if the flow axioms fail beyond 1e-8 or Thomson duality beyond 1e-6.
UnitFlow extract_unit_flow(const PotentialSolution& potential, const WeightedNetwork& net);

/// A unit flow on the fine network from coarse_to_fine[u] to coarse_to_fine[v]
/// of coarse edge `coarse_edge` (u < v).
struct LocalFlow {
  std::size_t coarse_edge = 0;
  UnitFlow flow;
};

struct GlueResult {
  UnitFlow flow;
  double energy = 0.0;            ///< energy of the glued flow on the fine network
  double coarse_energy = 0.0;     ///< sum_e g_e^2 of the coarse flow (simple coarse weights)
  double max_local_energy = 0.0;  ///< max energy over the local flows
  double weighted_local_energy = 0.0;  ///< sum_e g_e^2 E(f_e)
  std::size_t overlap = 0;        ///< max number of local supports meeting one fine edge
  /// overlap * coarse_energy * max_local_energy
  double bound = 0.0;
};

/// Superposes local unit flows weighted by the coarse flow: sum_e g_e f_e.
/// The result is a unit flow between the images of the coarse terminals.
GlueResult glue_flows(const Graph& coarse, const UnitFlow& coarse_flow, std::span<const Vertex> coarse_to_fine,
                      std::span<const LocalFlow> local_flows, const WeightedNetwork& fine);

/// CSV dumps: "vertex_index,a,b,value" and "i,j,flow".
void write_potential_csv(std::ostream& out, const FractalGraph& g, std::span<const double> values);
void write_flow_csv(std::ostream& out, const Graph& g, const UnitFlow& flow);

}  // namespace fracdim
