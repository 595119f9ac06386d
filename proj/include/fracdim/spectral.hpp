#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "fracdim/fit.hpp"
#include "fracdim/graph.hpp"
#include "fracdim/network.hpp"

namespace fracdim {

class FractalGraph;

struct HeatKernelSeries {
  Vertex base_vertex = 0;
  std::vector<std::int64_t> steps;  ///< n = 1..n_max; the value is at time 2n
  std::vector<double> values;       ///< h_{2n}(x, x) = p_{2n}(x, x) / mu_x
  std::vector<bool> exact;          ///< n <= exactness_horizon
  /// Largest n unaffected by the truncation boundary (distance - 1), or n_max
  /// when no boundary is given.
  std::int64_t exactness_horizon = 0;
  double max_conservation_error = 0.0;  ///< max_n |sum_y p_n(x, y) - 1|
  double max_odd_return = 0.0;          ///< max_n p_{2n+1}(x, x)
  bool monotone = true;                 ///< h_{2n} non-increasing in n
};

/// CSV with columns n,h_2n,exact where n is the even time 2n.
void write_heat_kernel_csv(std::ostream& out, const HeatKernelSeries& series);

struct HeatKernelOptions {
  /// Walks touching these vertices see a degree the infinite graph does not have.
  std::vector<Vertex> truncation_boundary;
  /// Upper bound on n_max * (vertices + 2 * edges) before BudgetExceeded.
  double work_budget = 5e10;
  /// Tolerance for the conservation check (InvariantViolation beyond it).
  double conservation_tolerance = 1e-12;
};

/// h_{2n}(x, x) for n = 1..n_max by propagating v_n = P^n delta_x and folding:
/// p_{2n}(x, x) = sum_y p_n(x, y)^2 mu_x / mu_y.
HeatKernelSeries heat_kernel_diagonal(const WeightedNetwork& net, Vertex x, std::int64_t n_max,
                                      const HeatKernelOptions& options = {});

/// Vertices of a blow-up truncation that lie on its truncation boundary.
std::vector<Vertex> truncation_boundary_vertices(const FractalGraph& blowup);

/// Least-squares slope of -2 ln h_{2n} against ln n over about `samples`
/// log-spaced integers in [n_lo, n_hi]. Throws InvalidArgument if fewer than
/// 10 distinct points remain or the window leaves the exact range.
ExponentFit estimate_ds(const HeatKernelSeries& series, std::int64_t n_lo, std::int64_t n_hi,
                        std::size_t samples = 30);
/// Default window [n_max / 50, n_max] with n_max the last exact step.
ExponentFit estimate_ds(const HeatKernelSeries& series);

/// Log-spaced distinct integers in [lo, hi].
std::vector<std::int64_t> log_spaced(std::int64_t lo, std::int64_t hi, std::size_t samples);

/// r -> mu(B_d(x, r)) for r = 1..r_max.
ScalingSeries volume_growth(const WeightedNetwork& net, Vertex x, std::int64_t r_max);
/// Log-log fit of the ball measure over log-spaced radii in [r_lo, r_hi].
ExponentFit volume_exponent(const ScalingSeries& growth, std::int64_t r_lo, std::int64_t r_hi,
                            std::size_t samples = 30);

/// min over a in A, b in B of the graph distance; DisconnectedError if none.
std::int64_t graph_distance(const Graph& g, std::span<const Vertex> from, std::span<const Vertex> to);

struct DistanceQuantities {
  std::int64_t a = 0;  ///< d(p_1, right face)
  std::int64_t b = 0;  ///< d(left face, right face)
  std::int64_t c = 0;  ///< d(p_1, p_5)
  std::int64_t e = 0;  ///< d(p_1, p_3)
};
DistanceQuantities distance_quantities(const FractalGraph& level_graph);

struct ResistancePair {
  Vertex x = 0;
  Vertex y = 0;
  std::int64_t distance = 0;
  double resistance = 0.0;
};

struct AlphaFit {
  ExponentFit fit;
  std::vector<ResistancePair> pairs;
  /// exp(max |residual|): the smallest C with C^-1 d^alpha <= R <= C d^alpha
  /// around the fitted line
  double constant = 1.0;
};

/// For each target distance, the lowest-index vertex at that BFS distance from x.
std::vector<std::pair<Vertex, Vertex>> pairs_at_distances(const Graph& g, Vertex x,
                                                          std::span<const std::int64_t> distances);

/// Regression of ln R(x, y) on ln d(x, y); needs distances spanning 1.5 decades.
AlphaFit alpha_fit(const WeightedNetwork& net, std::span<const std::pair<Vertex, Vertex>> pairs,
                   const SolverOptions& options = {});

struct DsConsistency {
  double ds = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double predicted = 0.0;  ///< 2 beta / (alpha + beta)
  double gap = 0.0;        ///< |ds - predicted|
  bool both_below_two = false;
};
DsConsistency ds_consistency(double ds, double alpha, double beta);

/// Reference graphs with known walk dimension.
struct ReferenceLattice {
  Graph graph;
  Vertex center = 0;
  std::vector<Vertex> boundary;  ///< vertices missing a neighbor of the infinite lattice
};
/// Integer segment [-radius, radius].
ReferenceLattice line_lattice(std::int64_t radius);
/// {(a, b) : a + b even, |a| <= radius, |b| <= radius} with diagonal edges (+-1, +-1).
ReferenceLattice diagonal_lattice_ball(std::int64_t radius);

}  // namespace fracdim
