#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracdim/fit.hpp"
#include "fracdim/graph.hpp"
#include "fracdim/schedule.hpp"

namespace fracdim {

struct PEnergyOptions {
  double eps_start = 1e-2;
  double eps_end = 1e-10;
  double eps_factor = 0.1;
  /// A stage ends after `stall_count` consecutive relative changes below this.
  double relative_change = 1e-9;
  std::size_t stall_count = 3;
  std::size_t max_iterations_per_stage = 400;
  /// Weights are clamped to [w_max * weight_floor, w_max] in each solve.
  double weight_floor = 1e-12;
};

struct PEnergyResult {
  double p = 2.0;
  /// sum over undirected edges of |f(x) - f(y)|^p at the minimizer
  double value = 0.0;
  std::vector<double> minimizer;
  std::size_t iterations = 0;
  bool converged = false;
  double pre_clip_value = 0.0;
  /// Smoothed objective after every iteration, per epsilon stage.
  std::vector<std::vector<double>> stage_objectives;
};

/// sum over undirected edges of |f(u) - f(v)|^p
double p_energy_of(const Graph& g, std::span<const double> values, double p);

/// Minimizes the p-energy with f = 1 on `left` and f = 0 on `right` by
/// epsilon-continued iteratively reweighted least squares with an exact line
/// search, so the smoothed objective never increases within a stage.
PEnergyResult p_energy(const Graph& g, std::span<const Vertex> left, std::span<const Vertex> right, double p,
                       const PEnergyOptions& options = {});

/// Face-to-face p-energies of a level-k family member, k = 0..k_max.
struct EnergySeries {
  double p = 2.0;
  std::vector<PEnergyResult> results;
  ScalingSeries series;  ///< index k, value E_{p,k}, ratios as decay-rate estimates
};

EnergySeries sc_energy_series(double p, int k_max, const PEnergyOptions& options = {});

/// Energy of G_k(f) between its faces for the schedule f.
PEnergyResult hybrid_energy(double p, int k, const Schedule& schedule, const PEnergyOptions& options = {});

struct HybridSup {
  double value = 0.0;
  std::string argmax_window;
  std::int64_t argmax_shift = 0;
  /// distinct windows f(a+1..a+k) with their energies and first shift a
  std::map<std::string, double> window_energy;
  std::map<std::string, std::int64_t> window_first_shift;
};

/// Max over a = 0..a_max of E_p(G_k(F_a), faces), F_a(n) = f(a + n). The graph
/// depends on the window only, so each distinct window is solved once. If
/// `cache` is given it maps window strings to energies at this p and k.
HybridSup hybrid_energy_sup(double p, int k, const Schedule& schedule, std::int64_t a_max,
                            const PEnergyOptions& options = {}, std::map<std::string, double>* cache = nullptr);

/// Shift bound that reaches every distinct k-window of f*: (k+1)^3.
std::int64_t default_shift_bound(int k);

/// Two decay-rate estimates per p: the last and the penultimate consecutive ratio.
struct GammaEstimate {
  double last = 0.0;
  double penultimate = 0.0;
};
using GammaProvider = std::function<GammaEstimate(double p)>;

struct PhaseTransitionEstimate {
  double p_star = 0.0;
  double p_lo = 0.0;  ///< final bracket
  double p_hi = 0.0;
  double initial_lo = 0.0;
  double initial_hi = 0.0;
  double tolerance = 0.0;
  /// root of the penultimate-ratio estimate; bias = p_star - p_star_penultimate
  std::optional<double> p_star_penultimate;
  double bias = 0.0;
  std::map<double, GammaEstimate> gamma_table;
  bool gamma_decreasing = true;
};

/// Bisection on gamma_p = 1. Throws InvalidArgument unless
/// gamma(p_lo) > 1 > gamma(p_hi). With `with_bias`, runs a second bisection on
/// the penultimate ratio to measure the finite-depth bias.
PhaseTransitionEstimate estimate_arc_dimension(const GammaProvider& provider, double p_lo, double p_hi, double tol,
                                               bool with_bias = true);

/// Provider backed by sc_energy_series(p, k_max).
GammaProvider sc_gamma_provider(int k_max, const PEnergyOptions& options = {});

/// Provider backed by hybrid_energy_sup over k = k_max - 2 .. k_max.
GammaProvider hybrid_gamma_provider(int k_max, const Schedule& schedule, const PEnergyOptions& options = {});

}  // namespace fracdim
