#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracdim/lattice.hpp"
#include "fracdim/network.hpp"
#include "fracdim/penergy.hpp"
#include "fracdim/report.hpp"
#include "fracdim/schedule.hpp"
#include "fracdim/spectral.hpp"

namespace fracdim {

/// R between the left and right faces of a level graph.
double face_resistance(const FractalGraph& g, const SolverOptions& options = {});
/// R between the named points p_i and p_j.
double point_resistance(const FractalGraph& g, int i, int j, const SolverOptions& options = {});

/// The resistance instance behind the local-flow gluing bound: the fine graph
/// G_{coarse_level + local_level}(f) with f(coarse_level + local_level) = 1 built
/// from copies of G_{local_level}, the coarse carpet graph G^SC_{coarse_level},
/// local flows solved inside one cell per coarse edge, and the optimal coarse
/// p_1 -> p_5 flow.
struct GlueInstance {
  GlueResult glue;
  double direct_resistance = 0.0;     ///< R(p_1, p_5) on the fine graph
  double coarse_resistance = 0.0;     ///< R^SC_{coarse_level, pt}
  double local_point_resistance = 0.0;  ///< R_{local_level, pt} of the cell schedule
  double max_local_energy = 0.0;
};
GlueInstance glue_instance(const Schedule& schedule, int fine_level, int local_level);

/// Heat kernel, volume and resistance fits on a Vicsek blow-up.
struct SpectralSummary {
  HeatKernelSeries heat;
  ExponentFit ds;
  ExponentFit beta;
  AlphaFit alpha;
  DsConsistency consistency;
  std::size_t vertices = 0;
};
SpectralSummary blowup_spectral_summary(const Schedule& schedule, int level, std::int64_t n_max,
                                        bool with_alpha = true);

struct ExperimentConfig {
  int n_max = -1;  ///< experiment-specific default when negative
  std::vector<std::string> schedules = {"const0", "const1", "fstar"};
  int level = 3;
  std::size_t samples = 50;
  std::uint64_t seed = 20240601;
  double p_lo = 1.25;
  double p_hi = 3.0;
  double p_tolerance = 0.01;
  int k_max = 4;
  int ds_level = 6;
  std::int64_t ds_steps = 500;
};

nlohmann::ordered_json to_json(const ExperimentConfig& config);

ExperimentReport exp_lemma_rpt(int n_max, const std::vector<Schedule>& schedules);
ExperimentReport exp_theorem_res(int n_max);
ExperimentReport exp_lemma_exp(int n_max);
ExperimentReport exp_prop_nxy(int level, std::size_t samples, std::uint64_t seed);
ExperimentReport exp_lemma_dn(int n_max);
ExperimentReport exp_harnack(int n_max);
ExperimentReport exp_appendix_resistances(int n_max);
ExperimentReport exp_main_ordering(const ExperimentConfig& config);

/// Ids accepted by run_experiment, excluding "all".
const std::vector<std::string>& experiment_ids();

/// Runs one experiment by id with the config (missing values take defaults).
ExperimentReport run_experiment(const std::string& id, const ExperimentConfig& config);

/// Runs every experiment, `threads` at a time.
std::vector<ExperimentReport> run_all_experiments(const ExperimentConfig& config, unsigned threads = 1);

}  // namespace fracdim
