#include "fracdim/penergy.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>

#include "fracdim/errors.hpp"
#include "fracdim/lattice.hpp"

namespace fracdim {

double p_energy_of(const Graph& g, std::span<const double> values, double p) {
  double total = 0.0;
  for (const auto& e : g.edges()) total += std::pow(std::abs(values[e.u] - values[e.v]), p);
  return total;
}

namespace {

constexpr std::size_t kFixed = std::numeric_limits<std::size_t>::max();

double smoothed(const Graph& g, const std::vector<double>& f, double p, double eps) {
  double total = 0.0;
  const double e2 = eps * eps;
  for (const auto& e : g.edges()) {
    const double d = f[e.u] - f[e.v];
    total += std::pow(d * d + e2, 0.5 * p);
  }
  return total;
}

// d/ds of the smoothed objective at f + s * dir.
double smoothed_slope(const Graph& g, const std::vector<double>& f, const std::vector<double>& dir, double s, double p,
                      double eps) {
  double total = 0.0;
  const double e2 = eps * eps;
  for (const auto& e : g.edges()) {
    const double dd = dir[e.u] - dir[e.v];
    if (dd == 0.0) continue;
    const double d = f[e.u] - f[e.v] + s * dd;
    total += p * std::pow(d * d + e2, 0.5 * p - 1.0) * d * dd;
  }
  return total;
}

// The smoothed objective is convex along any line, so its minimizer on [0, 1]
// is found by bisection on the sign of the slope.
double line_search(const Graph& g, const std::vector<double>& f, const std::vector<double>& dir, double p,
                   double eps) {
  if (smoothed_slope(g, f, dir, 0.0, p, eps) >= 0.0) return 0.0;
  if (smoothed_slope(g, f, dir, 1.0, p, eps) <= 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (smoothed_slope(g, f, dir, mid, p, eps) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PEnergyResult p_energy(const Graph& g, std::span<const Vertex> left, std::span<const Vertex> right, double p,
                       const PEnergyOptions& options) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p-energy needs p > 1");
  if (left.empty() || right.empty()) throw InvalidArgument("left and right sets must be nonempty");
  const std::size_t n = g.vertex_count();
  std::vector<double> f(n, 0.0);
  std::vector<int> fixed(n, 0);
  for (Vertex x : left) {
    if (x >= n) throw InvalidArgument("left vertex out of range");
    fixed[x] = 1;
    f[x] = 1.0;
  }
  for (Vertex x : right) {
    if (x >= n) throw InvalidArgument("right vertex out of range");
    if (fixed[x]) throw InvalidArgument("left and right sets must be disjoint");
    fixed[x] = 1;
    f[x] = 0.0;
  }
  if (!is_connected(g)) throw DisconnectedError("p-energy needs a connected graph");

  std::vector<std::size_t> slot(n, kFixed);
  std::vector<Vertex> interior;
  for (Vertex x = 0; x < n; ++x)
    if (!fixed[x]) {
      slot[x] = interior.size();
      interior.push_back(x);
    }
  const std::size_t m = interior.size();

  PEnergyResult result;
  result.p = p;
  if (m == 0) {
    result.value = result.pre_clip_value = p_energy_of(g, f, p);
    result.minimizer = std::move(f);
    result.converged = true;
    return result;
  }

  // Fixed sparsity pattern of the interior-restricted weighted Laplacian.
  std::vector<Eigen::Triplet<double>> pattern;
  for (const auto& e : g.edges()) {
    const auto su = slot[e.u], sv = slot[e.v];
    if (su != kFixed) pattern.emplace_back(su, su, 1.0);
    if (sv != kFixed) pattern.emplace_back(sv, sv, 1.0);
    if (su != kFixed && sv != kFixed) {
      pattern.emplace_back(su, sv, -1.0);
      pattern.emplace_back(sv, su, -1.0);
    }
  }
  Eigen::SparseMatrix<double> matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  matrix.setFromTriplets(pattern.begin(), pattern.end());
  matrix.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.analyzePattern(matrix);

  // Start from the harmonic (p = 2) solution.
  std::vector<double> weights(g.edge_count(), 1.0);
  auto weighted_solve = [&](std::vector<double>& out) {
    for (int k = 0; k < matrix.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it) it.valueRef() = 0.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    const auto edges = g.edges();
    for (std::size_t id = 0; id < edges.size(); ++id) {
      const auto& e = edges[id];
      const double w = weights[id];
      const auto su = slot[e.u], sv = slot[e.v];
      if (su != kFixed) {
        matrix.coeffRef(su, su) += w;
        if (sv != kFixed)
          matrix.coeffRef(su, sv) -= w;
        else
          rhs[su] += w * f[e.v];
      }
      if (sv != kFixed) {
        matrix.coeffRef(sv, sv) += w;
        if (su != kFixed)
          matrix.coeffRef(sv, su) -= w;
        else
          rhs[sv] += w * f[e.u];
      }
    }
    solver.factorize(matrix);
    if (solver.info() != Eigen::Success) throw SolverError("weighted Laplacian factorization failed", 0.0, 0);
    const Eigen::VectorXd u = solver.solve(rhs);
    out = f;
    for (std::size_t i = 0; i < m; ++i) out[interior[i]] = u[static_cast<Eigen::Index>(i)];
  };
  weighted_solve(f);

  const bool quadratic = p == 2.0;
  std::vector<double> candidate, direction(n, 0.0);
  bool all_stages_converged = true;
  for (double eps = options.eps_start; eps >= options.eps_end * (1.0 - 1e-9); eps *= options.eps_factor) {
    if (quadratic) {
      // The first solve is already exact.
      result.stage_objectives.push_back({smoothed(g, f, p, 0.0)});
      break;
    }
    std::vector<double> history{smoothed(g, f, p, eps)};
    std::size_t calm = 0;
    bool stage_converged = false;
    for (std::size_t it = 0; it < options.max_iterations_per_stage; ++it) {
      double w_max = 0.0;
      const auto edges = g.edges();
      for (std::size_t id = 0; id < edges.size(); ++id) {
        const double d = f[edges[id].u] - f[edges[id].v];
        weights[id] = std::pow(d * d + eps * eps, 0.5 * (p - 2.0));
        w_max = std::max(w_max, weights[id]);
      }
      const double w_min = w_max * options.weight_floor;
      for (double& w : weights) w = std::clamp(w, w_min, w_max);
      weighted_solve(candidate);
      for (Vertex x = 0; x < n; ++x) direction[x] = candidate[x] - f[x];
      const double s = line_search(g, f, direction, p, eps);
      for (Vertex x = 0; x < n; ++x) f[x] += s * direction[x];
      ++result.iterations;

      const double before = history.back();
      const double after = smoothed(g, f, p, eps);
      if (after > before * (1.0 + 1e-12))
        throw InvariantViolation("p-energy iteration increased the smoothed objective");
      history.push_back(after);
      const double change = std::abs(before - after) / std::max(after, std::numeric_limits<double>::min());
      calm = change < options.relative_change ? calm + 1 : 0;
      if (calm >= options.stall_count) {
        stage_converged = true;
        break;
      }
    }
    result.stage_objectives.push_back(std::move(history));
    all_stages_converged = all_stages_converged && stage_converged;
  }

  result.pre_clip_value = p_energy_of(g, f, p);
  for (double& v : f) v = std::clamp(v, 0.0, 1.0);
  result.value = p_energy_of(g, f, p);
  if (result.value > result.pre_clip_value * (1.0 + 1e-12))
    throw InvariantViolation("clipping to [0, 1] increased the p-energy");
  result.minimizer = std::move(f);
  result.converged = all_stages_converged;
  return result;
}

namespace {

PEnergyResult face_energy(const FractalGraph& g, double p, const PEnergyOptions& options) {
  const auto faces = boundary_sets(g);
  return p_energy(g.graph(), faces.left, faces.right, p, options);
}

}  // namespace

EnergySeries sc_energy_series(double p, int k_max, const PEnergyOptions& options) {
  if (!(p > 1.0)) throw InvalidArgument("p-energy needs p > 1");
  if (k_max < 0 || k_max > 5) throw InvalidArgument("sc energy series supports 0 <= k_max <= 5");
  EnergySeries out;
  out.p = p;
  std::vector<double> index, values;
  for (int k = 0; k <= k_max; ++k) {
    const auto g = generate_level(Family::sc_corner, std::nullopt, k);
    out.results.push_back(face_energy(g, p, options));
    index.push_back(k);
    values.push_back(out.results.back().value);
  }
  out.series = make_series(std::move(index), std::move(values));
  return out;
}

PEnergyResult hybrid_energy(double p, int k, const Schedule& schedule, const PEnergyOptions& options) {
  return face_energy(generate_level(Family::hybrid, schedule, k), p, options);
}

namespace {

Schedule window_schedule(const std::string& window) {
  std::vector<std::uint8_t> bits;
  for (char c : window) bits.push_back(c == '1' ? 1 : 0);
  return Schedule::explicit_bits(std::move(bits));
}

}  // namespace

HybridSup hybrid_energy_sup(double p, int k, const Schedule& schedule, std::int64_t a_max,
                            const PEnergyOptions& options, std::map<std::string, double>* cache) {
  if (k < 0) throw InvalidArgument("level must be nonnegative");
  if (a_max < 0) throw InvalidArgument("shift bound must be nonnegative");
  HybridSup out;
  for (std::int64_t a = 0; a <= a_max; ++a) {
    const auto w = Schedule::shifted(schedule, a).window(k);
    if (out.window_first_shift.count(w)) continue;
    out.window_first_shift[w] = a;
    double value = 0.0;
    if (cache && cache->count(w)) {
      value = cache->at(w);
    } else {
      value = hybrid_energy(p, k, window_schedule(w), options).value;
      if (cache) (*cache)[w] = value;
    }
    out.window_energy[w] = value;
    if (out.argmax_window.empty() || value > out.value) {
      out.value = value;
      out.argmax_window = w;
      out.argmax_shift = a;
    }
  }
  return out;
}

std::int64_t default_shift_bound(int k) {
  const std::int64_t b = k + 1;
  return b * b * b;
}

PhaseTransitionEstimate estimate_arc_dimension(const GammaProvider& provider, double p_lo, double p_hi, double tol,
                                               bool with_bias) {
  if (!(p_lo > 1.0) || !(p_hi > p_lo)) throw InvalidArgument("bracket must satisfy 1 < p_lo < p_hi");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  PhaseTransitionEstimate est;
  est.initial_lo = p_lo;
  est.initial_hi = p_hi;
  est.tolerance = tol;
  auto gamma = [&](double p) -> const GammaEstimate& {
    auto it = est.gamma_table.find(p);
    if (it == est.gamma_table.end()) it = est.gamma_table.emplace(p, provider(p)).first;
    return it->second;
  };

  const auto& lo = gamma(p_lo);
  const auto& hi = gamma(p_hi);
  if (!(lo.last > 1.0 && hi.last < 1.0))
    throw InvalidArgument("bracket does not straddle the transition: gamma(" + std::to_string(p_lo) +
                          ") = " + std::to_string(lo.last) + ", gamma(" + std::to_string(p_hi) +
                          ") = " + std::to_string(hi.last));

  auto bisect = [&](auto pick, double a, double b) {
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      if (pick(gamma(mid)) > 1.0)
        a = mid;
      else
        b = mid;
    }
    return std::pair{a, b};
  };
  const auto [a, b] = bisect([](const GammaEstimate& g) { return g.last; }, p_lo, p_hi);
  est.p_lo = a;
  est.p_hi = b;
  est.p_star = 0.5 * (a + b);

  if (with_bias) {
    const auto& glo = gamma(p_lo);
    const auto& ghi = gamma(p_hi);
    if (glo.penultimate > 1.0 && ghi.penultimate < 1.0) {
      const auto [c, d] = bisect([](const GammaEstimate& g) { return g.penultimate; }, p_lo, p_hi);
      est.p_star_penultimate = 0.5 * (c + d);
      est.bias = est.p_star - *est.p_star_penultimate;
    }
  }

  double previous = std::numeric_limits<double>::infinity();
  for (const auto& [p, g] : est.gamma_table) {
    if (!(g.last < previous)) est.gamma_decreasing = false;
    previous = g.last;
  }
  return est;
}

namespace {

GammaEstimate last_two_ratios(const std::vector<double>& ratios) {
  if (ratios.size() < 2) throw InvalidArgument("need at least two consecutive ratios");
  return {ratios[ratios.size() - 1], ratios[ratios.size() - 2]};
}

}  // namespace

GammaProvider sc_gamma_provider(int k_max, const PEnergyOptions& options) {
  return [k_max, options](double p) { return last_two_ratios(sc_energy_series(p, k_max, options).series.ratios); };
}

GammaProvider hybrid_gamma_provider(int k_max, const Schedule& schedule, const PEnergyOptions& options) {
  if (k_max < 2) throw InvalidArgument("hybrid provider needs k_max >= 2");
  return [k_max, schedule, options](double p) {
    std::vector<double> sups;
    for (int k = k_max - 2; k <= k_max; ++k)
      sups.push_back(hybrid_energy_sup(p, k, schedule, default_shift_bound(k), options).value);
    return last_two_ratios(make_series({0, 1, 2}, sups).ratios);
  };
}

}  // namespace fracdim
