#include "fracdim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "fracdim/errors.hpp"
#include "fracdim/lattice.hpp"

namespace fracdim {

HeatKernelSeries heat_kernel_diagonal(const WeightedNetwork& net, Vertex x, std::int64_t n_max,
                                      const HeatKernelOptions& options) {
  const Graph& g = net.graph();
  const std::size_t nv = g.vertex_count();
  if (x >= nv) throw InvalidArgument("base vertex out of range");
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  const double work = static_cast<double>(n_max) * static_cast<double>(nv + 2 * g.edge_count());
  if (work > options.work_budget) throw BudgetExceeded("heat kernel iteration exceeds the work budget");
  if (!is_connected(g)) throw DisconnectedError("heat kernel needs a connected graph");

  HeatKernelSeries out;
  out.base_vertex = x;
  if (options.truncation_boundary.empty()) {
    out.exactness_horizon = n_max;
  } else {
    const auto dist = bfs_distances(g, options.truncation_boundary);
    out.exactness_horizon = dist[x] - 1;
  }

  // Each step moves v(x) / mu_x along every edge, scaled by the edge weight.
  std::vector<double> v(nv, 0.0), next(nv, 0.0);
  v[x] = 1.0;
  const double mu_x = net.vertex_weight(x);
  auto step = [&](const std::vector<double>& from, std::vector<double>& to) {
    for (Vertex y = 0; y < nv; ++y) {
      const auto nb = g.neighbors(y);
      const auto ids = g.incident_edges(y);
      double acc = 0.0;
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const double mass = from[nb[k]];
        if (mass != 0.0) acc += mass * net.weight(ids[k]) / net.vertex_weight(nb[k]);
      }
      to[y] = acc;
    }
  };

  step(v, next);
  double previous_h = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 1; n <= n_max; ++n) {
    // v = P^(n-1) delta_x on entry, next = P^n delta_x.
    v.swap(next);
    double total = 0.0, folded = 0.0;
    for (Vertex y = 0; y < nv; ++y) {
      total += v[y];
      folded += v[y] * v[y] / net.vertex_weight(y);
    }
    const double drift = std::abs(total - 1.0);
    out.max_conservation_error = std::max(out.max_conservation_error, drift);
    if (drift > options.conservation_tolerance)
      throw InvariantViolation("probability not conserved at step " + std::to_string(n));

    // folded = p_{2n}(x, x) / mu_x = h_{2n}(x, x)
    const double h = folded;
    step(v, next);
    double odd = 0.0;
    for (Vertex y = 0; y < nv; ++y)
      if (v[y] != 0.0 && next[y] != 0.0) odd += v[y] * next[y] * mu_x / net.vertex_weight(y);
    out.max_odd_return = std::max(out.max_odd_return, odd);

    if (h > previous_h * (1.0 + 1e-12)) out.monotone = false;
    previous_h = h;
    out.steps.push_back(n);
    out.values.push_back(h);
    out.exact.push_back(n <= out.exactness_horizon);
  }
  return out;
}

void write_heat_kernel_csv(std::ostream& out, const HeatKernelSeries& series) {
  out << "n,h_2n,exact\n";
  out.precision(17);
  for (std::size_t i = 0; i < series.steps.size(); ++i)
    out << 2 * series.steps[i] << ',' << series.values[i] << ',' << (series.exact[i] ? 1 : 0) << '\n';
}

std::vector<Vertex> truncation_boundary_vertices(const FractalGraph& blowup) {
  const auto flags = truncation_boundary(blowup);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < flags.size(); ++v)
    if (flags[v]) out.push_back(v);
  return out;
}

std::vector<std::int64_t> log_spaced(std::int64_t lo, std::int64_t hi, std::size_t samples) {
  if (lo < 1 || hi < lo) throw InvalidArgument("log-spaced range needs 1 <= lo <= hi");
  std::vector<std::int64_t> out;
  if (samples < 2 || lo == hi) return {lo};
  const double l0 = std::log(static_cast<double>(lo));
  const double l1 = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    const auto n = static_cast<std::int64_t>(std::llround(std::exp(l0 + t * (l1 - l0))));
    const auto clamped = std::clamp(n, lo, hi);
    if (out.empty() || out.back() != clamped) out.push_back(clamped);
  }
  return out;
}

ExponentFit estimate_ds(const HeatKernelSeries& series, std::int64_t n_lo, std::int64_t n_hi, std::size_t samples) {
  if (series.steps.empty()) throw InvalidArgument("empty heat kernel series");
  if (n_lo < 1 || n_hi < n_lo) throw InvalidArgument("invalid fit window");
  if (n_hi > series.steps.back()) throw InvalidArgument("fit window beyond the computed steps");
  if (n_hi > series.exactness_horizon) throw InvalidArgument("fit window beyond the exactness horizon");
  const auto ns = log_spaced(n_lo, n_hi, samples);
  if (ns.size() < 10) throw InvalidArgument("fit window has fewer than 10 points");
  std::vector<double> lx, ly;
  for (auto n : ns) {
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(-2.0 * std::log(series.values[static_cast<std::size_t>(n - 1)]));
  }
  auto fit = linear_fit(lx, ly);
  fit.window_min = static_cast<double>(ns.front());
  fit.window_max = static_cast<double>(ns.back());
  return fit;
}

ExponentFit estimate_ds(const HeatKernelSeries& series) {
  if (series.steps.empty()) throw InvalidArgument("empty heat kernel series");
  const std::int64_t top = std::min(series.steps.back(), series.exactness_horizon);
  // The Vicsek return probability oscillates log-periodically with period 15
  // in n, so the window has to be wider than one period.
  return estimate_ds(series, std::max<std::int64_t>(1, top / 50), top);
}

ScalingSeries volume_growth(const WeightedNetwork& net, Vertex x, std::int64_t r_max) {
  if (x >= net.vertex_count()) throw InvalidArgument("base vertex out of range");
  if (r_max < 1) throw InvalidArgument("r_max must be at least 1");
  const Vertex src[1] = {x};
  const auto dist = bfs_distances(net.graph(), src);
  std::vector<double> shell(static_cast<std::size_t>(r_max) + 1, 0.0);
  for (Vertex y = 0; y < dist.size(); ++y)
    if (dist[y] != kUnreachable && dist[y] <= r_max) shell[static_cast<std::size_t>(dist[y])] += net.vertex_weight(y);
  std::vector<double> index, values;
  double acc = shell[0];
  for (std::int64_t r = 1; r <= r_max; ++r) {
    acc += shell[static_cast<std::size_t>(r)];
    index.push_back(static_cast<double>(r));
    values.push_back(acc);
  }
  return make_series(std::move(index), std::move(values));
}

ExponentFit volume_exponent(const ScalingSeries& growth, std::int64_t r_lo, std::int64_t r_hi, std::size_t samples) {
  if (r_hi > static_cast<std::int64_t>(growth.values.size())) throw InvalidArgument("radius window beyond the series");
  std::vector<double> r, v;
  for (auto k : log_spaced(r_lo, r_hi, samples)) {
    r.push_back(static_cast<double>(k));
    v.push_back(growth.values[static_cast<std::size_t>(k - 1)]);
  }
  return log_log_fit(r, v);
}

std::int64_t graph_distance(const Graph& g, std::span<const Vertex> from, std::span<const Vertex> to) {
  if (from.empty() || to.empty()) throw InvalidArgument("distance between empty sets");
  const auto dist = bfs_distances(g, from);
  std::int64_t best = kUnreachable;
  for (Vertex y : to) {
    if (y >= dist.size()) throw InvalidArgument("vertex out of range");
    if (dist[y] != kUnreachable && (best == kUnreachable || dist[y] < best)) best = dist[y];
  }
  if (best == kUnreachable) throw DisconnectedError("sets are in different components");
  return best;
}

DistanceQuantities distance_quantities(const FractalGraph& level_graph) {
  const auto faces = boundary_sets(level_graph);
  const Vertex p1[1] = {level_graph.vertex_at(level_graph.named_point(1))};
  const Vertex p3[1] = {level_graph.vertex_at(level_graph.named_point(3))};
  const Vertex p5[1] = {level_graph.vertex_at(level_graph.named_point(5))};
  const Graph& g = level_graph.graph();
  DistanceQuantities q;
  q.a = graph_distance(g, p1, faces.right);
  q.b = graph_distance(g, faces.left, faces.right);
  q.c = graph_distance(g, p1, p5);
  q.e = graph_distance(g, p1, p3);
  return q;
}

std::vector<std::pair<Vertex, Vertex>> pairs_at_distances(const Graph& g, Vertex x,
                                                          std::span<const std::int64_t> distances) {
  const Vertex src[1] = {x};
  const auto dist = bfs_distances(g, src);
  std::map<std::int64_t, Vertex> first;
  for (Vertex y = 0; y < dist.size(); ++y)
    if (dist[y] != kUnreachable) first.emplace(dist[y], y);
  std::vector<std::pair<Vertex, Vertex>> out;
  for (auto d : distances) {
    auto it = first.find(d);
    if (it == first.end()) throw InvalidArgument("no vertex at distance " + std::to_string(d));
    out.emplace_back(x, it->second);
  }
  return out;
}

AlphaFit alpha_fit(const WeightedNetwork& net, std::span<const std::pair<Vertex, Vertex>> pairs,
                   const SolverOptions& options) {
  if (pairs.size() < 3) throw InvalidArgument("alpha fit needs at least three pairs");
  AlphaFit out;
  std::vector<double> d, r;
  for (const auto& [x, y] : pairs) {
    const Vertex a[1] = {x}, b[1] = {y};
    ResistancePair rp{x, y, graph_distance(net.graph(), a, b), effective_resistance(net, x, y, options)};
    out.pairs.push_back(rp);
    d.push_back(static_cast<double>(rp.distance));
    r.push_back(rp.resistance);
  }
  const double lo = *std::min_element(d.begin(), d.end());
  const double hi = *std::max_element(d.begin(), d.end());
  if (std::log10(hi / lo) < 1.5) throw InvalidArgument("distances span less than 1.5 decades");
  out.fit = log_log_fit(d, r);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    worst = std::max(worst, std::abs(std::log(r[i]) - out.fit.intercept - out.fit.slope * std::log(d[i])));
  out.constant = std::exp(worst);
  return out;
}

DsConsistency ds_consistency(double ds, double alpha, double beta) {
  DsConsistency c;
  c.ds = ds;
  c.alpha = alpha;
  c.beta = beta;
  c.predicted = 2.0 * beta / (alpha + beta);
  c.gap = std::abs(ds - c.predicted);
  c.both_below_two = ds < 2.0 && c.predicted < 2.0;
  return c;
}

ReferenceLattice line_lattice(std::int64_t radius) {
  if (radius < 1) throw InvalidArgument("radius must be positive");
  ReferenceLattice out;
  const auto n = static_cast<std::size_t>(2 * radius + 1);
  out.graph = path_graph(n);
  out.center = static_cast<Vertex>(radius);
  out.boundary = {0, n - 1};
  return out;
}

ReferenceLattice diagonal_lattice_ball(std::int64_t radius) {
  if (radius < 1) throw InvalidArgument("radius must be positive");
  std::map<std::pair<std::int64_t, std::int64_t>, Vertex> index;
  for (std::int64_t a = -radius; a <= radius; ++a)
    for (std::int64_t b = -radius; b <= radius; ++b)
      if (((a + b) % 2 + 2) % 2 == 0) index.emplace(std::pair{a, b}, index.size());
  std::vector<Edge> edges;
  ReferenceLattice out;
  for (const auto& [pt, v] : index) {
    int degree = 0;
    for (std::int64_t da : {-1, 1})
      for (std::int64_t db : {-1, 1}) {
        auto it = index.find({pt.first + da, pt.second + db});
        if (it == index.end()) continue;
        ++degree;
        if (v < it->second) edges.push_back({v, it->second});
      }
    if (degree < 4) out.boundary.push_back(v);
  }
  out.graph = Graph::from_edges(index.size(), std::move(edges));
  out.center = index.at({0, 0});
  return out;
}

}  // namespace fracdim
