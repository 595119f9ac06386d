#include "fracdim/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "fracdim/errors.hpp"
#include "fracdim/lattice.hpp"

namespace fracdim {

WeightedNetwork::WeightedNetwork(const Graph& graph)
    : WeightedNetwork(graph, std::vector<double>(graph.edge_count(), 1.0)) {}

WeightedNetwork::WeightedNetwork(const Graph& graph, std::vector<double> edge_weights)
    : graph_(&graph), weights_(std::move(edge_weights)), vertex_weights_(graph.vertex_count(), 0.0) {
  if (weights_.size() != graph.edge_count()) throw InvalidArgument("one weight per edge required");
  for (std::size_t id = 0; id < weights_.size(); ++id) {
    const double w = weights_[id];
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("edge weights must be positive and finite");
    vertex_weights_[graph.edge(id).u] += w;
    vertex_weights_[graph.edge(id).v] += w;
  }
}

double WeightedNetwork::measure(std::span<const Vertex> vertices) const {
  double total = 0.0;
  for (Vertex v : vertices) total += vertex_weights_.at(v);
  return total;
}

double WeightedNetwork::p0_ratio() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < weights_.size(); ++id) {
    const auto& e = graph_->edge(id);
    best = std::min({best, weights_[id] / vertex_weights_[e.u], weights_[id] / vertex_weights_[e.v]});
  }
  return best;
}

namespace {

constexpr int kInterior = -1;

struct BoundaryProblem {
  std::vector<double> values;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
};

// Solves L_II u = -L_IB g with PCG. `label[x]` is kInterior for unknowns and
// the index into `boundary_values` otherwise.
BoundaryProblem solve_boundary_problem(const WeightedNetwork& net, const std::vector<int>& label,
                                       std::span<const double> boundary_values, const SolverOptions& options) {
  const Graph& g = net.graph();
  const std::size_t n = g.vertex_count();

  std::vector<std::size_t> interior;
  std::vector<std::size_t> slot(n, std::numeric_limits<std::size_t>::max());
  for (Vertex x = 0; x < n; ++x)
    if (label[x] == kInterior) {
      slot[x] = interior.size();
      interior.push_back(x);
    }

  BoundaryProblem out;
  out.values.assign(n, 0.0);
  for (Vertex x = 0; x < n; ++x)
    if (label[x] != kInterior) out.values[x] = boundary_values[static_cast<std::size_t>(label[x])];
  const std::size_t m = interior.size();
  if (m == 0) return out;

  std::vector<double> rhs(m, 0.0), diag(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Vertex x = interior[i];
    diag[i] = net.vertex_weight(x);
    const auto nb = g.neighbors(x);
    const auto ids = g.incident_edges(x);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (label[nb[k]] != kInterior) rhs[i] += net.weight(ids[k]) * out.values[nb[k]];
  }

  auto apply = [&](const std::vector<double>& u, std::vector<double>& y) {
    for (std::size_t i = 0; i < m; ++i) {
      const Vertex x = interior[i];
      const auto nb = g.neighbors(x);
      const auto ids = g.incident_edges(x);
      double acc = diag[i] * u[i];
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const auto s = slot[nb[k]];
        if (s != std::numeric_limits<std::size_t>::max()) acc -= net.weight(ids[k]) * u[s];
      }
      y[i] = acc;
    }
  };
  auto dot = [m](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += a[i] * b[i];
    return acc;
  };

  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  std::vector<double> u(m, 0.0);
  if (rhs_norm == 0.0) return out;

  // CG terminates in at most m steps in exact arithmetic; long paths need
  // about that many, so the automatic cap never goes below 2m.
  const std::size_t cap = options.max_iterations != 0
                              ? options.max_iterations
                              : std::max(static_cast<std::size_t>(50.0 * std::sqrt(static_cast<double>(m))) + 1000,
                                         2 * m);
  std::vector<double> r = rhs, z(m), p(m), q(m);
  for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  double rel = 1.0;
  std::size_t it = 0;
  while (it < cap) {
    apply(p, q);
    const double alpha = rz / dot(p, q);
    for (std::size_t i = 0; i < m; ++i) {
      u[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    ++it;
    rel = std::sqrt(dot(r, r)) / rhs_norm;
    if (rel <= options.relative_tolerance) break;
    for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / diag[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
  }

  // Report the true residual, not the recursively updated one.
  apply(u, q);
  double true_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) true_sq += (rhs[i] - q[i]) * (rhs[i] - q[i]);
  out.residual_norm = std::sqrt(true_sq) / rhs_norm;
  out.iterations = it;
  if (rel > options.relative_tolerance) {
    std::ostringstream msg;
    msg << "conjugate gradients did not converge in " << it << " iterations (relative residual "
        << out.residual_norm << ")";
    throw SolverError(msg.str(), out.residual_norm, it);
  }
  for (std::size_t i = 0; i < m; ++i) out.values[interior[i]] = u[i];
  return out;
}

std::vector<int> label_sets(std::size_t n, std::span<const Vertex> source, std::span<const Vertex> sink) {
  if (source.empty() || sink.empty()) throw InvalidArgument("source and sink sets must be nonempty");
  std::vector<int> label(n, kInterior);
  for (Vertex x : source) {
    if (x >= n) throw InvalidArgument("source vertex out of range");
    label[x] = 0;
  }
  for (Vertex x : sink) {
    if (x >= n) throw InvalidArgument("sink vertex out of range");
    if (label[x] == 0) throw InvalidArgument("source and sink sets must be disjoint");
    label[x] = 1;
  }
  return label;
}

std::vector<Vertex> sorted_unique(std::span<const Vertex> vs) {
  std::vector<Vertex> out(vs.begin(), vs.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

double dirichlet_energy(const WeightedNetwork& net, std::span<const double> values) {
  double energy = 0.0;
  const auto edges = net.graph().edges();
  for (std::size_t id = 0; id < edges.size(); ++id) {
    const double d = values[edges[id].u] - values[edges[id].v];
    energy += net.weight(id) * d * d;
  }
  return energy;
}

PotentialSolution solve_dirichlet(const WeightedNetwork& net, std::span<const Vertex> source,
                                  std::span<const Vertex> sink, const SolverOptions& options) {
  const auto label = label_sets(net.vertex_count(), source, sink);
  if (!is_connected(net.graph())) throw DisconnectedError("effective resistance needs a connected graph");

  const double data[2] = {1.0, 0.0};
  auto solved = solve_boundary_problem(net, label, data, options);

  PotentialSolution sol;
  sol.values = std::move(solved.values);
  sol.residual_norm = solved.residual_norm;
  sol.iterations = solved.iterations;
  sol.energy = dirichlet_energy(net, sol.values);
  sol.source = sorted_unique(source);
  sol.sink = sorted_unique(sink);
  return sol;
}

double effective_resistance(const WeightedNetwork& net, std::span<const Vertex> source, std::span<const Vertex> sink,
                            const SolverOptions& options) {
  return solve_dirichlet(net, source, sink, options).resistance();
}

double effective_resistance(const WeightedNetwork& net, Vertex x, Vertex y, const SolverOptions& options) {
  return effective_resistance(net, std::span<const Vertex>(&x, 1), std::span<const Vertex>(&y, 1), options);
}

std::vector<double> harmonic_extension(const WeightedNetwork& net, std::span<const Vertex> boundary,
                                       std::span<const double> boundary_values, const SolverOptions& options) {
  if (boundary.empty()) throw InvalidArgument("harmonic extension needs a nonempty boundary");
  if (boundary.size() != boundary_values.size()) throw InvalidArgument("one boundary value per boundary vertex");
  const std::size_t n = net.vertex_count();
  std::vector<int> label(n, kInterior);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (boundary[i] >= n) throw InvalidArgument("boundary vertex out of range");
    if (label[boundary[i]] != kInterior) throw InvalidArgument("boundary vertex listed twice");
    label[boundary[i]] = static_cast<int>(i);
  }
  const auto dist = bfs_distances(net.graph(), boundary);
  for (Vertex x = 0; x < n; ++x)
    if (dist[x] == kUnreachable) throw DisconnectedError("interior component without boundary contact");
  return solve_boundary_problem(net, label, boundary_values, options).values;
}

double UnitFlow::at(const Graph& g, Vertex x, Vertex y) const {
  const auto id = g.find_edge(x, y);
  if (!id) throw InvalidArgument("no edge between the given vertices");
  return g.edge(*id).u == x ? values[*id] : -values[*id];
}

std::vector<double> flow_divergence(const Graph& g, const UnitFlow& flow) {
  std::vector<double> div(g.vertex_count(), 0.0);
  const auto edges = g.edges();
  for (std::size_t id = 0; id < edges.size(); ++id) {
    div[edges[id].u] += flow.values[id];
    div[edges[id].v] -= flow.values[id];
  }
  return div;
}

double flow_energy(const WeightedNetwork& net, const UnitFlow& flow) {
  double energy = 0.0;
  for (std::size_t id = 0; id < flow.values.size(); ++id) energy += flow.values[id] * flow.values[id] / net.weight(id);
  return energy;
}

FlowDiagnostics check_flow(const WeightedNetwork& net, const UnitFlow& flow, std::span<const Vertex> source,
                           std::span<const Vertex> sink) {
  const auto label = label_sets(net.vertex_count(), source, sink);
  const auto div = flow_divergence(net.graph(), flow);
  FlowDiagnostics d;
  for (Vertex x = 0; x < net.vertex_count(); ++x) {
    if (label[x] == kInterior)
      d.max_interior_divergence = std::max(d.max_interior_divergence, std::abs(div[x]));
    else if (label[x] == 0)
      d.source_flux += div[x];
    else
      d.sink_flux += div[x];
  }
  d.energy = flow_energy(net, flow);
  return d;
}

UnitFlow extract_unit_flow(const PotentialSolution& potential, const WeightedNetwork& net) {
  if (!(potential.energy > 0.0)) throw InvalidArgument("potential has zero energy");
  const auto edges = net.graph().edges();
  UnitFlow flow;
  flow.values.resize(edges.size());
  for (std::size_t id = 0; id < edges.size(); ++id)
    flow.values[id] =
        net.weight(id) * (potential.values[edges[id].u] - potential.values[edges[id].v]) / potential.energy;

  const auto d = check_flow(net, flow, potential.source, potential.sink);
  std::ostringstream msg;
  if (d.max_interior_divergence > 1e-8) msg << "interior divergence " << d.max_interior_divergence << "; ";
  if (std::abs(d.source_flux - 1.0) > 1e-8) msg << "source flux " << d.source_flux << "; ";
  if (std::abs(d.sink_flux + 1.0) > 1e-8) msg << "sink flux " << d.sink_flux << "; ";
  if (std::abs(d.energy * potential.energy - 1.0) > 1e-6) msg << "duality product " << d.energy * potential.energy;
  if (!msg.str().empty()) throw InvariantViolation("unit flow axioms violated: " + msg.str());
  return flow;
}

GlueResult glue_flows(const Graph& coarse, const UnitFlow& coarse_flow, std::span<const Vertex> coarse_to_fine,
                      std::span<const LocalFlow> local_flows, const WeightedNetwork& fine) {
  if (coarse_flow.values.size() != coarse.edge_count()) throw InvalidArgument("coarse flow size mismatch");
  if (coarse_to_fine.size() != coarse.vertex_count()) throw InvalidArgument("coarse-to-fine map size mismatch");
  const Graph& fg = fine.graph();

  std::vector<const LocalFlow*> by_edge(coarse.edge_count(), nullptr);
  for (const auto& local : local_flows) {
    if (local.coarse_edge >= coarse.edge_count()) throw InvalidArgument("local flow names a missing coarse edge");
    if (local.flow.values.size() != fg.edge_count()) throw InvalidArgument("local flow size mismatch");
    const auto& e = coarse.edge(local.coarse_edge);
    const auto div = flow_divergence(fg, local.flow);
    const Vertex from = coarse_to_fine[e.u];
    const Vertex to = coarse_to_fine[e.v];
    for (Vertex x = 0; x < fg.vertex_count(); ++x) {
      const double want = x == from ? 1.0 : (x == to ? -1.0 : 0.0);
      if (std::abs(div[x] - want) > 1e-8)
        throw InvalidArgument("support/terminal mismatch for local flow on coarse edge " +
                              std::to_string(local.coarse_edge));
    }
    by_edge[local.coarse_edge] = &local;
  }

  GlueResult out;
  out.flow.values.assign(fg.edge_count(), 0.0);
  std::vector<std::size_t> cover(fg.edge_count(), 0);
  for (std::size_t id = 0; id < coarse.edge_count(); ++id) {
    const double g = coarse_flow.values[id];
    out.coarse_energy += g * g;
    if (g == 0.0) continue;
    if (by_edge[id] == nullptr) throw InvalidArgument("missing local flow for coarse edge " + std::to_string(id));
    const auto& local = by_edge[id]->flow;
    const double local_energy = flow_energy(fine, local);
    out.max_local_energy = std::max(out.max_local_energy, local_energy);
    out.weighted_local_energy += g * g * local_energy;
    for (std::size_t f = 0; f < fg.edge_count(); ++f) {
      if (local.values[f] == 0.0) continue;
      out.flow.values[f] += g * local.values[f];
      ++cover[f];
    }
  }
  out.overlap = cover.empty() ? 0 : *std::max_element(cover.begin(), cover.end());
  out.energy = flow_energy(fine, out.flow);
  out.bound = static_cast<double>(out.overlap) * out.coarse_energy * out.max_local_energy;
  return out;
}

void write_potential_csv(std::ostream& out, const FractalGraph& g, std::span<const double> values) {
  out << "vertex_index,a,b,value\n";
  out.precision(17);
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    out << v << ',' << g.point(v).a << ',' << g.point(v).b << ',' << values[v] << '\n';
}

void write_flow_csv(std::ostream& out, const Graph& g, const UnitFlow& flow) {
  out << "i,j,flow\n";
  out.precision(17);
  for (std::size_t id = 0; id < g.edge_count(); ++id)
    out << g.edge(id).u << ',' << g.edge(id).v << ',' << flow.values[id] << '\n';
}

}  // namespace fracdim
