#include "fracdim/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "fracdim/errors.hpp"

namespace fracdim {

void write_graph(std::ostream& out, const FractalGraph& g) {
  out << "fracdim-graph v1 " << to_string(g.family()) << ' '
      << (g.schedule() ? g.schedule()->to_string() : std::string("none")) << ' ' << g.level() << ' '
      << to_string(g.edge_rule()) << '\n';
  out << "V " << g.vertex_count() << '\n';
  for (const auto& p : g.vertices()) out << p.a << ' ' << p.b << '\n';
  out << "E " << g.graph().edge_count() << '\n';
  for (const auto& e : g.graph().edges()) out << e.u << ' ' << e.v << '\n';
}

std::string graph_to_string(const FractalGraph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

namespace {

void expect(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("malformed graph file: " + what);
}

}  // namespace

FractalGraph read_graph(std::istream& in) {
  // Leading '#' lines carry provenance (tool version, config hash).
  std::string comment;
  while ((in >> std::ws).peek() == '#') std::getline(in, comment);
  std::string magic, version, family, schedule, rule;
  int level = -1;
  expect(static_cast<bool>(in >> magic >> version >> family >> schedule >> level >> rule), "header");
  expect(magic == "fracdim-graph", "bad magic '" + magic + "'");
  expect(version == "v1", "unsupported version '" + version + "'");
  expect(level >= 0, "negative level");

  std::string tag;
  std::size_t count = 0;
  expect(static_cast<bool>(in >> tag >> count) && tag == "V", "vertex section");
  std::vector<LatticePoint> points(count);
  for (auto& p : points) expect(static_cast<bool>(in >> p.a >> p.b), "vertex line");

  expect(static_cast<bool>(in >> tag >> count) && tag == "E", "edge section");
  std::vector<Edge> edges(count);
  for (auto& e : edges) {
    expect(static_cast<bool>(in >> e.u >> e.v), "edge line");
    expect(e.u < e.v, "edge endpoints must satisfy i < j");
  }

  std::optional<Schedule> sched;
  if (schedule != "none") sched = Schedule::parse(schedule);
  return FractalGraph::from_parts(parse_family(family), std::move(sched), level, parse_edge_rule(rule),
                                  std::move(points), std::move(edges));
}

FractalGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file '" + path + "'");
  return read_graph(in);
}

void write_graph_file(const std::string& path, const FractalGraph& g) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write graph file '" + path + "'");
  write_graph(out, g);
}

}  // namespace fracdim
