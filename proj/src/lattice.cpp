#include "fracdim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracdim/errors.hpp"

namespace fracdim {

namespace {

constexpr std::array<LatticePoint, 9> kOffsets{{
    {0, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0},
}};

constexpr std::array<int, 5> kVicsekMaps{0, 1, 3, 5, 7};
constexpr std::array<int, 8> kCarpetMaps{1, 2, 3, 4, 5, 6, 7, 8};

std::vector<LatticePoint> base_points(Family family) {
  switch (family) {
    case Family::hybrid:
    case Family::vicsek:
    case Family::blowup:
      return {kOffsets[0], kOffsets[1], kOffsets[3], kOffsets[5], kOffsets[7]};
    case Family::sc_corner:
      return {kOffsets[1], kOffsets[3], kOffsets[5], kOffsets[7]};
    case Family::sc_center:
      return {kOffsets[0], kOffsets[2], kOffsets[4], kOffsets[6], kOffsets[8]};
  }
  return {};
}

void sort_unique(std::vector<LatticePoint>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// One refinement: level-(k-1) points -> union of the chosen maps at level k.
std::vector<LatticePoint> refine(const std::vector<LatticePoint>& prev, std::span<const int> maps, int k) {
  const std::int64_t shift = 2 * pow3(k - 1);
  std::vector<LatticePoint> next;
  next.reserve(prev.size() * maps.size());
  for (int j : maps) {
    const auto c = kOffsets[static_cast<std::size_t>(j)];
    for (const auto& q : prev) next.push_back({q.a + shift * c.a, q.b + shift * c.b});
  }
  sort_unique(next);
  return next;
}

std::vector<LatticePoint> rule_offsets(EdgeRule rule, std::int64_t s) {
  // Only the "forward" half, so each edge is produced once.
  if (rule == EdgeRule::diagonal) return {{s, -s}, {s, s}};
  return {{0, s}, {s, 0}};
}

std::vector<Edge> rule_edges(std::span<const LatticePoint> pts, EdgeRule rule, std::int64_t s) {
  std::vector<Edge> edges;
  const auto offsets = rule_offsets(rule, s);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (const auto& d : offsets) {
      const LatticePoint q{pts[i].a + d.a, pts[i].b + d.b};
      const auto it = std::lower_bound(pts.begin(), pts.end(), q);
      if (it != pts.end() && *it == q) edges.push_back({i, static_cast<std::size_t>(it - pts.begin())});
    }
  }
  return edges;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::hybrid:
      return "hybrid";
    case Family::vicsek:
      return "vicsek";
    case Family::sc_corner:
      return "sc_corner";
    case Family::sc_center:
      return "sc_center";
    case Family::blowup:
      return "blowup";
  }
  return {};
}

std::string to_string(EdgeRule rule) { return rule == EdgeRule::diagonal ? "diagonal" : "axis"; }

Family parse_family(std::string_view text) {
  for (auto f : {Family::hybrid, Family::vicsek, Family::sc_corner, Family::sc_center, Family::blowup})
    if (to_string(f) == text) return f;
  throw InvalidArgument("unknown family '" + std::string(text) + "'");
}

EdgeRule parse_edge_rule(std::string_view text) {
  if (text == "diagonal") return EdgeRule::diagonal;
  if (text == "axis") return EdgeRule::axis;
  throw InvalidArgument("unknown edge rule '" + std::string(text) + "'");
}

std::int64_t pow3(int n) {
  if (n < 0 || n > 38) throw InvalidArgument("3^n out of range");
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

LatticePoint cell_offset(int j) {
  if (j < 0 || j > 8) throw InvalidArgument("point index must be in 0..8");
  return kOffsets[static_cast<std::size_t>(j)];
}

EdgeRule edge_rule_of(Family family) {
  return (family == Family::sc_corner || family == Family::sc_center) ? EdgeRule::axis : EdgeRule::diagonal;
}

std::int64_t step_of(Family family) { return family == Family::sc_corner ? 2 : 1; }

FractalGraph FractalGraph::from_points(Family family, std::optional<Schedule> schedule, int level,
                                       std::vector<LatticePoint> points) {
  sort_unique(points);
  FractalGraph g;
  g.family_ = family;
  g.schedule_ = std::move(schedule);
  g.level_ = level;
  g.rule_ = edge_rule_of(family);
  g.step_ = step_of(family);
  auto edges = rule_edges(points, g.rule_, g.step_);
  g.graph_ = Graph::from_edges(points.size(), std::move(edges));
  g.points_ = std::move(points);
  return g;
}

FractalGraph FractalGraph::from_parts(Family family, std::optional<Schedule> schedule, int level, EdgeRule rule,
                                      std::vector<LatticePoint> points, std::vector<Edge> edges) {
  if (rule != edge_rule_of(family)) throw InvalidArgument("edge rule does not match family " + to_string(family));
  if (!std::is_sorted(points.begin(), points.end()) ||
      std::adjacent_find(points.begin(), points.end()) != points.end())
    throw InvalidArgument("vertex list must be sorted and duplicate-free");
  auto g = from_points(family, std::move(schedule), level, std::move(points));
  const auto stored = Graph::from_edges(g.vertex_count(), std::move(edges));
  if (!std::equal(stored.edges().begin(), stored.edges().end(), g.graph_.edges().begin(), g.graph_.edges().end()))
    throw InvalidArgument("stored edges differ from the edge rule applied to the stored vertices");
  return g;
}

std::optional<Vertex> FractalGraph::index_of(LatticePoint p) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it == points_.end() || *it != p) return std::nullopt;
  return static_cast<Vertex>(it - points_.begin());
}

Vertex FractalGraph::vertex_at(LatticePoint p) const {
  const auto idx = index_of(p);
  if (!idx)
    throw InvalidArgument("(" + std::to_string(p.a) + "," + std::to_string(p.b) + ") is not a vertex of this graph");
  return *idx;
}

LatticePoint FractalGraph::named_point(int j) const {
  const auto c = cell_offset(j);
  const auto h = half_width();
  if (is_blowup()) return {h + h * c.a, h + h * c.b};
  return {h * c.a, h * c.b};
}

Vertex FractalGraph::central_vertex() const {
  const auto h = half_width();
  const LatticePoint center = is_blowup() ? LatticePoint{h, h} : LatticePoint{0, 0};
  Vertex best = 0;
  auto best_d = std::numeric_limits<std::int64_t>::max();
  for (Vertex v = 0; v < points_.size(); ++v) {
    const auto da = points_[v].a - center.a;
    const auto db = points_[v].b - center.b;
    const auto d = da * da + db * db;
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

FractalGraph generate_level(Family family, const std::optional<Schedule>& schedule, int n) {
  if (n < 0) throw InvalidArgument("level must be non-negative");
  if (family == Family::blowup) throw InvalidArgument("use generate_blowup for blow-up truncations");
  if (family == Family::hybrid && !schedule) throw InvalidArgument("hybrid family requires a schedule");

  std::optional<Schedule> stored;
  if (family == Family::hybrid) stored = *schedule;

  auto pts = base_points(family);
  sort_unique(pts);
  for (int k = 1; k <= n; ++k) {
    bool carpet = true;
    if (family == Family::vicsek) carpet = false;
    if (family == Family::hybrid) carpet = (*schedule)(k) == 1;
    if (carpet)
      pts = refine(pts, kCarpetMaps, k);
    else
      pts = refine(pts, kVicsekMaps, k);
  }
  return FractalGraph::from_points(family, std::move(stored), n, std::move(pts));
}

FractalGraph generate_blowup(const Schedule& schedule, int m) {
  const auto level = generate_level(Family::hybrid, schedule, m);
  const auto h = pow3(m);
  std::vector<LatticePoint> pts;
  pts.reserve(level.vertex_count());
  for (const auto& p : level.vertices()) pts.push_back({p.a + h, p.b + h});
  return FractalGraph::from_points(Family::blowup, schedule, m, std::move(pts));
}

double estimated_vertex_count(Family family, const std::optional<Schedule>& schedule, int n) {
  double count = family == Family::sc_corner ? 4.0 : 5.0;
  for (int k = 1; k <= n; ++k) {
    bool carpet = family == Family::sc_corner || family == Family::sc_center;
    if ((family == Family::hybrid || family == Family::blowup) && schedule) carpet = (*schedule)(k) == 1;
    count *= carpet ? 8.0 : 5.0;
  }
  return count;
}

BoundarySets boundary_sets(const FractalGraph& g) {
  if (g.is_blowup()) throw InvalidArgument("boundary faces are defined for level graphs only");
  const auto h = g.half_width();
  BoundarySets out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.point(v).a == -h) out.left.push_back(v);
    if (g.point(v).a == h) out.right.push_back(v);
  }
  if (out.left.empty() || out.right.empty()) throw InvariantViolation("empty boundary face (generator bug)");
  return out;
}

std::vector<bool> truncation_boundary(const FractalGraph& blowup) {
  if (!blowup.is_blowup() || !blowup.schedule()) throw InvalidArgument("truncation boundary needs a blow-up graph");
  const auto next = generate_blowup(*blowup.schedule(), blowup.level() + 1);
  std::vector<bool> out(blowup.vertex_count(), false);
  for (Vertex v = 0; v < blowup.vertex_count(); ++v) {
    const auto w = next.vertex_at(blowup.point(v));
    out[v] = next.graph().degree(w) > blowup.graph().degree(v);
  }
  return out;
}

bool box_contains(const BoxIndex& box, LatticePoint p) {
  const auto s = 2 * pow3(box.n);
  return s * box.a <= p.a && p.a <= s * (box.a + 1) && s * box.b <= p.b && p.b <= s * (box.b + 1);
}

bool box_occupied(const Schedule& schedule, const BoxIndex& box) {
  if (box.n < 0) throw InvalidArgument("occupancy oracle needs a non-negative scale");
  if (box.a < 0 || box.b < 0) return false;
  auto a = box.a;
  auto b = box.b;
  for (int level = box.n + 1; a > 0 || b > 0; ++level) {
    const auto da = a % 3;
    const auto db = b % 3;
    if (schedule(level) == 1) {
      if (da == 1 && db == 1) return false;
    } else {
      const bool kept = (da == 1 && db == 1) || (da != 1 && db != 1);
      if (!kept) return false;
    }
    a /= 3;
    b /= 3;
  }
  return true;
}

namespace {

std::vector<BoxIndex> occupied_boxes_around(const Schedule& schedule, int n, LatticePoint p) {
  const auto s = 2 * pow3(n);
  auto candidates = [s](std::int64_t c) {
    std::vector<std::int64_t> out;
    const auto q = c >= 0 ? c / s : -((-c + s - 1) / s);
    out.push_back(q);
    if (c % s == 0) out.push_back(q - 1);
    return out;
  };
  std::vector<BoxIndex> out;
  for (auto a : candidates(p.a))
    for (auto b : candidates(p.b)) {
      const BoxIndex box{n, a, b};
      if (box_occupied(schedule, box)) out.push_back(box);
    }
  return out;
}

}  // namespace

int box_scale_n(const Schedule& schedule, LatticePoint x, LatticePoint y) {
  if (x == y) throw InvalidArgument("box scale is undefined for x == y");
  for (int n = 0; n < 38; ++n) {
    const auto bx = occupied_boxes_around(schedule, n, x);
    const auto by = occupied_boxes_around(schedule, n, y);
    for (const auto& u : bx)
      for (const auto& v : by)
        if (std::abs(u.a - v.a) <= 1 && std::abs(u.b - v.b) <= 1) return n;
  }
  throw InvalidArgument("points are not vertices of the blow-up graph");
}

}  // namespace fracdim
