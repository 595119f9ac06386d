#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracdim/graph.hpp"
#include "fracdim/schedule.hpp"

namespace fracdim {

/// Integer lattice point. A level-n graph reads it as (a + b i) / (2 * 3^n);
/// a blow-up truncation reads it as (a + b i) / 2. The denominator belongs to
/// the owning graph.
struct LatticePoint {
  std::int64_t a = 0;
  std::int64_t b = 0;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

enum class Family {
  hybrid,     ///< G_n(f): five or eight copies per level according to the schedule
  vicsek,     ///< hybrid with the all-zero schedule
  sc_corner,  ///< graphical carpet on the cell corners, axis edges of length 3^-n
  sc_center,  ///< carpet on cell centers and edge midpoints, axis edges of length 3^-n / 2
  blowup,     ///< level-m truncation 3^m (G_m(f) + 1/2 + i/2) of the infinite graph
};

enum class EdgeRule {
  diagonal,  ///< difference in {(+-s, +-s)}
  axis,      ///< difference in {(+-s, 0), (0, +-s)}
};

std::string to_string(Family family);
std::string to_string(EdgeRule rule);
Family parse_family(std::string_view text);
EdgeRule parse_edge_rule(std::string_view text);

std::int64_t pow3(int n);

/// c_j = 2 p_j in half-unit coordinates, j = 0..8.
LatticePoint cell_offset(int j);

class FractalGraph {
 public:
  /// Builds the graph on `points` (sorted and deduplicated here) with every
  /// pair satisfying the family's edge rule joined.
  static FractalGraph from_points(Family family, std::optional<Schedule> schedule, int level,
                                  std::vector<LatticePoint> points);

  /// Adopts a stored vertex/edge list after checking it is exactly what the
  /// edge rule produces on those vertices.
  static FractalGraph from_parts(Family family, std::optional<Schedule> schedule, int level, EdgeRule rule,
                                 std::vector<LatticePoint> points, std::vector<Edge> edges);

  Family family() const noexcept { return family_; }
  const std::optional<Schedule>& schedule() const noexcept { return schedule_; }
  int level() const noexcept { return level_; }
  EdgeRule edge_rule() const noexcept { return rule_; }
  /// Lattice spacing of the edge rule in integer units.
  std::int64_t step() const noexcept { return step_; }
  /// 3^level; level graphs live in [-h, h]^2, blow-ups in [0, 2h]^2.
  std::int64_t half_width() const noexcept { return pow3(level_); }
  bool is_blowup() const noexcept { return family_ == Family::blowup; }

  const Graph& graph() const noexcept { return graph_; }
  std::span<const LatticePoint> vertices() const noexcept { return points_; }
  std::size_t vertex_count() const noexcept { return points_.size(); }
  const LatticePoint& point(Vertex v) const { return points_[v]; }

  std::optional<Vertex> index_of(LatticePoint p) const;
  /// index_of that throws InvalidArgument for non-vertices.
  Vertex vertex_at(LatticePoint p) const;

  /// p_j at this graph's scale (translated for blow-ups).
  LatticePoint named_point(int j) const;

  /// Vertex closest to the center of the graph's square, ties broken by
  /// lexicographic order.
  Vertex central_vertex() const;

 private:
  FractalGraph() = default;

  Family family_ = Family::hybrid;
  std::optional<Schedule> schedule_;
  int level_ = 0;
  EdgeRule rule_ = EdgeRule::diagonal;
  std::int64_t step_ = 1;
  std::vector<LatticePoint> points_;
  Graph graph_;
};

EdgeRule edge_rule_of(Family family);
std::int64_t step_of(Family family);

/// Level-n graph of a family. `schedule` is required for Family::hybrid and
/// ignored otherwise.
FractalGraph generate_level(Family family, const std::optional<Schedule>& schedule, int n);

/// Level-m truncation of the infinite graph: level-m vertices shifted by (3^m, 3^m).
FractalGraph generate_blowup(const Schedule& schedule, int m);

/// Rough vertex-count bound used for budget checks before generating.
double estimated_vertex_count(Family family, const std::optional<Schedule>& schedule, int n);

struct BoundarySets {
  std::vector<Vertex> left;   ///< Re z = -1/2
  std::vector<Vertex> right;  ///< Re z = +1/2
};

/// Opposite faces of a level graph; throws InvariantViolation if either is empty.
BoundarySets boundary_sets(const FractalGraph& g);

/// Vertices of a blow-up truncation whose degree in the infinite graph exceeds
/// their degree in the truncation (computed against the next truncation).
std::vector<bool> truncation_boundary(const FractalGraph& blowup);

/// Closed box [3^n a, 3^n (a+1)] x [3^n b, 3^n (b+1)] in blow-up real coordinates.
struct BoxIndex {
  int n = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  friend auto operator<=>(const BoxIndex&, const BoxIndex&) = default;
};

bool box_contains(const BoxIndex& box, LatticePoint blowup_point);

/// Whether the open box meets the infinite graph, decided from the base-3
/// digits of (a, b) and the schedule. Requires n >= 0.
bool box_occupied(const Schedule& schedule, const BoxIndex& box);

/// Minimal n >= 0 admitting occupied boxes at scale n around x and y that
/// touch. x and y are blow-up coordinates; throws for x == y.
int box_scale_n(const Schedule& schedule, LatticePoint x, LatticePoint y);

}  // namespace fracdim
