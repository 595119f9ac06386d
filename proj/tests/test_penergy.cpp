#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fracdim/errors.hpp"
#include "fracdim/lattice.hpp"
#include "fracdim/network.hpp"
#include "fracdim/penergy.hpp"

using namespace fracdim;

namespace {

const std::vector<Vertex> kFirst{0};

std::vector<Vertex> last_of(const Graph& g) { return {g.vertex_count() - 1}; }

}  // namespace

TEST(PEnergy, SingleEdge) {
  const auto e = path_graph(2);
  for (double p : {1.1, 1.5, 2.0, 3.0, 6.0}) {
    const auto r = p_energy(e, kFirst, last_of(e), p);
    EXPECT_NEAR(r.value, 1.0, 1e-12) << p;
    EXPECT_TRUE(r.converged);
  }
}

TEST(PEnergy, PathSplitsEvenly) {
  for (std::size_t k : {3u, 9u, 27u}) {
    const auto g = path_graph(k + 1);
    for (double p : {1.3, 1.8, 2.0, 2.5, 4.0}) {
      const auto r = p_energy(g, kFirst, last_of(g), p);
      const double expected = std::pow(static_cast<double>(k), 1.0 - p);
      EXPECT_NEAR(r.value, expected, 1e-7 * expected) << k << " " << p;
      for (std::size_t i = 0; i <= k; ++i)
        EXPECT_NEAR(r.minimizer[i], 1.0 - static_cast<double>(i) / static_cast<double>(k), 1e-5);
    }
  }
}

TEST(PEnergy, PEqualsTwoMatchesResistance) {
  std::vector<FractalGraph> graphs;
  for (const auto& f : {Schedule::const0(), Schedule::const1(), Schedule::f_star()})
    for (int n = 1; n <= 3; ++n) graphs.push_back(generate_level(Family::hybrid, f, n));
  graphs.push_back(generate_level(Family::sc_corner, std::nullopt, 3));
  for (const auto& g : graphs) {
    const auto faces = boundary_sets(g);
    WeightedNetwork net(g.graph());
    const double r = effective_resistance(net, faces.left, faces.right);
    const auto e2 = p_energy(g.graph(), faces.left, faces.right, 2.0);
    EXPECT_NEAR(e2.value * r, 1.0, 1e-6);
    EXPECT_NEAR(p_energy_of(g.graph(), e2.minimizer, 2.0), e2.value, 1e-12 * e2.value);
  }
}

TEST(PEnergy, MinimizerBoundsAndClipping) {
  const auto g = generate_level(Family::hybrid, Schedule::f_star(), 3);
  const auto faces = boundary_sets(g);
  for (double p : {1.3, 1.8, 3.0}) {
    const auto r = p_energy(g.graph(), faces.left, faces.right, p);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.value, r.pre_clip_value + 1e-15);
    for (double v : r.minimizer) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    for (auto x : faces.left) EXPECT_EQ(r.minimizer[x], 1.0);
    for (auto x : faces.right) EXPECT_EQ(r.minimizer[x], 0.0);
    EXPECT_NEAR(p_energy_of(g.graph(), r.minimizer, p), r.value, 1e-12 * r.value);
  }
}

TEST(PEnergy, SmoothedObjectiveDescends) {
  const auto g = generate_level(Family::sc_corner, std::nullopt, 2);
  const auto faces = boundary_sets(g);
  const auto r = p_energy(g.graph(), faces.left, faces.right, 1.6);
  ASSERT_FALSE(r.stage_objectives.empty());
  for (const auto& stage : r.stage_objectives)
    for (std::size_t i = 1; i < stage.size(); ++i) EXPECT_LE(stage[i], stage[i - 1] * (1 + 1e-12));
}

TEST(PEnergy, MinimizerBeatsPerturbations) {
  const auto g = generate_level(Family::hybrid, Schedule::f_star(), 2);
  const auto faces = boundary_sets(g);
  const double p = 2.7;
  const auto r = p_energy(g.graph(), faces.left, faces.right, p);
  std::vector<bool> fixed(g.vertex_count(), false);
  for (auto x : faces.left) fixed[x] = true;
  for (auto x : faces.right) fixed[x] = true;
  for (Vertex v = 0; v < g.vertex_count(); v += 5) {
    if (fixed[v]) continue;
    for (double delta : {-1e-3, 1e-3}) {
      auto f = r.minimizer;
      f[v] += delta;
      EXPECT_GE(p_energy_of(g.graph(), f, p), r.value * (1 - 1e-9));
    }
  }
}

TEST(PEnergy, ContinuousInP) {
  // Halving the step in p halves the change in energy (differentiable in p).
  const auto g = generate_level(Family::sc_corner, std::nullopt, 2);
  const auto faces = boundary_sets(g);
  auto energy = [&](double p) { return p_energy(g.graph(), faces.left, faces.right, p).value; };
  const double base = energy(1.8);
  const double full = energy(1.8 + 2e-3) - base;
  const double half = energy(1.8 + 1e-3) - base;
  EXPECT_LT(std::abs(full), 0.01 * base);
  EXPECT_NEAR(full / half, 2.0, 0.05);
}

TEST(PEnergy, Errors) {
  const auto g = path_graph(4);
  EXPECT_THROW(p_energy(g, kFirst, last_of(g), 1.0), InvalidArgument);
  EXPECT_THROW(p_energy(g, kFirst, last_of(g), 0.5), InvalidArgument);
  EXPECT_THROW(p_energy(g, kFirst, kFirst, 2.0), InvalidArgument);
  EXPECT_THROW(p_energy(g, std::vector<Vertex>{}, kFirst, 2.0), InvalidArgument);
  EXPECT_THROW(sc_energy_series(2.0, 6), InvalidArgument);
}

TEST(PEnergy, CarpetSeriesAtTwoIsInverseFaceResistance) {
  const auto s = sc_energy_series(2.0, 4);
  ASSERT_EQ(s.results.size(), 5u);
  for (int k = 0; k <= 4; ++k) {
    const auto g = generate_level(Family::sc_corner, std::nullopt, k);
    const auto faces = boundary_sets(g);
    WeightedNetwork net(g.graph());
    EXPECT_NEAR(s.results[k].value * effective_resistance(net, faces.left, faces.right), 1.0, 1e-6);
  }
  ASSERT_EQ(s.series.ratios.size(), 4u);
  for (double r : s.series.ratios) {
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 1.0);
  }
  // Ratios settle: successive changes shrink.
  EXPECT_LT(std::abs(s.series.ratios[3] - s.series.ratios[2]), std::abs(s.series.ratios[2] - s.series.ratios[1]));
}

TEST(PEnergy, CarpetSeriesCollapsesForLargeP) {
  const auto s = sc_energy_series(6.0, 3);
  for (double r : s.series.ratios) EXPECT_LT(r, 0.5);
}

TEST(PEnergy, SubmultiplicativeConstantIsBounded) {
  // E_{k+k'} <= C E_k E_k'; on the tripling path C = 1 exactly, on the carpet C is measured.
  const double p = 1.8;
  std::vector<double> path;
  for (int k = 0; k <= 3; ++k) {
    const auto g = path_graph(static_cast<std::size_t>(pow3(k)) + 1);
    path.push_back(p_energy(g, kFirst, last_of(g), p).value);
  }
  const auto carpet = sc_energy_series(p, 3).series.values;
  double c_path = 0.0, c_carpet = 0.0;
  for (int k = 0; k <= 3; ++k)
    for (int kk = 0; k + kk <= 3; ++kk) {
      c_path = std::max(c_path, path[k + kk] / (path[k] * path[kk]));
      c_carpet = std::max(c_carpet, carpet[k + kk] / (carpet[k] * carpet[kk]));
    }
  EXPECT_NEAR(c_path, 1.0, 1e-6);
  RecordProperty("carpet_submultiplicative_constant", std::to_string(c_carpet));
  EXPECT_TRUE(std::isfinite(c_carpet));
  EXPECT_GT(c_carpet, 0.0);
}

TEST(PEnergy, HybridSupConstantScheduleIgnoresShift) {
  const double p = 1.7;
  const auto sup = hybrid_energy_sup(p, 2, Schedule::const0(), 10);
  EXPECT_EQ(sup.window_energy.size(), 1u);
  EXPECT_EQ(sup.argmax_window, "00");
  const auto vicsek = generate_level(Family::vicsek, std::nullopt, 2);
  const auto faces = boundary_sets(vicsek);
  EXPECT_NEAR(sup.value, p_energy(vicsek.graph(), faces.left, faces.right, p).value, 1e-9);
}

TEST(PEnergy, HybridAllEightCellsVersusCarpet) {
  // The all-ones hybrid graph is the carpet plus center diagonals; both values are recorded.
  const double p = 2.0;
  for (int k = 1; k <= 3; ++k) {
    const double hybrid = hybrid_energy(p, k, Schedule::const1()).value;
    const double carpet = sc_energy_series(p, k).results.back().value;
    RecordProperty("hybrid_const1_k" + std::to_string(k), std::to_string(hybrid));
    RecordProperty("carpet_k" + std::to_string(k), std::to_string(carpet));
    EXPECT_GT(hybrid, 0.0);
    EXPECT_GT(carpet, 0.0);
  }
}

TEST(PEnergy, HybridSupEnumeratesWindows) {
  const double p = 1.7;
  const auto f = Schedule::f_star();
  const std::int64_t a_max = 30;
  std::set<std::string> expected;
  for (std::int64_t a = 0; a <= a_max; ++a) {
    std::string w;
    for (std::int64_t n = a + 1; n <= a + 2; ++n) {
      bool one = false;
      for (std::int64_t k = 1; k * (k * k - 1) < n; ++k) one = one || n <= k * k * k;
      w.push_back(one ? '1' : '0');
    }
    expected.insert(w);
  }
  const auto sup = hybrid_energy_sup(p, 2, f, a_max);
  std::set<std::string> found;
  double best = 0.0;
  for (const auto& [w, value] : sup.window_energy) {
    found.insert(w);
    const auto direct = hybrid_energy(p, 2, Schedule::parse("bits:" + w)).value;
    EXPECT_NEAR(value, direct, 1e-12);
    best = std::max(best, direct);
  }
  EXPECT_EQ(found, expected);
  EXPECT_EQ(found, (std::set<std::string>{"00", "01", "10", "11"}));
  EXPECT_EQ(sup.value, best);
  EXPECT_EQ(Schedule::shifted(f, sup.argmax_shift).window(2), sup.argmax_window);
}

TEST(PEnergy, ArcEstimateOnSyntheticProvider) {
  // gamma(p) = 3^{1.5 - p} crosses 1 at p = 1.5.
  const GammaProvider provider = [](double p) {
    return GammaEstimate{std::pow(3.0, 1.5 - p), std::pow(3.0, 1.45 - p)};
  };
  const auto est = estimate_arc_dimension(provider, 1.1, 3.0, 1e-3);
  EXPECT_NEAR(est.p_star, 1.5, 1e-3);
  EXPECT_LE(est.p_hi - est.p_lo, 1e-3);
  ASSERT_TRUE(est.p_star_penultimate.has_value());
  EXPECT_NEAR(*est.p_star_penultimate, 1.45, 1e-3);
  EXPECT_NEAR(est.bias, 0.05, 2e-3);
  EXPECT_TRUE(est.gamma_decreasing);
}

TEST(PEnergy, ArcEstimateRejectsPathBracket) {
  // Tripling path: E_k = (3^k)^{1-p}, gamma = 3^{1-p} < 1 on the whole bracket.
  const GammaProvider path = [](double p) {
    std::vector<double> e;
    for (int k = 0; k <= 3; ++k) {
      const auto g = path_graph(static_cast<std::size_t>(pow3(k)) + 1);
      e.push_back(p_energy(g, kFirst, last_of(g), p).value);
    }
    return GammaEstimate{e[3] / e[2], e[2] / e[1]};
  };
  EXPECT_NEAR(path(2.0).last, 1.0 / 3.0, 1e-8);
  EXPECT_THROW(estimate_arc_dimension(path, 1.2, 3.0, 0.01), InvalidArgument);
  EXPECT_THROW(estimate_arc_dimension(path, 3.0, 1.2, 0.01), InvalidArgument);
}
