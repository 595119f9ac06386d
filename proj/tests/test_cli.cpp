#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracdim/cli.hpp"
#include "fracdim/graph_io.hpp"
#include "fracdim/lattice.hpp"
#include "fracdim/network.hpp"
#include "json.hpp"

using namespace fracdim;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fracdim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(Fnv, ReferenceVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST_F(CliTest, GenerateWritesGraphFiles) {
  ASSERT_EQ(cli({"generate", "--family", "vicsek", "--level", "2", "--out", path("v2.txt")}).code, kExitOk);
  const auto g = read_graph_file(path("v2.txt"));
  EXPECT_EQ(g.vertex_count(), 101u);
  const auto text = slurp(path("v2.txt"));
  EXPECT_EQ(text.rfind(std::string("# fracdim ") + kToolVersion, 0), 0u);
  EXPECT_NE(text.find("config_hash="), std::string::npos);

  ASSERT_EQ(cli({"generate", "--family", "hybrid", "--schedule", "fstar", "--level", "0", "--out", path("g0.txt")}).code,
            kExitOk);
  EXPECT_EQ(read_graph_file(path("g0.txt")).vertex_count(), 5u);
}

TEST_F(CliTest, GenerateRoundTripIsIdentity) {
  const std::vector<std::string> args{"generate", "--family", "hybrid", "--schedule", "fstar", "--level", "3"};
  const auto first = cli(args);
  const auto second = cli(args);
  ASSERT_EQ(first.code, kExitOk);
  EXPECT_EQ(first.out, second.out);
  // Strip the comment line, load, and write again.
  const auto body = first.out.substr(first.out.find('\n') + 1);
  std::istringstream in(first.out);
  EXPECT_EQ(graph_to_string(read_graph(in)), body);
  EXPECT_EQ(body, graph_to_string(generate_level(Family::hybrid, Schedule::f_star(), 3)));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(cli({"generate", "--family", "hybrid", "--schedule", "fstar2", "--level", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"generate", "--family", "hybrid", "--level", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"generate", "--family", "nope", "--level", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"generate", "--family", "sc_corner", "--level", "12"}).code, kExitBudget);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  EXPECT_EQ(cli({"--version"}).code, kExitOk);
  EXPECT_EQ(cli({"experiment", "not-an-experiment"}).code, kExitUsage);
  EXPECT_EQ(cli({"resistance", "--graph", path("missing.txt"), "--source", "p1", "--sink", "p5"}).code, kExitUsage);
}

TEST_F(CliTest, ResistanceOnLevelZero) {
  ASSERT_EQ(cli({"generate", "--family", "hybrid", "--schedule", "fstar", "--level", "0", "--out", path("g.txt")}).code,
            kExitOk);
  const auto r = cli({"resistance", "--graph", path("g.txt"), "--source", "p1", "--sink", "p5", "--flow-out",
                      path("flow.csv"), "--potential-out", path("pot.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["resistance"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["version"], kToolVersion);
  EXPECT_TRUE(j.contains("config_hash"));
  EXPECT_EQ(j["config"]["source"][0], "p1");

  const auto flow = slurp(path("flow.csv"));
  EXPECT_NE(flow.find("i,j,flow"), std::string::npos);
  double total = 0.0;
  std::istringstream lines(flow);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
    total += std::abs(std::stod(line.substr(line.rfind(',') + 1)));
  }
  EXPECT_NEAR(total, 2.0, 1e-10);  // unit flow along two edges
  EXPECT_NE(slurp(path("pot.csv")).find("vertex_index,a,b,value"), std::string::npos);

  // Face selectors and coordinates.
  const auto faces = cli({"resistance", "--family", "sc_corner", "--level", "1", "--source", "left", "--sink", "right"});
  ASSERT_EQ(faces.code, kExitOk);
  const auto g = generate_level(Family::sc_corner, std::nullopt, 1);
  const auto sides = boundary_sets(g);
  WeightedNetwork net(g.graph());
  EXPECT_NEAR(nlohmann::json::parse(faces.out)["resistance"].get<double>(),
              effective_resistance(net, sides.left, sides.right), 1e-10);
  EXPECT_EQ(cli({"resistance", "--graph", path("g.txt"), "--source", "0,0", "--sink", "idx:2"}).code, kExitUsage);
  EXPECT_EQ(cli({"resistance", "--graph", path("g.txt"), "--source", "9,9", "--sink", "p5"}).code, kExitUsage);
}

TEST_F(CliTest, DisconnectedSelectionIsAnError) {
  {
    std::ofstream out(path("split.txt"));
    out << "fracdim-graph v1 vicsek none 1 diagonal\nV 2\n-3 -3\n3 3\nE 0\n";
  }
  const auto r = cli({"resistance", "--graph", path("split.txt"), "--source", "idx:0", "--sink", "idx:1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("disconnected"), std::string::npos);
}

TEST_F(CliTest, CarpetSeriesRatiosTrackResistanceRatios) {
  const auto r = cli({"penergy", "sc-series", "--p", "2", "--kmax", "4"});
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line[0], '#');
  std::getline(in, line);
  EXPECT_EQ(line, "p,k,energy,ratio,iterations,converged");
  std::vector<double> resistance;
  for (int k = 0; k <= 4; ++k) {
    const auto g = generate_level(Family::sc_corner, std::nullopt, k);
    const auto sides = boundary_sets(g);
    WeightedNetwork net(g.graph());
    resistance.push_back(effective_resistance(net, sides.left, sides.right));
  }
  int k = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_NEAR(std::stod(cells[2]) * resistance[k], 1.0, 1e-6);
    // E_{k}/E_{k-1} = R_{k-1}/R_k, the inverse growth factor.
    if (k > 0) EXPECT_NEAR(std::stod(cells[3]), resistance[k - 1] / resistance[k], 1e-6);
    ++k;
  }
  EXPECT_EQ(k, 5);
}

TEST_F(CliTest, PenergySingle) {
  const auto r = cli({"penergy", "single", "--family", "vicsek", "--level", "1", "--p", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_GT(j["value"].get<double>(), 0.0);
  EXPECT_EQ(cli({"penergy", "single", "--family", "vicsek", "--level", "1", "--p", "1"}).code, kExitUsage);
}

TEST_F(CliTest, HeatKernelCsv) {
  const auto r = cli({"heatkernel", "--family", "blowup", "--schedule", "const0", "--level", "3", "--nmax", "20",
                      "--out", path("hk.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = slurp(path("hk.csv"));
  EXPECT_EQ(text.rfind("# fracdim", 0), 0u);
  EXPECT_NE(text.find("n,h_2n,exact\n2,0.125,1\n"), std::string::npos);
}

TEST_F(CliTest, DimsFitJson) {
  const auto line = cli({"dims", "ds", "--family", "line", "--nmax", "1000"});
  ASSERT_EQ(line.code, kExitOk) << line.err;
  EXPECT_NEAR(nlohmann::json::parse(line.out)["fit"]["slope"].get<double>(), 1.0, 0.05);

  const auto vicsek = cli({"dims", "ds", "--family", "vicsek", "--level", "6", "--nmax", "500"});
  ASSERT_EQ(vicsek.code, kExitOk) << vicsek.err;
  const auto j = nlohmann::json::parse(vicsek.out);
  EXPECT_TRUE(j["fit"].contains("slope"));
  EXPECT_EQ(j["config"]["level"], 6);
  EXPECT_EQ(cli({"dims", "alpha", "--family", "line"}).code, kExitUsage);
  EXPECT_EQ(cli({"dims", "ds", "--family", "vicsek", "--level", "15"}).code, kExitBudget);
}

TEST_F(CliTest, ExperimentExitStatus) {
  const auto ok = cli({"experiment", "lemma-rpt", "--nmax", "3", "--out", path("rpt.json"), "--markdown",
                       path("rpt.md")});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  const auto j = nlohmann::json::parse(slurp(path("rpt.json")));
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["reports"][0]["experiment"], "lemma-rpt");
  EXPECT_EQ(j["config"]["n_max"], 3);
  EXPECT_EQ(slurp(path("rpt.md")).rfind("# lemma-rpt: PASS", 0), 0u);

  // A report with a failing hard assertion maps to exit 1.
  const auto dn = cli({"experiment", "lemma-dn", "--nmax", "3"});
  const auto dj = nlohmann::json::parse(dn.out);
  EXPECT_EQ(dn.code, dj["passed"].get<bool>() ? kExitOk : kExitAssertion);
}

TEST_F(CliTest, ConfigHashTracksConfig) {
  const auto a = nlohmann::json::parse(cli({"dims", "ds", "--family", "line", "--nmax", "200"}).out);
  const auto b = nlohmann::json::parse(cli({"dims", "ds", "--family", "line", "--nmax", "300"}).out);
  const auto c = nlohmann::json::parse(cli({"dims", "ds", "--family", "line", "--nmax", "200"}).out);
  EXPECT_NE(a["config_hash"], b["config_hash"]);
  EXPECT_EQ(a["config_hash"], c["config_hash"]);
}

TEST(CliBinary, RunsAsProcess) {
  const std::string cmd = std::string(FRACDIM_BIN) + " generate --family vicsek --level 1 > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  const std::string bad = std::string(FRACDIM_BIN) + " generate --family hybrid --schedule x --level 1 2> /dev/null";
  const int status = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), kExitUsage);
}
