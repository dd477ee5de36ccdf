#include <doctest.h>

#include "fixtures.hpp"
#include "helpers.hpp"
#include "polsig/cli.hpp"
#include "polsig/csv.hpp"
#include "polsig/ingest.hpp"

using namespace polsig;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "polsig");
  return cli::run(args);
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = testing::slurp(e.path());
  return out;
}

// The term block of a regression file (it is followed by a second header line).
double coef_from_csv(const fs::path& file, const std::string& term) {
  std::istringstream in(testing::slurp(file));
  std::string line;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (line.substr(0, comma) == term) {
      const auto next = line.find(',', comma + 1);
      return csv::parse_double(line.substr(comma + 1, next - comma - 1), term);
    }
  }
  throw std::logic_error("no term " + term);
}

ingest::PanelFiles write_panel(const std::vector<econometrics::PanelRow>& rows, const fs::path& dir) {
  ingest::Panel p;
  p.rows = rows;
  for (const auto& r : rows) {
    p.coalitions[r.i] = r.i < "p14" ? "L" : "R";
    p.coalitions[r.j] = r.j < "p14" ? "L" : "R";
  }
  return ingest::write_panel_files(p, dir);
}

std::vector<std::string> panel_args(const ingest::PanelFiles& f) {
  return {"--likes", f.likes.string(), "--votes", f.votes.string(), "--following", f.following.string(),
          "--coalitions", f.coalitions.string()};
}

}  // namespace

TEST_CASE("estimate-ideology exit codes") {
  testing::TempDir dir("cli-ideo");
  const auto ok = dir.write("s.csv",
                            "respondent_id,self_ideology,politician_id,opinion\n"
                            "r1,1,A,1\nr1,1,B,5\nr1,1,C,3\nr2,3,A,3\nr2,3,B,3\nr2,3,C,4\n"
                            "r3,5,A,5\nr3,5,B,1\nr3,5,C,4\n");
  const auto out = dir.path / "est.csv";
  CHECK(run({"estimate-ideology", "--survey", ok.string(), "--out", out.string()}) == 0);
  CHECK(csv::read(out).rows.size() == 3);
  CHECK(fs::exists(out.string() + ".manifest.toml"));

  const auto missing = dir.write("m.csv", "respondent_id,politician_id,opinion\nr1,A,1\n");
  CHECK(run({"estimate-ideology", "--survey", missing.string(), "--out", out.string()}) == 2);
  const auto flat = dir.write("f.csv",
                              "respondent_id,self_ideology,politician_id,opinion\n"
                              "r1,3,A,1\nr2,3,A,2\nr3,3,A,4\n");
  CHECK(run({"estimate-ideology", "--survey", flat.string(), "--out", out.string()}) == 3);
  CHECK(run({"estimate-ideology", "--survey", (dir.path / "nope.csv").string()}) == 4);
}

TEST_CASE("config and usage errors exit 4") {
  testing::TempDir dir("cli-cfg");
  CHECK(run({}) == 4);
  CHECK(run({"simulate", "--omega", "-1", "--out-dir", dir.path.string()}) == 4);
  CHECK(run({"simulate", "--method", "spectral", "--out-dir", dir.path.string()}) == 4);
  CHECK(run({"simulate", "--messages", "0", "--out-dir", dir.path.string()}) == 4);
  CHECK(run({"simulate", "--theta", "2", "--out-dir", dir.path.string()}) == 4);
  CHECK(run({"simulate", "--config", (dir.path / "missing.toml").string()}) == 4);
  CHECK(run({"--help"}) == 0);
}

TEST_CASE("simulate sweep writes five graphs and a five-row modularity file") {
  testing::TempDir dir("cli-sim");
  const auto out = dir.path / "sweep";
  REQUIRE(run({"simulate", "--gamma-sweep", "0,0.05,0.1,0.15,0.2", "--out-dir", out.string()}) == 0);
  int graphs = 0;
  for (const auto& e : fs::directory_iterator(out)) graphs += e.path().extension() == ".graphml";
  CHECK(graphs == 5);
  CHECK(csv::read(out / "modularity.csv").rows.size() == 5);
  CHECK(csv::read(out / "dyads_gamma_0.1.csv").rows.size() == 784);
  CHECK(fs::exists(out / "manifest.toml"));
}

TEST_CASE("simulate default run has an Opponents term and is deterministic") {
  testing::TempDir dir("cli-det");
  REQUIRE(run({"simulate", "--seed", "3", "--out-dir", (dir.path / "a").string()}) == 0);
  REQUIRE(run({"simulate", "--seed", "3", "--out-dir", (dir.path / "b").string()}) == 0);
  CHECK(coef_from_csv(dir.path / "a" / "regression_run.csv", "Opponents") < 0);
  auto a = snapshot(dir.path / "a"), b = snapshot(dir.path / "b");
  a.erase("manifest.toml");
  b.erase("manifest.toml");
  CHECK(a == b);
  CHECK(testing::slurp(dir.path / "a" / "manifest.toml").find("seed=3") != std::string::npos);
}

TEST_CASE("rerun from the manifest reproduces every file") {
  testing::TempDir dir("cli-manifest");
  const auto out = dir.path / "run";
  REQUIRE(run({"simulate", "--gamma-mode", "homogeneous", "--gamma", "0.05", "--messages", "120", "--omega",
               "0.8", "--electorate", "normal_discrete", "--out-dir", out.string()}) == 0);
  const auto first = snapshot(out);
  const auto manifest = dir.path / "manifest.toml";
  fs::copy_file(out / "manifest.toml", manifest);
  fs::remove_all(out);
  REQUIRE(run({"simulate", "--config", manifest.string()}) == 0);
  CHECK(snapshot(out) == first);
  // explicit flags still win over the file
  REQUIRE(run({"--config", manifest.string(), "simulate", "--out-dir", (dir.path / "other").string(),
               "--messages", "60"}) == 0);
  CHECK(testing::slurp(dir.path / "other" / "manifest.toml").find("messages=60") != std::string::npos);
}

TEST_CASE("analyze writes nine regressions and recovers planted coefficients") {
  testing::TempDir dir("cli-analyze");
  const auto rows = fixtures::integer_panel(4);
  const auto files = write_panel(rows, dir.path / "in");
  const auto before = snapshot(dir.path / "in");
  auto args = panel_args(files);
  args.insert(args.begin(), "analyze");
  args.insert(args.end(), {"--out-dir", (dir.path / "out").string()});
  REQUIRE(run(args) == 0);
  CHECK(snapshot(dir.path / "in") == before);
  for (int k = 1; k <= 9; ++k) CHECK(fs::exists(dir.path / "out" / ("regression_col" + std::to_string(k) + ".csv")));
  const auto col9 = dir.path / "out" / "regression_col9.csv";
  CHECK(std::abs(coef_from_csv(col9, "Likes") + 1.0) < 1e-8);
  CHECK(std::abs(coef_from_csv(col9, "Likes x Opponent") - 2.0) < 1e-8);
  CHECK(std::abs(coef_from_csv(col9, "Following") - 3.0) < 1e-8);
  CHECK(std::abs(coef_from_csv(col9, "Likes^2")) < 1e-8);
  CHECK(csv::read(dir.path / "out" / "modularity.csv").rows.size() == 6);
  CHECK(fs::exists(dir.path / "out" / "summary.csv"));
  CHECK(fs::exists(dir.path / "out" / "join_report.txt"));
}

TEST_CASE("identical periods give identical modularity") {
  testing::TempDir dir("cli-periods");
  auto rows = fixtures::integer_panel(5, 10, 1);
  auto copy = rows;
  for (auto& r : copy) {
    r.t = "t1";
    r.votes += 1;  // shifts the period effect only
  }
  rows.insert(rows.end(), copy.begin(), copy.end());
  const auto files = write_panel(rows, dir.path / "in");
  auto args = panel_args(files);
  args.insert(args.begin(), "analyze");
  args.insert(args.end(), {"--out-dir", (dir.path / "out").string()});
  REQUIRE(run(args) == 0);
  const auto t = csv::read(dir.path / "out" / "modularity.csv");
  std::map<std::string, std::string> q;
  for (const auto& row : t.rows) q[row[0]] = row[2];
  CHECK(q.at("likes:t0") == q.at("likes:t1"));
}

TEST_CASE("summarize and network subcommands") {
  testing::TempDir dir("cli-misc");
  const auto files = write_panel(fixtures::integer_panel(2), dir.path / "in");
  auto args = panel_args(files);
  args.insert(args.begin(), "summarize");
  args.insert(args.end(), {"--out-dir", (dir.path / "sum").string()});
  REQUIRE(run(args) == 0);
  CHECK(csv::read(dir.path / "sum" / "summary.csv").rows.size() == 12);

  std::string long_form = "row_id,col_id,value\n";
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b)
      if (a != b && (a < 5) == (b < 5))
        long_form += "n" + std::to_string(a) + ",n" + std::to_string(b) + "," + std::to_string(1 + (a + b) % 3) + "\n";
  const auto m = dir.write("blocks.csv", long_form);
  REQUIRE(run({"network", "--matrix", m.string(), "--method", "edge_betweenness", "--out-dir",
               (dir.path / "net").string()}) == 0);
  const auto t = csv::read(dir.path / "net" / "modularity.csv");
  CHECK(t.rows.at(0)[1] == "edge_betweenness");
  CHECK(csv::parse_double(t.rows.at(0)[2], "Q") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fs::exists(dir.path / "net" / "graph.graphml"));
  const auto bad = dir.write("bad.csv", "row,col\n");
  CHECK(run({"network", "--matrix", bad.string(), "--out-dir", (dir.path / "net2").string()}) == 2);
}
