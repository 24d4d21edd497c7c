#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgt/classical.hpp"
#include "qgt/commands.hpp"
#include "qgt/ewl.hpp"

using namespace qgt;
using namespace qgt::cli;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path games_dir() { return QGT_GAMES_DIR; }

std::string pd_spec() { return (games_dir() / "pd.game").string(); }
std::string ewl_spec() { return (games_dir() / "ewl.game").string(); }

// Writes content to a scratch file and returns its path.
std::string scratch_spec(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << content;
  return path.string();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("nash on the classical dilemma reports mutual defection") {
  const auto r = run({"nash", pd_spec()});
  CHECK(r.code == 0);
  CHECK(r.out.find("pure Nash equilibria: 1") != std::string::npos);
  CHECK(r.out.find("(D, D)") != std::string::npos);
  CHECK(r.out.find("payoffs = (1, 1)") != std::string::npos);
}

TEST_CASE("nash JSON output is machine readable") {
  const auto r = run({"nash", pd_spec(), "--json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.contains("pure_nash"));
  REQUIRE(doc["pure_nash"].size() == 1);
  CHECK(doc["pure_nash"][0]["row_label"] == "D");
  CHECK(doc["pure_nash"][0]["payoff_row"] == 1.0);
}

TEST_CASE("nash on the quantized game certifies the quantum pair") {
  const auto r = run({"nash", ewl_spec(), "--row-strategy", "Q",
                      "--col-strategy", "Q", "--grid", "17"});
  CHECK(r.code == 0);
  CHECK(r.out.find("holds: yes") != std::string::npos);

  const auto dd = run({"nash", ewl_spec(), "--row-strategy", "D",
                       "--col-strategy", "D", "--grid", "17"});
  CHECK(dd.code == 0);
  CHECK(dd.out.find("holds: no") != std::string::npos);
  CHECK(dd.out.find("worst deviation") != std::string::npos);
}

TEST_CASE("nash on the quantized game requires both strategies") {
  const auto r = run({"nash", ewl_spec(), "--row-strategy", "Q"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("payoff reports expected values") {
  SUBCASE("classical uniform profile") {
    const auto r = run({"payoff", pd_spec(), "--row", "0.5,0.5", "--col",
                        "0.5,0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("payoffs = (2.25, 2.25)") != std::string::npos);
  }

  SUBCASE("quantum strategy pair") {
    const auto r =
        run({"payoff", ewl_spec(), "--row", "Q", "--col", "Q"});
    CHECK(r.code == 0);
    CHECK(r.out.find("payoffs = (3, 3)") != std::string::npos);
  }
}

TEST_CASE("ess verdicts") {
  const auto stable =
      run({"ess", pd_spec(), "--candidate", "0,1", "--grid", "9"});
  CHECK(stable.code == 0);
  CHECK(stable.out.find("evolutionarily stable") != std::string::npos);
  CHECK(stable.out.find("not evolutionarily stable") == std::string::npos);

  const auto invaded =
      run({"ess", pd_spec(), "--candidate", "1,0", "--grid", "9"});
  CHECK(invaded.code == 0);
  CHECK(invaded.out.find("not evolutionarily stable") != std::string::npos);
  CHECK(invaded.out.find("counterexample challenger") != std::string::npos);
}

TEST_CASE("sweep emits the payoff grid as CSV") {
  const auto r = run({"sweep", ewl_spec(), "--opponent", "D", "--grid", "2"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);
  REQUIRE(rows[0] ==
          std::vector<std::string>{"theta", "phi", "p_row", "p_col"});

  // Corner (theta=0, phi=pi/2) is the fully quantum move against defect.
  bool found_q_corner = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 4);
    // 12-digit output can land a hair outside the angle ranges.
    const double theta = std::min(std::stod(rows[i][0]), kPi);
    const double phi = std::min(std::stod(rows[i][1]), kPi / 2.0);
    const double p_row = std::stod(rows[i][2]);
    const double p_col = std::stod(rows[i][3]);
    const auto expect = ewl::payoffs(ewl::EWLConfig(PDParams{3, 0, 5, 1},
                                                    kPi / 2.0),
                                     ewl::StrategyAngles(theta, phi),
                                     ewl::StrategyAngles::defect());
    CHECK(std::abs(p_row - expect.row) <= 1e-10);
    CHECK(std::abs(p_col - expect.col) <= 1e-10);
    if (theta == 0.0 && std::abs(phi - kPi / 2.0) < 1e-9) {
      found_q_corner = true;
      CHECK(std::abs(p_row - 5.0) <= 1e-9);
      CHECK(std::abs(p_col - 0.0) <= 1e-9);
    }
  }
  CHECK(found_q_corner);
}

TEST_CASE("sweep output is byte-identical across runs") {
  const std::vector<std::string> args{"sweep", ewl_spec(), "--opponent",
                                      "0.7,0.3", "--grid", "5x4"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("entanglement sweep prepends the gamma column") {
  const auto r = run({"sweep", ewl_spec(), "--opponent", "D", "--grid", "2",
                      "--gamma-steps", "3"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 13);
  REQUIRE(rows[0] == std::vector<std::string>{"gamma", "theta", "phi",
                                              "p_row", "p_col"});
  // gamma is the outermost loop: first block is gamma = 0.
  CHECK(std::stod(rows[1][0]) == 0.0);
  CHECK(std::abs(std::stod(rows[12][0]) - kPi / 2.0) <= 1e-10);
}

TEST_CASE("zero-entanglement sweep matches the classical mixed extension") {
  const auto path = scratch_spec("qgt_gamma0.game",
                                 "kind = ewl\nr=3\ns=0\nt=5\nu=1\ngamma=0\n");
  const auto r = run({"sweep", path, "--opponent", "C", "--grid", "3"});
  CHECK(r.code == 0);
  const auto game = BimatrixGame::from_dilemma(PDParams{3, 0, 5, 1});
  const auto rows = parse_csv(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double theta = std::stod(rows[i][0]);
    const double w = std::cos(theta / 2.0) * std::cos(theta / 2.0);
    const auto expect = expected_payoff(
        game, StrategyProfile{MixedStrategy({w, 1.0 - w}),
                              MixedStrategy::pure(0, 2)});
    CHECK(std::abs(std::stod(rows[i][2]) - expect.row) <= 1e-10);
    CHECK(std::abs(std::stod(rows[i][3]) - expect.col) <= 1e-10);
  }
}

TEST_CASE("invade verdicts") {
  SUBCASE("quantum mutant overruns the defect incumbent") {
    const auto r =
        run({"invade", ewl_spec(), "--incumbent", "D", "--mutant", "Q"});
    CHECK(r.code == 0);
    CHECK(r.out.find("invaded") != std::string::npos);
    CHECK(r.out.find("margin = -4") != std::string::npos);
  }

  SUBCASE("low-phase mutant is held off with the threshold reported") {
    const auto r = run(
        {"invade", ewl_spec(), "--incumbent", "D", "--mutant", "1,0.2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("stable") != std::string::npos);
    CHECK(r.out.find("threshold phi") != std::string::npos);
  }

  SUBCASE("the defect incumbent is its own excluded mutant") {
    const auto r =
        run({"invade", ewl_spec(), "--incumbent", "D", "--mutant", "D"});
    CHECK(r.code == 0);
    CHECK(r.out.find("self-mutant excluded") != std::string::npos);
  }

  SUBCASE("quantum incumbent survives the whole grid") {
    const auto r =
        run({"invade", ewl_spec(), "--incumbent", "Q", "--grid", "16"});
    CHECK(r.code == 0);
    CHECK(r.out.find("stable") != std::string::npos);
  }

  SUBCASE("JSON form carries the verdict") {
    const auto r = run({"invade", ewl_spec(), "--incumbent", "D", "--mutant",
                        "Q", "--json"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["stable"] == false);
    CHECK(doc["incumbent"] == "D");
    CHECK(doc["margin"].get<double>() == doctest::Approx(-4.0));
    CHECK(doc["threshold"].get<double>() ==
          doctest::Approx(std::asin(1.0 / std::sqrt(5.0))));
  }

  SUBCASE("other incumbents are rejected as a validation error") {
    const auto r =
        run({"invade", ewl_spec(), "--incumbent", "C", "--mutant", "Q"});
    CHECK(r.code == 2);
  }
}

TEST_CASE("replicate emits the trajectory and a final summary") {
  const auto r = run({"replicate", pd_spec(), "--start", "0.5,0.5", "--dt",
                      "0.01", "--steps", "5000"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5002);
  REQUIRE(rows[0] == std::vector<std::string>{"time", "share_0", "share_1"});
  CHECK(std::stod(rows.back()[0]) == doctest::Approx(50.0));
  CHECK(std::stod(rows.back()[2]) > 0.999);
  CHECK(r.err.find("final shares") != std::string::npos);

  const auto again = run({"replicate", pd_spec(), "--start", "0.5,0.5",
                          "--dt", "0.01", "--steps", "5000"});
  CHECK(again.out == r.out);
}

TEST_CASE("output flag writes the report to a file") {
  const auto target =
      (std::filesystem::temp_directory_path() / "qgt_out.csv").string();
  std::filesystem::remove(target);
  const auto r = run({"sweep", ewl_spec(), "--opponent", "D", "--grid", "2",
                      "--output", target});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(target);
  std::stringstream content;
  content << f.rdbuf();
  const auto direct = run({"sweep", ewl_spec(), "--opponent", "D", "--grid",
                           "2"});
  CHECK(content.str() == direct.out);
}

TEST_CASE("exit codes") {
  SUBCASE("missing spec file is a usage error") {
    const auto r = run({"nash", "/nonexistent/nowhere.game"});
    CHECK(r.code == 1);
    CHECK(r.err.find("cannot open") != std::string::npos);
  }

  SUBCASE("unknown flag is a usage error") {
    const auto r = run({"nash", pd_spec(), "--frobnicate"});
    CHECK(r.code == 1);
  }

  SUBCASE("missing subcommand is a usage error") {
    const auto r = run({});
    CHECK(r.code == 1);
  }

  SUBCASE("malformed spec syntax maps to 1") {
    const auto path = scratch_spec("qgt_bad_syntax.game", "kind = pd\nr r\n");
    const auto r = run({"nash", path});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 2") != std::string::npos);
  }

  SUBCASE("well-formed but invalid spec maps to 2") {
    const auto path = scratch_spec("qgt_bad_chain.game",
                                   "kind = pd\nr=3\ns=0\nt=1\nu=5\n");
    const auto r = run({"nash", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("strict chain") != std::string::npos);
  }

  SUBCASE("degenerate sweep grid maps to 2") {
    const auto r =
        run({"sweep", ewl_spec(), "--opponent", "D", "--grid", "1"});
    CHECK(r.code == 2);
  }

  SUBCASE("single gamma step is rejected") {
    const auto r = run({"sweep", ewl_spec(), "--opponent", "D", "--grid",
                        "2", "--gamma-steps", "1"});
    CHECK(r.code == 2);
  }

  SUBCASE("classical-only commands reject the quantized kind") {
    CHECK(run({"replicate", ewl_spec()}).code == 2);
    CHECK(run({"ess", ewl_spec(), "--candidate", "0,1"}).code == 2);
  }

  SUBCASE("sweep rejects classical kinds") {
    CHECK(run({"sweep", pd_spec(), "--opponent", "D"}).code == 2);
  }

  SUBCASE("invade needs the reference parameters") {
    const auto path = scratch_spec(
        "qgt_other_params.game", "kind = ewl\nr=4\ns=0\nt=6\nu=1\n");
    const auto r = run({"invade", path, "--incumbent", "D", "--mutant", "Q"});
    CHECK(r.code == 2);
  }

  SUBCASE("help exits cleanly") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"nash", "--help"}).code == 0);
  }
}

TEST_CASE("strategy token parsing") {
  const auto q = parse_strategy_token("Q");
  CHECK(q.theta == 0.0);
  CHECK(q.phi == doctest::Approx(kPi / 2.0));
  const auto pair = parse_strategy_token("pi/2,0.3");
  CHECK(pair.theta == doctest::Approx(kPi / 2.0));
  CHECK(pair.phi == 0.3);
  CHECK_THROWS_AS((void)parse_strategy_token("X"), UsageError);
  CHECK_THROWS_AS((void)parse_strategy_token("1,2,3"), UsageError);
}

TEST_CASE("grid token parsing") {
  const auto square = parse_grid("33");
  CHECK(square.theta == 33);
  CHECK(square.phi == 33);
  const auto rect = parse_grid("8x16");
  CHECK(rect.theta == 8);
  CHECK(rect.phi == 16);
  CHECK_THROWS_AS((void)parse_grid("8x"), UsageError);
  CHECK_THROWS_AS((void)parse_grid("x8"), UsageError);
  CHECK_THROWS_AS((void)parse_grid("abc"), UsageError);
}

TEST_CASE("weight list parsing") {
  const auto w = parse_weights("0.25,0.75");
  CHECK(w.size() == 2);
  CHECK(w[1] == 0.75);
  CHECK_THROWS_AS((void)parse_weights("0.25;0.75"), UsageError);
}
