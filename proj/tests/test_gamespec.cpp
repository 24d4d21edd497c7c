#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "qgt/gamespec.hpp"

using namespace qgt;
using namespace qgt::cli;

namespace {

constexpr double kPi = std::numbers::pi;

SpecParseError capture(const std::string& text) {
  try {
    (void)parse_game_spec(text);
  } catch (const SpecParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return SpecParseError(false, 0, 0, "unreachable");
}

}  // namespace

TEST_CASE("dilemma files parse into the symmetric table") {
  const auto spec = parse_game_spec(
      "# reference dilemma\n"
      "kind = pd\n"
      "r = 3\n"
      "s = 0\n"
      "t = 5\n"
      "u = 1\n");
  CHECK(spec.kind == GameSpecFile::Kind::PD);
  REQUIRE(spec.params.has_value());
  CHECK(spec.params->reward == 3.0);
  CHECK(spec.params->temptation == 5.0);
  REQUIRE(spec.row_labels.size() == 2);
  CHECK(spec.row_labels[0] == "C");
  CHECK(spec.row_labels[1] == "D");

  const auto g = spec.bimatrix();
  CHECK(g.at(0, 0).row == 3.0);
  CHECK(g.at(0, 1).row == 0.0);
  CHECK(g.at(0, 1).col == 5.0);
  CHECK(g.at(1, 1).col == 1.0);

  const auto sym = spec.symmetric();
  CHECK(sym.contest_payoff(MixedStrategy::pure(1, 2),
                           MixedStrategy::pure(0, 2)) == 5.0);
}

TEST_CASE("quantized files parse with gamma defaults and pi forms") {
  const auto deflt = parse_game_spec("kind = ewl\nr=3\ns=0\nt=5\nu=1\n");
  CHECK(deflt.kind == GameSpecFile::Kind::EWL);
  CHECK(deflt.gamma == doctest::Approx(kPi / 2.0).epsilon(1e-15));

  const auto quarter =
      parse_game_spec("kind = ewl\nr=3\ns=0\nt=5\nu=1\ngamma = pi/4\n");
  CHECK(quarter.gamma == doctest::Approx(kPi / 4.0).epsilon(1e-15));

  const auto numeric =
      parse_game_spec("kind = ewl\nr=3\ns=0\nt=5\nu=1\ngamma = 0.25\n");
  CHECK(numeric.gamma == 0.25);

  CHECK_NOTHROW((void)deflt.ewl_config());
}

TEST_CASE("bimatrix files parse tables and labels") {
  const auto spec = parse_game_spec(
      "kind = bimatrix\n"
      "rows = 2\n"
      "cols = 3\n"
      "row 0 = (1,2) (3,4) (5,6)\n"
      "row 1 = (7,8) (9,10) (11,12)\n"
      "labels_row = up down\n"
      "labels_col = left mid right\n");
  CHECK(spec.kind == GameSpecFile::Kind::Bimatrix);
  const auto g = spec.bimatrix();
  CHECK(g.rows() == 2);
  CHECK(g.cols() == 3);
  CHECK(g.at(0, 0).row == 1.0);
  CHECK(g.at(1, 2).col == 12.0);
  CHECK(spec.row_labels[1] == "down");
  CHECK(spec.col_labels[2] == "right");
}

TEST_CASE("default labels are strategy indices") {
  const auto spec = parse_game_spec(
      "kind = bimatrix\nrows = 2\ncols = 2\n"
      "row 0 = (1,1) (0,0)\nrow 1 = (0,0) (2,2)\n");
  REQUIRE(spec.row_labels.size() == 2);
  CHECK(spec.row_labels[0] == "0");
  CHECK(spec.col_labels[1] == "1");
}

TEST_CASE("comments, blanks, and CRLF endings are tolerated") {
  const auto spec = parse_game_spec(
      "# leading comment\r\n"
      "\r\n"
      "kind = pd   # trailing comment\r\n"
      "r = 3\r\ns = 0\r\nt = 5\r\nu = 1\r\n");
  CHECK(spec.kind == GameSpecFile::Kind::PD);
}

TEST_CASE("empty input fails at the first position") {
  const auto e = capture("");
  CHECK_FALSE(e.semantic());
  CHECK(e.line() == 1);
  CHECK(e.col() == 1);
}

TEST_CASE("syntax failures carry position information") {
  SUBCASE("unknown key") {
    const auto e = capture("kind = pd\nr = 3\nbogus = 1\ns=0\nt=5\nu=1\n");
    CHECK_FALSE(e.semantic());
    CHECK(e.line() == 3);
  }

  SUBCASE("missing equals sign") {
    const auto e = capture("kind = pd\nr 3\ns=0\nt=5\nu=1\n");
    CHECK_FALSE(e.semantic());
    CHECK(e.line() == 2);
  }

  SUBCASE("bad numeric literal") {
    const auto e = capture("kind = pd\nr = trez\ns=0\nt=5\nu=1\n");
    CHECK_FALSE(e.semantic());
    CHECK(e.line() == 2);
    CHECK(e.col() == 5);
  }

  SUBCASE("duplicate key") {
    const auto e = capture("kind = pd\nr = 3\nr = 4\ns=0\nt=5\nu=1\n");
    CHECK_FALSE(e.semantic());
    CHECK(e.line() == 3);
  }

  SUBCASE("malformed pair list") {
    const auto e = capture(
        "kind = bimatrix\nrows = 1\ncols = 2\nrow 0 = (1,2) (3\n");
    CHECK_FALSE(e.semantic());
    CHECK(e.line() == 4);
  }
}

TEST_CASE("semantic failures") {
  SUBCASE("payoff chain violation for the dilemma kind") {
    const auto e = capture("kind = pd\nr = 3\ns = 0\nt = 1\nu = 5\n");
    CHECK(e.semantic());
  }

  SUBCASE("gamma is rejected outside the entangling range") {
    const auto e =
        capture("kind = ewl\nr=3\ns=0\nt=5\nu=1\ngamma = 2.0\n");
    CHECK(e.semantic());
    CHECK(e.line() == 6);
  }

  SUBCASE("gamma is not a dilemma key") {
    const auto e = capture("kind = pd\nr=3\ns=0\nt=5\nu=1\ngamma = 1\n");
    CHECK(e.semantic());
  }

  SUBCASE("table keys are not dilemma keys") {
    const auto e = capture("kind = pd\nr=3\ns=0\nt=5\nu=1\nrows = 2\n");
    CHECK(e.semantic());
  }

  SUBCASE("missing payoff parameter") {
    const auto e = capture("kind = pd\nr = 3\ns = 0\nt = 5\n");
    CHECK(e.semantic());
  }

  SUBCASE("missing table row") {
    const auto e =
        capture("kind = bimatrix\nrows = 2\ncols = 2\nrow 0 = (1,1) (0,0)\n");
    CHECK(e.semantic());
  }

  SUBCASE("row index out of range") {
    const auto e = capture(
        "kind = bimatrix\nrows = 1\ncols = 1\nrow 0 = (1,1)\nrow 1 = (2,2)\n");
    CHECK(e.semantic());
  }

  SUBCASE("wrong entry count in a row") {
    const auto e = capture(
        "kind = bimatrix\nrows = 1\ncols = 3\nrow 0 = (1,1) (2,2)\n");
    CHECK(e.semantic());
  }

  SUBCASE("label count mismatch") {
    const auto e = capture(
        "kind = bimatrix\nrows = 1\ncols = 1\nrow 0 = (1,1)\n"
        "labels_row = a b\n");
    CHECK(e.semantic());
  }

}

TEST_CASE("unknown kind value is a malformed literal") {
  const auto e = capture("kind = chess\n");
  CHECK_FALSE(e.semantic());
  CHECK(e.line() == 1);
}

TEST_CASE("what() strings embed the position") {
  const auto e = capture("kind = pd\nr = trez\ns=0\nt=5\nu=1\n");
  const std::string msg = e.what();
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("column 5") != std::string::npos);
}

TEST_CASE("symmetric projection rejects asymmetric tables") {
  const auto spec = parse_game_spec(
      "kind = bimatrix\nrows = 2\ncols = 2\n"
      "row 0 = (1,1) (4,0)\nrow 1 = (0,2) (3,3)\n");
  CHECK_THROWS_AS((void)spec.symmetric(), std::invalid_argument);
}

TEST_CASE("engine configuration is gated on the quantized kind") {
  const auto spec = parse_game_spec("kind = pd\nr=3\ns=0\nt=5\nu=1\n");
  CHECK_THROWS_AS((void)spec.ewl_config(), std::invalid_argument);
}

TEST_CASE("number tokens") {
  CHECK(parse_number_or_pi("pi") == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(parse_number_or_pi("pi/2") == doctest::Approx(kPi / 2.0));
  CHECK(parse_number_or_pi("pi/3") == doctest::Approx(kPi / 3.0));
  CHECK(parse_number_or_pi("1.5") == 1.5);
  CHECK(parse_number_or_pi("2e-3") == 2e-3);
  CHECK(parse_number_or_pi("-4") == -4.0);
  CHECK_THROWS_AS((void)parse_number_or_pi("pie"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_number_or_pi("pi/0"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_number_or_pi("abc"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_number_or_pi(""), std::invalid_argument);
}
