#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qgt/classical.hpp"
#include "qgt/ewl.hpp"

namespace qgt::cli {

// Game description files are line oriented:
//
//   # classical dilemma
//   kind = pd
//   r = 3
//   s = 0
//   t = 5
//   u = 1
//
//   # general two-player table
//   kind = bimatrix
//   rows = 2
//   cols = 2
//   row 0 = (3,3) (0,5)
//   row 1 = (5,0) (1,1)
//   labels_row = C D
//   labels_col = C D
//
//   # quantized dilemma; gamma defaults to pi/2 (maximal entanglement)
//   kind = ewl
//   r = 3
//   s = 0
//   t = 5
//   u = 1
//   gamma = pi/2
//
// '#' starts a comment, blank lines are skipped. Numeric values accept
// plain floats plus the forms "pi" and "pi/<number>". "kind" selects which
// other keys are required: pd and ewl take the four payoff parameters
// (gamma only for ewl), bimatrix takes rows, cols, one "row <i>" entry per
// row, and optional labels. The pd kind must satisfy the strict chain
// sucker < punishment < reward < temptation; ewl accepts any finite
// payoffs.
struct GameSpecFile {
  enum class Kind { Bimatrix, PD, EWL };

  Kind kind = Kind::Bimatrix;
  std::optional<BimatrixGame> table;  // bimatrix kind
  std::optional<PDParams> params;     // pd and ewl kinds
  double gamma = 0.0;                 // ewl kind
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  // The payoff table; pd and ewl kinds induce the symmetric 2x2 layout.
  BimatrixGame bimatrix() const;
  // Focal payoff matrix. Rejects bimatrix tables whose column payoffs are
  // not the transpose of the row payoffs.
  SymmetricGame symmetric() const;
  // Engine configuration; rejects kinds other than ewl.
  ewl::EWLConfig ewl_config() const;
};

// Parse failure with position information. Syntax errors are malformed
// input (unknown keys, bad literals); semantic errors are well-formed input
// with invalid content (wrong kind requirements, bad parameter ranges).
class SpecParseError : public std::runtime_error {
 public:
  SpecParseError(bool semantic, int line, int col, const std::string& message);

  bool semantic() const { return semantic_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  bool semantic_;
  int line_;
  int col_;
};

// Throws SpecParseError on malformed or invalid input.
GameSpecFile parse_game_spec(std::string_view text);

// "pi", "pi/<number>", or a plain float. Throws std::invalid_argument on
// anything else.
double parse_number_or_pi(std::string_view token);

}  // namespace qgt::cli
