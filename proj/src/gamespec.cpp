#include "qgt/gamespec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

namespace qgt::cli {
namespace {

struct Field {
  std::string value;
  int line = 0;
  int col = 0;  // column of the value
};

[[noreturn]] void fail_syntax(int line, int col, const std::string& msg) {
  throw SpecParseError(false, line, col, msg);
}

[[noreturn]] void fail_semantic(int line, int col, const std::string& msg) {
  throw SpecParseError(true, line, col, msg);
}

std::string_view trim(std::string_view s, std::size_t* leading = nullptr) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (leading) *leading = b;
  return s.substr(b, e - b);
}

double parse_double(std::string_view token, int line, int col) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    fail_syntax(line, col, "'" + std::string(token) + "' is not a number");
  }
  if (!std::isfinite(v)) {
    fail_syntax(line, col, "'" + std::string(token) + "' is not finite");
  }
  return v;
}

double parse_value_number(const Field& f) {
  // accept the pi shorthand everywhere a number is expected
  try {
    return parse_number_or_pi(f.value);
  } catch (const std::invalid_argument&) {
    fail_syntax(f.line, f.col, "'" + f.value + "' is not a number");
  }
}

std::size_t parse_value_count(const Field& f) {
  std::size_t v = 0;
  const char* begin = f.value.data();
  const char* end = begin + f.value.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    fail_syntax(f.line, f.col, "'" + f.value + "' is not a count");
  }
  return v;
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

// "(a,b) (c,d) ..." into payoff pairs.
std::vector<PayoffPair> parse_pairs(const Field& f) {
  std::vector<PayoffPair> out;
  const std::string& s = f.value;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    const int col = f.col + static_cast<int>(i);
    if (s[i] != '(') {
      fail_syntax(f.line, col, "expected '(' to open a payoff pair");
    }
    const std::size_t close = s.find(')', i);
    if (close == std::string::npos) {
      fail_syntax(f.line, col, "payoff pair is missing ')'");
    }
    const std::string_view inner(s.data() + i + 1, close - i - 1);
    const std::size_t comma = inner.find(',');
    if (comma == std::string_view::npos) {
      fail_syntax(f.line, col, "payoff pair needs two comma-separated values");
    }
    std::size_t lead = 0;
    const std::string_view a = trim(inner.substr(0, comma), &lead);
    const int acol = col + 1 + static_cast<int>(lead);
    const std::string_view b = trim(inner.substr(comma + 1), &lead);
    const int bcol = col + 1 + static_cast<int>(comma) + 1 +
                     static_cast<int>(lead);
    out.push_back(
        {parse_double(a, f.line, acol), parse_double(b, f.line, bcol)});
    i = close + 1;
  }
  if (out.empty()) {
    fail_syntax(f.line, f.col, "expected at least one payoff pair");
  }
  return out;
}

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

SpecParseError::SpecParseError(bool semantic, int line, int col,
                               const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + message),
      semantic_(semantic),
      line_(line),
      col_(col) {}

double parse_number_or_pi(std::string_view token) {
  const std::string_view t = trim(token);
  if (t == "pi") return std::numbers::pi;
  if (t.starts_with("pi/")) {
    const std::string_view denom = t.substr(3);
    double d = 0.0;
    const auto res = std::from_chars(denom.data(), denom.data() + denom.size(), d);
    if (res.ec != std::errc() || res.ptr != denom.data() + denom.size() ||
        d == 0.0) {
      throw std::invalid_argument("'" + std::string(token) +
                                  "' is not a number");
    }
    return std::numbers::pi / d;
  }
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw std::invalid_argument("'" + std::string(token) +
                                "' is not a number");
  }
  if (!std::isfinite(v)) {
    throw std::invalid_argument("'" + std::string(token) + "' is not finite");
  }
  return v;
}

GameSpecFile parse_game_spec(std::string_view text) {
  std::map<std::string, Field> fields;
  std::map<std::size_t, Field> row_fields;
  int row_line = 0;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t lead = 0;
    const std::string_view body = trim(line, &lead);
    if (body.empty()) continue;

    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      fail_syntax(line_no, static_cast<int>(lead) + 1,
                  "expected 'key = value'");
    }
    const std::string key{trim(body.substr(0, eq))};
    std::size_t vlead = 0;
    const std::string value{trim(body.substr(eq + 1), &vlead)};
    const int vcol = static_cast<int>(lead + eq + 1 + vlead) + 1;
    if (key.empty()) {
      fail_syntax(line_no, static_cast<int>(lead) + 1, "missing key");
    }
    if (value.empty()) {
      fail_syntax(line_no, vcol, "missing value for '" + key + "'");
    }
    const Field field{value, line_no, vcol};

    const auto tokens = split_tokens(key);
    if (tokens.size() == 2 && tokens[0] == "row") {
      std::size_t idx = 0;
      const auto res = std::from_chars(
          tokens[1].data(), tokens[1].data() + tokens[1].size(), idx);
      if (res.ec != std::errc() ||
          res.ptr != tokens[1].data() + tokens[1].size()) {
        fail_syntax(line_no, static_cast<int>(lead) + 1,
                    "'" + tokens[1] + "' is not a row index");
      }
      if (!row_fields.emplace(idx, field).second) {
        fail_syntax(line_no, static_cast<int>(lead) + 1,
                    "duplicate row " + tokens[1]);
      }
      if (row_line == 0) row_line = line_no;
      continue;
    }
    if (tokens.size() == 1 &&
        (key == "kind" || key == "r" || key == "s" || key == "t" ||
         key == "u" || key == "gamma" || key == "rows" || key == "cols" ||
         key == "labels_row" || key == "labels_col")) {
      if (!fields.emplace(key, field).second) {
        fail_syntax(line_no, static_cast<int>(lead) + 1,
                    "duplicate key '" + key + "'");
      }
      continue;
    }
    fail_syntax(line_no, static_cast<int>(lead) + 1,
                "unknown key '" + key + "'");
  }

  const auto kind_it = fields.find("kind");
  if (kind_it == fields.end()) {
    fail_syntax(1, 1, "missing 'kind' header (bimatrix, pd, or ewl)");
  }
  const Field& kind_field = kind_it->second;

  GameSpecFile out;
  if (kind_field.value == "bimatrix") {
    out.kind = GameSpecFile::Kind::Bimatrix;
  } else if (kind_field.value == "pd") {
    out.kind = GameSpecFile::Kind::PD;
  } else if (kind_field.value == "ewl") {
    out.kind = GameSpecFile::Kind::EWL;
  } else {
    fail_syntax(kind_field.line, kind_field.col,
                "unknown kind '" + kind_field.value +
                    "' (expected bimatrix, pd, or ewl)");
  }

  const auto forbid = [&](const char* key, const char* why) {
    const auto it = fields.find(key);
    if (it != fields.end()) {
      fail_semantic(it->second.line, it->second.col,
                    std::string("'") + key + "' " + why);
    }
  };
  const auto need_number = [&](const char* key) {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      fail_semantic(kind_field.line, kind_field.col,
                    "kind " + kind_field.value + " requires key '" + key +
                        "'");
    }
    return parse_value_number(it->second);
  };

  if (out.kind == GameSpecFile::Kind::Bimatrix) {
    forbid("r", "is only valid for kinds pd and ewl");
    forbid("s", "is only valid for kinds pd and ewl");
    forbid("t", "is only valid for kinds pd and ewl");
    forbid("u", "is only valid for kinds pd and ewl");
    forbid("gamma", "is only valid for kind ewl");
    const auto rows_it = fields.find("rows");
    const auto cols_it = fields.find("cols");
    if (rows_it == fields.end() || cols_it == fields.end()) {
      fail_semantic(kind_field.line, kind_field.col,
                    "kind bimatrix requires 'rows' and 'cols'");
    }
    const std::size_t rows = parse_value_count(rows_it->second);
    const std::size_t cols = parse_value_count(cols_it->second);
    if (rows == 0 || cols == 0) {
      fail_semantic(rows_it->second.line, rows_it->second.col,
                    "rows and cols must be at least 1");
    }
    std::vector<PayoffPair> entries;
    entries.reserve(rows * cols);
    for (const auto& [idx, field] : row_fields) {
      if (idx >= rows) {
        fail_semantic(field.line, 1,
                      "row " + std::to_string(idx) + " out of range (rows = " +
                          std::to_string(rows) + ")");
      }
    }
    for (std::size_t i = 0; i < rows; ++i) {
      const auto it = row_fields.find(i);
      if (it == row_fields.end()) {
        fail_semantic(kind_field.line, kind_field.col,
                      "missing 'row " + std::to_string(i) + "'");
      }
      const auto pairs = parse_pairs(it->second);
      if (pairs.size() != cols) {
        fail_semantic(it->second.line, it->second.col,
                      "row " + std::to_string(i) + " has " +
                          std::to_string(pairs.size()) + " pairs, expected " +
                          std::to_string(cols));
      }
      entries.insert(entries.end(), pairs.begin(), pairs.end());
    }
    out.table = BimatrixGame(rows, cols, std::move(entries));
    const auto parse_labels = [&](const char* key, std::size_t want,
                                  const char* axis) {
      const auto it = fields.find(key);
      if (it == fields.end()) return index_labels(want);
      auto labels = split_tokens(it->second.value);
      if (labels.size() != want) {
        fail_semantic(it->second.line, it->second.col,
                      std::string(key) + " has " +
                          std::to_string(labels.size()) + " entries, but " +
                          axis + " is " + std::to_string(want));
      }
      return labels;
    };
    out.row_labels = parse_labels("labels_row", rows, "rows");
    out.col_labels = parse_labels("labels_col", cols, "cols");
    return out;
  }

  // pd and ewl kinds
  forbid("rows", "is only valid for kind bimatrix");
  forbid("cols", "is only valid for kind bimatrix");
  forbid("labels_row", "is only valid for kind bimatrix");
  forbid("labels_col", "is only valid for kind bimatrix");
  if (!row_fields.empty()) {
    fail_semantic(row_line, 1, "'row' entries are only valid for kind bimatrix");
  }
  PDParams params;
  params.reward = need_number("r");
  params.sucker = need_number("s");
  params.temptation = need_number("t");
  params.punishment = need_number("u");
  out.params = params;
  out.row_labels = {"C", "D"};
  out.col_labels = {"C", "D"};

  if (out.kind == GameSpecFile::Kind::PD) {
    forbid("gamma", "is only valid for kind ewl");
    if (!is_prisoners_dilemma(params)) {
      fail_semantic(kind_field.line, kind_field.col,
                    "payoffs do not satisfy the strict chain "
                    "s < u < r < t required for kind pd");
    }
    return out;
  }

  out.gamma = std::numbers::pi / 2.0;
  const auto gamma_it = fields.find("gamma");
  if (gamma_it != fields.end()) {
    out.gamma = parse_value_number(gamma_it->second);
    if (!(out.gamma >= 0.0 && out.gamma <= std::numbers::pi / 2.0)) {
      fail_semantic(gamma_it->second.line, gamma_it->second.col,
                    "gamma " + gamma_it->second.value +
                        " outside [0, pi/2]");
    }
  }
  return out;
}

BimatrixGame GameSpecFile::bimatrix() const {
  if (kind == Kind::Bimatrix) return *table;
  return BimatrixGame::from_dilemma(*params);
}

SymmetricGame GameSpecFile::symmetric() const {
  if (kind != Kind::Bimatrix) return SymmetricGame::from_dilemma(*params);
  const BimatrixGame& g = *table;
  if (g.rows() != g.cols()) {
    throw std::invalid_argument("pairwise contest needs a square table");
  }
  std::vector<double> m;
  m.reserve(g.rows() * g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (g.at(i, j).row != g.at(j, i).col) {
        throw std::invalid_argument(
            "table is not symmetric: column payoffs must be the transpose "
            "of row payoffs");
      }
      m.push_back(g.at(i, j).row);
    }
  }
  return SymmetricGame(g.rows(), std::move(m));
}

ewl::EWLConfig GameSpecFile::ewl_config() const {
  if (kind != Kind::EWL) {
    throw std::invalid_argument("this command needs a spec with kind ewl");
  }
  return ewl::EWLConfig(*params, gamma);
}

}  // namespace qgt::cli
