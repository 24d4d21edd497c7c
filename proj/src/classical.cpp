#include "qgt/classical.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qgt {
namespace {

constexpr double kWeightSumTol = 1e-12;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

// x^T M y on raw vectors; callers guarantee matching dimensions.
double bilinear(const SymmetricGame& g, std::span<const double> x,
                std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double rowsum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      rowsum += g.at(i, j) * y[j];
    }
    acc += x[i] * rowsum;
  }
  return acc;
}

double max_abs_diff(const MixedStrategy& a, const MixedStrategy& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

}  // namespace

bool is_prisoners_dilemma(const PDParams& p) {
  require_finite(p.reward, "reward");
  require_finite(p.sucker, "sucker");
  require_finite(p.temptation, "temptation");
  require_finite(p.punishment, "punishment");
  return p.sucker < p.punishment && p.punishment < p.reward &&
         p.reward < p.temptation;
}

MixedStrategy::MixedStrategy(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw std::invalid_argument("mixed strategy needs at least one weight");
  }
  double sum = 0.0;
  for (double w : weights_) {
    require_finite(w, "strategy weight");
    if (w < 0.0 || w > 1.0) {
      throw std::invalid_argument("strategy weight " + std::to_string(w) +
                                  " outside [0,1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("strategy weights sum to " +
                                std::to_string(sum) + ", expected 1");
  }
}

MixedStrategy MixedStrategy::pure(std::size_t index, std::size_t count) {
  if (index >= count) {
    throw std::invalid_argument("pure strategy index out of range");
  }
  std::vector<double> w(count, 0.0);
  w[index] = 1.0;
  return MixedStrategy(std::move(w));
}

MixedStrategy MixedStrategy::uniform(std::size_t count) {
  if (count == 0) {
    throw std::invalid_argument("uniform strategy needs at least one entry");
  }
  return MixedStrategy(
      std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

BimatrixGame::BimatrixGame(std::size_t rows, std::size_t cols,
                           std::vector<PayoffPair> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("game needs at least one strategy per player");
  }
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument(
        "payoff table has " + std::to_string(entries_.size()) +
        " entries, expected " + std::to_string(rows_ * cols_));
  }
  for (const PayoffPair& e : entries_) {
    require_finite(e.row, "payoff");
    require_finite(e.col, "payoff");
  }
}

BimatrixGame BimatrixGame::from_dilemma(const PDParams& p) {
  return BimatrixGame(2, 2,
                      {{p.reward, p.reward},
                       {p.sucker, p.temptation},
                       {p.temptation, p.sucker},
                       {p.punishment, p.punishment}});
}

BimatrixGame BimatrixGame::from_symmetric(const SymmetricGame& g) {
  std::vector<PayoffPair> entries;
  entries.reserve(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      entries.push_back({g.at(i, j), g.at(j, i)});
    }
  }
  return BimatrixGame(g.size(), g.size(), std::move(entries));
}

SymmetricGame::SymmetricGame(std::size_t size, std::vector<double> row_major)
    : size_(size), entries_(std::move(row_major)) {
  if (size_ == 0) {
    throw std::invalid_argument("contest needs at least one strategy");
  }
  if (entries_.size() != size_ * size_) {
    throw std::invalid_argument("payoff matrix must be square");
  }
  for (double v : entries_) {
    require_finite(v, "payoff");
  }
}

SymmetricGame::SymmetricGame(const std::vector<std::vector<double>>& m)
    : SymmetricGame(m.size(), [&m] {
        std::vector<double> flat;
        for (const auto& row : m) {
          if (row.size() != m.size()) {
            throw std::invalid_argument("payoff matrix must be square");
          }
          flat.insert(flat.end(), row.begin(), row.end());
        }
        return flat;
      }()) {}

SymmetricGame SymmetricGame::from_dilemma(const PDParams& p) {
  return SymmetricGame(2, {p.reward, p.sucker, p.temptation, p.punishment});
}

double SymmetricGame::contest_payoff(const MixedStrategy& x,
                                     const MixedStrategy& y) const {
  if (x.size() != size_ || y.size() != size_) {
    throw std::invalid_argument(
        "strategy size (" + std::to_string(x.size()) + ", " +
        std::to_string(y.size()) + ") does not match contest size " +
        std::to_string(size_));
  }
  return bilinear(*this, x.weights(), y.weights());
}

PayoffPair expected_payoff(const BimatrixGame& game,
                           const StrategyProfile& profile) {
  if (profile.row.size() != game.rows() || profile.col.size() != game.cols()) {
    throw std::invalid_argument(
        "profile dimensions (" + std::to_string(profile.row.size()) + ", " +
        std::to_string(profile.col.size()) + ") do not match game (" +
        std::to_string(game.rows()) + ", " + std::to_string(game.cols()) +
        ")");
  }
  PayoffPair acc;
  for (std::size_t i = 0; i < game.rows(); ++i) {
    if (profile.row[i] == 0.0) continue;
    for (std::size_t j = 0; j < game.cols(); ++j) {
      const double w = profile.row[i] * profile.col[j];
      acc.row += w * game.at(i, j).row;
      acc.col += w * game.at(i, j).col;
    }
  }
  return acc;
}

bool is_nash(const BimatrixGame& game, const StrategyProfile& profile,
             double tol) {
  const PayoffPair base = expected_payoff(game, profile);
  for (std::size_t i = 0; i < game.rows(); ++i) {
    double dev = 0.0;
    for (std::size_t j = 0; j < game.cols(); ++j) {
      dev += profile.col[j] * game.at(i, j).row;
    }
    if (dev > base.row + tol) return false;
  }
  for (std::size_t j = 0; j < game.cols(); ++j) {
    double dev = 0.0;
    for (std::size_t i = 0; i < game.rows(); ++i) {
      dev += profile.row[i] * game.at(i, j).col;
    }
    if (dev > base.col + tol) return false;
  }
  return true;
}

std::vector<PureProfile> enumerate_pure_nash(const BimatrixGame& game) {
  std::vector<PureProfile> found;
  for (std::size_t i = 0; i < game.rows(); ++i) {
    for (std::size_t j = 0; j < game.cols(); ++j) {
      const StrategyProfile profile{MixedStrategy::pure(i, game.rows()),
                                    MixedStrategy::pure(j, game.cols())};
      if (is_nash(game, profile, 0.0)) {
        found.push_back({i, j});
      }
    }
  }
  return found;
}

bool is_ess(const SymmetricGame& game, const MixedStrategy& x,
            std::span<const MixedStrategy> challengers, double tol) {
  if (x.size() != game.size()) {
    throw std::invalid_argument("candidate size does not match contest size");
  }
  for (const MixedStrategy& y : challengers) {
    if (y.size() != game.size()) {
      throw std::invalid_argument(
          "challenger size does not match contest size");
    }
    if (max_abs_diff(x, y) <= tol) {
      throw std::invalid_argument(
          "challenger set contains the candidate itself");
    }
  }
  const double xx = game.contest_payoff(x, x);
  for (const MixedStrategy& y : challengers) {
    const double yx = game.contest_payoff(y, x);
    if (xx > yx + tol) continue;
    if (std::abs(xx - yx) <= tol) {
      if (game.contest_payoff(x, y) > game.contest_payoff(y, y) + tol) {
        continue;
      }
    }
    return false;
  }
  return true;
}

double invasion_barrier(const SymmetricGame& game, const MixedStrategy& x,
                        const MixedStrategy& y) {
  if (x.size() != game.size() || y.size() != game.size()) {
    throw std::invalid_argument("strategy size does not match contest size");
  }
  if (max_abs_diff(x, y) <= 1e-12) {
    throw std::invalid_argument("invasion barrier needs two distinct strategies");
  }
  // P(x, mix) - P(y, mix) with mix = (1-eps)x + eps*y equals a + b*eps.
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  std::vector<double> e(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) e[i] = y[i] - x[i];
  const double a = bilinear(game, d, x.weights());
  const double b = bilinear(game, d, e);
  if (a < 0.0) return 0.0;
  if (a == 0.0) return b > 0.0 ? 1.0 : 0.0;
  if (b >= 0.0) return 1.0;
  return std::min(1.0, a / -b);
}

}  // namespace qgt
