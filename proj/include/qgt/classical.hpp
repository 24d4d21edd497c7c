#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace qgt {

// Default absolute tolerance for payoff comparisons. Callers may override
// per call.
inline constexpr double kDefaultTol = 1e-9;

struct PayoffPair {
  double row = 0.0;
  double col = 0.0;
};

// Payoff parameters of the symmetric 2x2 dilemma: reward (mutual
// cooperation), sucker (lone cooperator), temptation (lone defector),
// punishment (mutual defection).
struct PDParams {
  double reward = 0.0;
  double sucker = 0.0;
  double temptation = 0.0;
  double punishment = 0.0;
};

// True iff the strict chain sucker < punishment < reward < temptation
// holds. Rejects non-finite parameters.
bool is_prisoners_dilemma(const PDParams& p);

// Probability distribution over a player's pure strategies.
// Weights must lie in [0,1] and sum to 1 within 1e-12.
class MixedStrategy {
 public:
  explicit MixedStrategy(std::vector<double> weights);

  static MixedStrategy pure(std::size_t index, std::size_t count);
  static MixedStrategy uniform(std::size_t count);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// One mixed strategy per player.
struct StrategyProfile {
  MixedStrategy row;
  MixedStrategy col;
};

// Two-player game as an m x n table of payoff pairs, row player indexing
// rows.
class BimatrixGame {
 public:
  // entries in row-major order; all payoffs must be finite.
  BimatrixGame(std::size_t rows, std::size_t cols,
               std::vector<PayoffPair> entries);

  // Symmetric 2x2 dilemma laid out with strategy order (cooperate, defect).
  static BimatrixGame from_dilemma(const PDParams& p);
  // The pair (M, M^T) induced by a pairwise-contest payoff matrix.
  static BimatrixGame from_symmetric(const class SymmetricGame& g);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const PayoffPair& at(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<PayoffPair> entries_;
};

// Symmetric pairwise contest: M holds the focal player's payoffs, the
// opponent's table is the transpose. M must be square and finite.
class SymmetricGame {
 public:
  SymmetricGame(std::size_t size, std::vector<double> row_major);
  explicit SymmetricGame(const std::vector<std::vector<double>>& m);

  // Focal payoff matrix of the dilemma, strategy order (cooperate, defect).
  static SymmetricGame from_dilemma(const PDParams& p);

  std::size_t size() const { return size_; }
  double at(std::size_t r, std::size_t c) const {
    return entries_[r * size_ + c];
  }

  // P(x, y): expected payoff of a focal x-player against a y-player.
  double contest_payoff(const MixedStrategy& x, const MixedStrategy& y) const;

 private:
  std::size_t size_;
  std::vector<double> entries_;
};

struct PureProfile {
  std::size_t row = 0;
  std::size_t col = 0;
  auto operator<=>(const PureProfile&) const = default;
};

// Bilinear expectation of both players' payoffs under the product
// distribution induced by the profile. Rejects dimension mismatches.
PayoffPair expected_payoff(const BimatrixGame& game,
                           const StrategyProfile& profile);

// True iff no unilateral deviation improves either player's payoff by more
// than tol. Pure deviations suffice against a fixed opponent mix.
bool is_nash(const BimatrixGame& game, const StrategyProfile& profile,
             double tol = kDefaultTol);

// All pure profiles that are Nash equilibria (zero tolerance), in row-major
// order.
std::vector<PureProfile> enumerate_pure_nash(const BimatrixGame& game);

// Evolutionary stability of x against a finite challenger set: for every
// challenger y, either P(x,x) > P(y,x) + tol, or the two tie within tol and
// P(x,y) > P(y,y) + tol. The challenger set must not contain x itself.
bool is_ess(const SymmetricGame& game, const MixedStrategy& x,
            std::span<const MixedStrategy> challengers,
            double tol = kDefaultTol);

// Largest eps0 in [0,1] such that x strictly outperforms y against the
// mixed population (1-eps)x + eps*y for every eps in (0, eps0). The payoff
// difference is affine in eps, so the barrier is 0, 1, or the root of that
// affine function, clamped to [0,1]. Rejects x = y.
double invasion_barrier(const SymmetricGame& game, const MixedStrategy& x,
                        const MixedStrategy& y);

}  // namespace qgt
