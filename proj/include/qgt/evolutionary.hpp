#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qgt/classical.hpp"
#include "qgt/ewl.hpp"

// Evolutionary contests between classical and quantum strategies in the
// maximally entangled game with payoffs (3, 0, 5, 1), plus replicator
// dynamics for arbitrary pairwise contests.
namespace qgt::evo {

// A strategy fielded in pairwise contests: either one of the two classical
// moves or an arbitrary member of the quantum strategy family.
class ContestStrategy {
 public:
  static ContestStrategy cooperate();
  static ContestStrategy defect();
  static ContestStrategy quantum(const ewl::StrategyAngles& a);

  bool is_classical() const { return classical_; }
  // Angle representation; cooperate maps to (0,0), defect to (pi,0).
  const ewl::StrategyAngles& angles() const { return angles_; }

 private:
  ContestStrategy(bool classical, const ewl::StrategyAngles& a)
      : classical_(classical), angles_(a) {}

  bool classical_;
  ewl::StrategyAngles angles_;
};

// Closed-form focal payoff for contests at maximal entanglement with
// payoffs (3, 0, 5, 1). Covers the pairings
//   defect vs defect, defect vs U, U vs defect, U vs U (same angles),
//   q_hat vs q_hat, U vs q_hat, q_hat vs U.
// Any other parameter set or pairing is rejected; route those through the
// state-vector engine instead. Strategies on the theta = pi ray are folded
// onto defect first.
double contest_payoff_closed_form(const ContestStrategy& focal,
                                  const ContestStrategy& opponent,
                                  const PDParams& p);

// Outcome of an invasion analysis. margin is the worst payoff gap
// protecting the incumbent (infinite when no admissible mutant was tested);
// a non-stable verdict always carries the offending mutant as witness.
struct InvasionVerdict {
  bool incumbent_stable = false;
  double margin = 0.0;
  std::optional<ewl::StrategyAngles> witness;
  std::optional<double> threshold;
};

// Can a single quantum mutant invade the classical defect incumbent at
// maximal entanglement with payoffs (3, 0, 5, 1)? Stable iff the incumbent
// keeps a positive edge against the mutant, which happens exactly when
// sin^2(phi) < 1/5; the flip angle arcsin(1/sqrt(5)) is reported as
// threshold. Mutants on the theta = pi ray coincide with the incumbent and
// are excluded as self.
InvasionVerdict classical_incumbent_invasion(const ewl::StrategyAngles& mutant);

// Grid aggregate of classical_incumbent_invasion: stable iff every
// non-self grid mutant fails to invade; margin is the minimum edge, the
// witness the worst mutant when invaded.
InvasionVerdict classical_incumbent_certificate(ewl::GridResolution grid);

// Stability certificate for the q_hat incumbent: sweeps the angle grid,
// excluding points within tol of q_hat itself, and requires a strictly
// positive incumbent edge everywhere. Records the minimum edge and, when
// invaded, the worst mutant.
InvasionVerdict quantum_incumbent_certificate(ewl::GridResolution grid,
                                              double tol = kDefaultTol);
InvasionVerdict quantum_incumbent_certificate(
    std::span<const ewl::StrategyAngles> mutants, double tol = kDefaultTol);

// Population shares on the simplex at a point in time. Shares must be
// non-negative and sum to 1 within 1e-9.
struct PopulationState {
  PopulationState(std::vector<double> shares_in, double time_in);

  std::vector<double> shares;
  double time = 0.0;
};

struct ReplicatorTrajectory {
  std::vector<PopulationState> states;
  double step_size = 0.0;
  SymmetricGame game;
};

// Focal payoff of x against the post-entry population (1-eps)x + eps*y.
// eps must lie in [0,1].
double population_payoff(const SymmetricGame& game, const MixedStrategy& x,
                         const MixedStrategy& y, double eps);

// Integrates dx_i/dt = x_i ((Mx)_i - x^T M x) with classic fourth-order
// Runge-Kutta steps of the given size. Every emitted state is renormalized;
// a step that drifts off the simplex by more than 1e-9 or drives a share
// negative beyond that tolerance is rejected with the offending index.
ReplicatorTrajectory simulate_replicator(const SymmetricGame& game,
                                         const PopulationState& start,
                                         double step_size, std::size_t steps);

// Invasion barrier found by scanning eps in (0, 1] at the given sample
// count and bisecting the first bracket where the incumbent's edge stops
// being positive. Agrees with the affine closed form within 1/samples.
double invasion_barrier_numeric(const SymmetricGame& game,
                                const MixedStrategy& x, const MixedStrategy& y,
                                std::size_t samples);

}  // namespace qgt::evo
