#include "qgt/evolutionary.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qgt::evo {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kSelfTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool on_defect_ray(const ewl::StrategyAngles& a) {
  return kPi - a.theta <= kSelfTol;
}

bool is_q_hat(const ewl::StrategyAngles& a) {
  return a.theta <= kSelfTol && std::abs(a.phi - kHalfPi) <= kSelfTol;
}

bool same_angles(const ewl::StrategyAngles& a, const ewl::StrategyAngles& b) {
  return std::abs(a.theta - b.theta) <= kSelfTol &&
         std::abs(a.phi - b.phi) <= kSelfTol;
}

// Closed forms below are specific to payoffs (3, 0, 5, 1) at maximal
// entanglement.
double defect_vs_mutant(const ewl::StrategyAngles& a) {
  const double c = std::cos(a.theta / 2.0), s = std::sin(a.theta / 2.0);
  const double cp = std::cos(a.phi);
  return 5.0 * cp * cp * c * c + s * s;
}

double mutant_vs_defect(const ewl::StrategyAngles& a) {
  const double c = std::cos(a.theta / 2.0), s = std::sin(a.theta / 2.0);
  const double sp = std::sin(a.phi);
  return 5.0 * sp * sp * c * c + s * s;
}

double mutant_vs_mutant(const ewl::StrategyAngles& a) {
  const double c2 = std::cos(a.theta / 2.0) * std::cos(a.theta / 2.0);
  const double s2 = std::sin(a.theta / 2.0) * std::sin(a.theta / 2.0);
  const double mutual = std::cos(2.0 * a.phi) * c2;
  const double skew = std::sin(a.phi) - std::cos(a.phi);
  const double lone = std::sin(2.0 * a.phi) * c2 + s2;
  return 3.0 * mutual * mutual + 5.0 * c2 * s2 * skew * skew + lone * lone;
}

double mutant_vs_q(const ewl::StrategyAngles& a) {
  const double c2 = std::cos(a.theta / 2.0) * std::cos(a.theta / 2.0);
  const double cp = std::cos(a.phi);
  return (3.0 - 2.0 * cp * cp) * c2;
}

double q_vs_mutant(const ewl::StrategyAngles& a) {
  const double s = std::sin(a.theta / 2.0);
  return mutant_vs_q(a) + 5.0 * s * s;
}

void require_reference_params(const PDParams& p) {
  if (p.reward != 3.0 || p.sucker != 0.0 || p.temptation != 5.0 ||
      p.punishment != 1.0) {
    throw std::invalid_argument(
        "closed forms are tabulated for payoffs (3, 0, 5, 1) only; "
        "use the state-vector engine for other parameters");
  }
}

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

std::vector<double> post_entry_mix(const MixedStrategy& x,
                                   const MixedStrategy& y, double eps) {
  std::vector<double> mix(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mix[i] = (1.0 - eps) * x[i] + eps * y[i];
  }
  return mix;
}

}  // namespace

ContestStrategy ContestStrategy::cooperate() {
  return {true, ewl::StrategyAngles::cooperate()};
}

ContestStrategy ContestStrategy::defect() {
  return {true, ewl::StrategyAngles::defect()};
}

ContestStrategy ContestStrategy::quantum(const ewl::StrategyAngles& a) {
  return {false, a};
}

double contest_payoff_closed_form(const ContestStrategy& focal,
                                  const ContestStrategy& opponent,
                                  const PDParams& p) {
  require_reference_params(p);
  const ewl::StrategyAngles f = ewl::canonical(focal.angles());
  const ewl::StrategyAngles o = ewl::canonical(opponent.angles());
  if (on_defect_ray(f) && on_defect_ray(o)) return 1.0;
  if (on_defect_ray(f)) return defect_vs_mutant(o);
  if (on_defect_ray(o)) return mutant_vs_defect(f);
  if (is_q_hat(f) && is_q_hat(o)) return 3.0;
  if (is_q_hat(o)) return mutant_vs_q(f);
  if (is_q_hat(f)) return q_vs_mutant(o);
  if (same_angles(f, o)) return mutant_vs_mutant(f);
  throw std::invalid_argument(
      "no closed form for a contest between two distinct generic quantum "
      "strategies; use the state-vector engine");
}

InvasionVerdict classical_incumbent_invasion(
    const ewl::StrategyAngles& mutant) {
  InvasionVerdict v;
  v.threshold = std::asin(1.0 / std::sqrt(5.0));
  const ewl::StrategyAngles m = ewl::canonical(mutant);
  if (on_defect_ray(m)) {
    v.incumbent_stable = true;  // mutant coincides with the incumbent
    v.margin = kInf;
    return v;
  }
  v.margin = 1.0 - mutant_vs_defect(m);
  v.incumbent_stable = v.margin > 0.0;
  if (!v.incumbent_stable) v.witness = mutant;
  return v;
}

InvasionVerdict classical_incumbent_certificate(ewl::GridResolution grid) {
  InvasionVerdict v;
  v.threshold = std::asin(1.0 / std::sqrt(5.0));
  v.margin = kInf;
  std::optional<ewl::StrategyAngles> worst;
  for (double theta : ewl::linspace(0.0, kPi, grid.theta)) {
    for (double phi : ewl::linspace(0.0, kHalfPi, grid.phi)) {
      const ewl::StrategyAngles m(theta, phi);
      if (on_defect_ray(m)) continue;
      const InvasionVerdict single = classical_incumbent_invasion(m);
      if (single.margin < v.margin) {
        v.margin = single.margin;
        worst = m;
      }
    }
  }
  v.incumbent_stable = v.margin > 0.0;
  if (!v.incumbent_stable) v.witness = worst;
  return v;
}

InvasionVerdict quantum_incumbent_certificate(
    std::span<const ewl::StrategyAngles> mutants, double tol) {
  InvasionVerdict v;
  v.margin = kInf;
  std::optional<ewl::StrategyAngles> worst;
  for (const ewl::StrategyAngles& m : mutants) {
    if (std::hypot(m.theta, m.phi - kHalfPi) <= tol) continue;  // self
    const double edge = 3.0 - mutant_vs_q(m);
    if (edge < v.margin) {
      v.margin = edge;
      worst = m;
    }
  }
  v.incumbent_stable = v.margin > 0.0;
  if (!v.incumbent_stable) v.witness = worst;
  return v;
}

InvasionVerdict quantum_incumbent_certificate(ewl::GridResolution grid,
                                              double tol) {
  std::vector<ewl::StrategyAngles> mutants;
  mutants.reserve(grid.theta * grid.phi);
  for (double theta : ewl::linspace(0.0, kPi, grid.theta)) {
    for (double phi : ewl::linspace(0.0, kHalfPi, grid.phi)) {
      mutants.emplace_back(theta, phi);
    }
  }
  return quantum_incumbent_certificate(mutants, tol);
}

PopulationState::PopulationState(std::vector<double> shares_in, double time_in)
    : shares(std::move(shares_in)), time(time_in) {
  if (shares.empty()) {
    throw std::invalid_argument("population needs at least one type");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (!(shares[i] >= 0.0)) {
      throw std::invalid_argument("share " + std::to_string(i) +
                                  " is negative");
    }
    sum += shares[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("shares sum to " + std::to_string(sum) +
                                ", expected 1");
  }
  if (!std::isfinite(time)) {
    throw std::invalid_argument("time must be finite");
  }
}

double population_payoff(const SymmetricGame& game, const MixedStrategy& x,
                         const MixedStrategy& y, double eps) {
  if (x.size() != game.size() || y.size() != game.size()) {
    throw std::invalid_argument("strategy size does not match contest size");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::domain_error("mutant share " + std::to_string(eps) +
                            " outside [0,1]");
  }
  return bilinear(game, x.weights(), post_entry_mix(x, y, eps));
}

ReplicatorTrajectory simulate_replicator(const SymmetricGame& game,
                                         const PopulationState& start,
                                         double step_size, std::size_t steps) {
  if (start.shares.size() != game.size()) {
    throw std::invalid_argument("population size does not match contest size");
  }
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw std::invalid_argument("step size must be positive and finite");
  }

  const std::size_t n = game.size();
  const auto derivative = [&](const std::vector<double>& x) {
    std::vector<double> fitness(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) fitness[i] += game.at(i, j) * x[j];
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[i] * fitness[i];
    std::vector<double> dx(n);
    for (std::size_t i = 0; i < n; ++i) dx[i] = x[i] * (fitness[i] - mean);
    return dx;
  };

  ReplicatorTrajectory traj{{start}, step_size, game};
  traj.states.reserve(steps + 1);
  std::vector<double> x = start.shares;
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto k1 = derivative(x);
    std::vector<double> probe(n);
    for (std::size_t i = 0; i < n; ++i) {
      probe[i] = x[i] + 0.5 * step_size * k1[i];
    }
    const auto k2 = derivative(probe);
    for (std::size_t i = 0; i < n; ++i) {
      probe[i] = x[i] + 0.5 * step_size * k2[i];
    }
    const auto k3 = derivative(probe);
    for (std::size_t i = 0; i < n; ++i) {
      probe[i] = x[i] + step_size * k3[i];
    }
    const auto k4 = derivative(probe);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step_size / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] < -1e-9) {
        throw std::domain_error(
            "step " + std::to_string(k) + " drove share " + std::to_string(i) +
            " to " + std::to_string(x[i]) + "; reduce the step size");
      }
      if (x[i] < 0.0) x[i] = 0.0;
      sum += x[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::domain_error("step " + std::to_string(k) +
                              " drifted off the simplex (share sum " +
                              std::to_string(sum) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) x[i] /= sum;
    traj.states.emplace_back(x, start.time + static_cast<double>(k) * step_size);
  }
  return traj;
}

double invasion_barrier_numeric(const SymmetricGame& game,
                                const MixedStrategy& x, const MixedStrategy& y,
                                std::size_t samples) {
  if (samples < 2) {
    throw std::invalid_argument("need at least 2 samples");
  }
  if (x.size() != game.size() || y.size() != game.size()) {
    throw std::invalid_argument("strategy size does not match contest size");
  }
  double distinct = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    distinct = std::max(distinct, std::abs(x[i] - y[i]));
  }
  if (distinct <= 1e-12) {
    throw std::invalid_argument("invasion barrier needs two distinct strategies");
  }

  const auto edge = [&](double eps) {
    const auto mix = post_entry_mix(x, y, eps);
    return bilinear(game, x.weights(), mix) - bilinear(game, y.weights(), mix);
  };

  // A strictly negative edge at eps = 0 means the mutant gains ground
  // immediately; no sample spacing can recover a positive prefix.
  if (edge(0.0) < 0.0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  bool bracketed = false;
  for (std::size_t k = 1; k <= samples; ++k) {
    const double eps = static_cast<double>(k) / static_cast<double>(samples);
    if (edge(eps) > 0.0) {
      lo = eps;
    } else {
      hi = eps;
      bracketed = true;
      break;
    }
  }
  if (!bracketed) return 1.0;
  for (int iter = 0; iter < 64; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (edge(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace qgt::evo
