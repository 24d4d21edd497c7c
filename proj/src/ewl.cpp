#include "qgt/ewl.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qgt::ewl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kRayTol = 1e-9;

// Exact flip unitary; strategy_unitary(defect()) matches it only up to
// rounding in cos(pi/2), so the entangler uses this form directly.
const Unitary2 kFlip{{complexd(0.0), complexd(1.0), complexd(-1.0),
                      complexd(0.0)}};

std::array<complexd, 4> apply(const Unitary4& u,
                              const std::array<complexd, 4>& v) {
  std::array<complexd, 4> out{};
  for (std::size_t r = 0; r < 4; ++r) {
    complexd acc = 0.0;
    for (std::size_t c = 0; c < 4; ++c) acc += u(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

void require_angle(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi)) {
    throw std::domain_error(std::string(what) + " = " + std::to_string(v) +
                            " outside [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  }
}

void require_unitary(const Unitary2& u, const char* what) {
  const double err = unitarity_error(u);
  if (!(err <= kUnitaryTol)) {
    throw std::invalid_argument(std::string(what) +
                                " is not unitary (deviation " +
                                std::to_string(err) + ")");
  }
}

// Shared state for repeated payoff evaluations at a fixed gamma.
class Engine {
 public:
  explicit Engine(const EWLConfig& cfg)
      : cfg_(cfg),
        disentangle_(adjoint(entangler(cfg.gamma()))),
        entangled_(apply(entangler(cfg.gamma()), {complexd(1.0), complexd(0.0),
                                                  complexd(0.0),
                                                  complexd(0.0)})) {}

  TwoQubitState run(const Unitary2& u_row, const Unitary2& u_col) const {
    TwoQubitState out;
    out.amplitudes = apply(disentangle_, apply(kron(u_row, u_col), entangled_));
    return out;
  }

  PayoffPair pay(const Unitary2& u_row, const Unitary2& u_col) const {
    const auto p = run(u_row, u_col).probabilities();
    const PDParams& t = cfg_.params();
    return {t.reward * p[0] + t.sucker * p[1] + t.temptation * p[2] +
                t.punishment * p[3],
            t.reward * p[0] + t.temptation * p[1] + t.sucker * p[2] +
                t.punishment * p[3]};
  }

 private:
  EWLConfig cfg_;
  Unitary4 disentangle_;
  std::array<complexd, 4> entangled_;
};

}  // namespace

StrategyAngles::StrategyAngles(double theta_in, double phi_in)
    : theta(theta_in), phi(phi_in) {
  require_angle(theta, 0.0, kPi, "theta");
  require_angle(phi, 0.0, kHalfPi, "phi");
}

StrategyAngles StrategyAngles::cooperate() { return {0.0, 0.0}; }
StrategyAngles StrategyAngles::defect() { return {kPi, 0.0}; }
StrategyAngles StrategyAngles::q_hat() { return {0.0, kHalfPi}; }

StrategyAngles canonical(const StrategyAngles& a) {
  if (kPi - a.theta <= kRayTol) return StrategyAngles::defect();
  return a;
}

Unitary2 Unitary2::identity() {
  return {{complexd(1.0), complexd(0.0), complexd(0.0), complexd(1.0)}};
}

Unitary4 Unitary4::identity() {
  Unitary4 u;
  for (std::size_t i = 0; i < 4; ++i) u(i, i) = 1.0;
  return u;
}

Unitary2 adjoint(const Unitary2& u) {
  Unitary2 out;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) out(r, c) = std::conj(u(c, r));
  }
  return out;
}

Unitary4 adjoint(const Unitary4& u) {
  Unitary4 out;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) out(r, c) = std::conj(u(c, r));
  }
  return out;
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
  Unitary2 out;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      complexd acc = 0.0;
      for (std::size_t k = 0; k < 2; ++k) acc += a(r, k) * b(k, c);
      out(r, c) = acc;
    }
  }
  return out;
}

Unitary4 operator*(const Unitary4& a, const Unitary4& b) {
  Unitary4 out;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      complexd acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k) acc += a(r, k) * b(k, c);
      out(r, c) = acc;
    }
  }
  return out;
}

Unitary4 kron(const Unitary2& a, const Unitary2& b) {
  Unitary4 out;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 2; ++l) {
          out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
        }
      }
    }
  }
  return out;
}

double unitarity_error(const Unitary2& u) {
  const Unitary2 g = adjoint(u) * u;
  double acc = 0.0;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const complexd d = g(r, c) - (r == c ? complexd(1.0) : complexd(0.0));
      acc += std::norm(d);
    }
  }
  return std::sqrt(acc);
}

double unitarity_error(const Unitary4& u) {
  const Unitary4 g = adjoint(u) * u;
  double acc = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const complexd d = g(r, c) - (r == c ? complexd(1.0) : complexd(0.0));
      acc += std::norm(d);
    }
  }
  return std::sqrt(acc);
}

double TwoQubitState::norm() const {
  double acc = 0.0;
  for (const complexd& a : amplitudes) acc += std::norm(a);
  return std::sqrt(acc);
}

std::array<double, 4> TwoQubitState::probabilities() const {
  return {std::norm(amplitudes[0]), std::norm(amplitudes[1]),
          std::norm(amplitudes[2]), std::norm(amplitudes[3])};
}

EWLConfig::EWLConfig(const PDParams& params, double gamma)
    : params_(params), gamma_(gamma) {
  for (double v : {params.reward, params.sucker, params.temptation,
                   params.punishment}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("payoff parameters must be finite");
    }
  }
  require_angle(gamma_, 0.0, kHalfPi, "gamma");
}

Unitary2 strategy_unitary(const StrategyAngles& a) {
  const double c = std::cos(a.theta / 2.0);
  const double s = std::sin(a.theta / 2.0);
  const complexd phase = std::polar(1.0, a.phi);
  return {{phase * c, complexd(s), complexd(-s), std::conj(phase) * c}};
}

Unitary4 entangler(double gamma) {
  require_angle(gamma, 0.0, kHalfPi, "gamma");
  const double c = std::cos(gamma / 2.0);
  const complexd is(0.0, std::sin(gamma / 2.0));
  const Unitary4 ff = kron(kFlip, kFlip);
  Unitary4 out;
  for (std::size_t i = 0; i < 16; ++i) out.m[i] = is * ff.m[i];
  for (std::size_t i = 0; i < 4; ++i) out(i, i) += c;
  return out;
}

TwoQubitState final_state(const EWLConfig& cfg, const Unitary2& u_row,
                          const Unitary2& u_col) {
  require_unitary(u_row, "row strategy");
  require_unitary(u_col, "column strategy");
  const TwoQubitState out = Engine(cfg).run(u_row, u_col);
  if (std::abs(out.norm() - 1.0) > kStateNormTol) {
    throw std::logic_error("final state lost normalization");
  }
  return out;
}

PayoffPair payoffs(const EWLConfig& cfg, const Unitary2& u_row,
                   const Unitary2& u_col) {
  const auto p = final_state(cfg, u_row, u_col).probabilities();
  const PDParams& t = cfg.params();
  return {t.reward * p[0] + t.sucker * p[1] + t.temptation * p[2] +
              t.punishment * p[3],
          t.reward * p[0] + t.temptation * p[1] + t.sucker * p[2] +
              t.punishment * p[3]};
}

PayoffPair payoffs(const EWLConfig& cfg, const StrategyAngles& row,
                   const StrategyAngles& col) {
  return payoffs(cfg, strategy_unitary(row), strategy_unitary(col));
}

double classical_reduction(const StrategyAngles& a) {
  const double c = std::cos(a.theta / 2.0);
  return c * c;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) {
    throw std::invalid_argument("grid needs at least one point");
  }
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    out.push_back(lo + static_cast<double>(i) * step);
  }
  out.push_back(hi);  // pin the endpoint exactly
  return out;
}

NashCertificate is_quantum_nash(const EWLConfig& cfg, const StrategyAngles& row,
                                const StrategyAngles& col, GridResolution grid,
                                double tol) {
  if (grid.theta < 2 || grid.phi < 2) {
    throw std::invalid_argument("deviation grid needs at least 2 points per axis");
  }
  const Unitary2 u_row = strategy_unitary(row);
  const Unitary2 u_col = strategy_unitary(col);
  require_unitary(u_row, "row strategy");
  require_unitary(u_col, "column strategy");
  const Engine engine(cfg);

  NashCertificate cert;
  cert.equilibrium = engine.pay(u_row, u_col);

  const auto thetas = linspace(0.0, kPi, grid.theta);
  const auto phis = linspace(0.0, kHalfPi, grid.phi);
  double worst = -std::numeric_limits<double>::infinity();
  for (int player = 0; player < 2; ++player) {
    const double base =
        player == 0 ? cert.equilibrium.row : cert.equilibrium.col;
    for (double theta : thetas) {
      for (double phi : phis) {
        const StrategyAngles dev(theta, phi);
        const Unitary2 u_dev = strategy_unitary(dev);
        const PayoffPair p = player == 0 ? engine.pay(u_dev, u_col)
                                         : engine.pay(u_row, u_dev);
        const double gained = (player == 0 ? p.row : p.col) - base;
        if (gained > worst) {
          worst = gained;
          cert.violating_player = player;
          cert.witness = dev;
          cert.witness_payoff = player == 0 ? p.row : p.col;
        }
      }
    }
  }
  cert.worst_violation = worst;
  cert.holds = worst <= tol;
  if (cert.holds) cert.violating_player = -1;
  return cert;
}

ParetoCertificate is_pareto_optimal(const EWLConfig& cfg,
                                    const StrategyAngles& row,
                                    const StrategyAngles& col,
                                    GridResolution grid, double tol) {
  if (grid.theta < 2 || grid.phi < 2) {
    throw std::invalid_argument("strategy grid needs at least 2 points per axis");
  }
  const Unitary2 u_row = strategy_unitary(row);
  const Unitary2 u_col = strategy_unitary(col);
  require_unitary(u_row, "row strategy");
  require_unitary(u_col, "column strategy");
  const Engine engine(cfg);

  ParetoCertificate cert;
  cert.base = engine.pay(u_row, u_col);

  const auto thetas = linspace(0.0, kPi, grid.theta);
  const auto phis = linspace(0.0, kHalfPi, grid.phi);
  std::vector<StrategyAngles> points;
  std::vector<Unitary2> units;
  points.reserve(thetas.size() * phis.size());
  units.reserve(points.capacity());
  for (double theta : thetas) {
    for (double phi : phis) {
      points.emplace_back(theta, phi);
      units.push_back(strategy_unitary(points.back()));
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      const PayoffPair p = engine.pay(units[i], units[j]);
      const bool weakly_up = p.row >= cert.base.row && p.col >= cert.base.col;
      const bool strictly_up =
          p.row > cert.base.row + tol || p.col > cert.base.col + tol;
      if (weakly_up && strictly_up) {
        cert.holds = false;
        cert.witness_row = points[i];
        cert.witness_col = points[j];
        cert.witness_payoffs = p;
        return cert;
      }
    }
  }
  cert.holds = true;
  return cert;
}

}  // namespace qgt::ewl
