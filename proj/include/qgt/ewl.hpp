#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "qgt/classical.hpp"

// Two-qubit quantization of a symmetric 2x2 game in the
// Eisert-Wilkens-Lewenstein scheme. The joint state starts as |11> (both
// qubits in the first-strategy basis state), is entangled by J(gamma), each
// player applies a local unitary drawn from a restricted two-parameter
// family, J is undone, and the computational-basis probabilities weight the
// payoff table. The first tensor slot belongs to the row player throughout.
namespace qgt::ewl {

using complexd = std::complex<double>;

// Unitarity is required within this Frobenius-norm tolerance wherever a
// matrix enters the protocol.
inline constexpr double kUnitaryTol = 1e-12;
// Norm drift allowed for the final state.
inline constexpr double kStateNormTol = 1e-10;

// Parameters of the strategy family
//   U(theta, phi) = [ e^{i phi} cos(theta/2)      sin(theta/2)        ]
//                   [ -sin(theta/2)               e^{-i phi} cos(theta/2) ]
// with theta in [0, pi] and phi in [0, pi/2]. Construction rejects
// out-of-range angles.
struct StrategyAngles {
  StrategyAngles(double theta_in, double phi_in);

  static StrategyAngles cooperate();  // (0, 0), the identity
  static StrategyAngles defect();     // (pi, 0), the flip
  static StrategyAngles q_hat();      // (0, pi/2), the fully quantum move

  double theta;
  double phi;
};

// theta = pi makes phi physically irrelevant; this maps the whole ray to
// (pi, 0) so strategy comparisons are well defined. Ray membership is
// decided within 1e-9.
StrategyAngles canonical(const StrategyAngles& a);

struct Unitary2 {
  std::array<complexd, 4> m{};  // row-major

  complexd& operator()(std::size_t r, std::size_t c) { return m[2 * r + c]; }
  const complexd& operator()(std::size_t r, std::size_t c) const {
    return m[2 * r + c];
  }
  static Unitary2 identity();
};

struct Unitary4 {
  std::array<complexd, 16> m{};  // row-major

  complexd& operator()(std::size_t r, std::size_t c) { return m[4 * r + c]; }
  const complexd& operator()(std::size_t r, std::size_t c) const {
    return m[4 * r + c];
  }
  static Unitary4 identity();
};

Unitary2 adjoint(const Unitary2& u);
Unitary4 adjoint(const Unitary4& u);
Unitary2 operator*(const Unitary2& a, const Unitary2& b);
Unitary4 operator*(const Unitary4& a, const Unitary4& b);
Unitary4 kron(const Unitary2& a, const Unitary2& b);

// Frobenius norm of U^H U - I.
double unitarity_error(const Unitary2& u);
double unitarity_error(const Unitary4& u);

// Joint state of the two strategy qubits in the computational basis,
// ordered |11>, |12>, |21>, |22> with the row player's qubit first.
struct TwoQubitState {
  std::array<complexd, 4> amplitudes{};

  double norm() const;
  std::array<double, 4> probabilities() const;
};

// Payoff parameters plus entangling angle gamma in [0, pi/2]; gamma = 0 is
// the classical limit, gamma = pi/2 maximal entanglement.
class EWLConfig {
 public:
  EWLConfig(const PDParams& params, double gamma);

  const PDParams& params() const { return params_; }
  double gamma() const { return gamma_; }

 private:
  PDParams params_;
  double gamma_;
};

// The strategy family member for the given angles; always unitary with
// determinant 1.
Unitary2 strategy_unitary(const StrategyAngles& a);

// J(gamma) = cos(gamma/2) I + i sin(gamma/2) (F x F), where F is the flip
// unitary [[0,1],[-1,0]]. (F x F) squares to the identity, which makes this
// the exponential exp(i gamma (F x F) / 2). Rejects gamma outside
// [0, pi/2].
Unitary4 entangler(double gamma);

// J^H (u_row x u_col) J |11>. Rejects non-unitary inputs; the result is
// checked to stay normalized within kStateNormTol.
TwoQubitState final_state(const EWLConfig& cfg, const Unitary2& u_row,
                          const Unitary2& u_col);

// Expected payoffs: the row player receives
//   reward*P11 + sucker*P12 + temptation*P21 + punishment*P22
// and the column player the same with the off-diagonal weights swapped,
// where Pab is the probability of basis state |ab>.
PayoffPair payoffs(const EWLConfig& cfg, const Unitary2& u_row,
                   const Unitary2& u_col);
PayoffPair payoffs(const EWLConfig& cfg, const StrategyAngles& row,
                   const StrategyAngles& col);

// Probability weight on the first pure strategy when gamma = 0: cos^2
// (theta/2). At zero entanglement the protocol reduces to the classical
// mixed extension with this weight, independent of phi.
double classical_reduction(const StrategyAngles& a);

// Uniform grid with both endpoints pinned exactly.
std::vector<double> linspace(double lo, double hi, std::size_t count);

// Points per axis for sweeps over the (theta, phi) rectangle.
struct GridResolution {
  std::size_t theta = 64;
  std::size_t phi = 64;
};

// Outcome of checking a strategy pair against every unilateral grid
// deviation. worst_violation is the largest deviation gain found (negative
// when no deviation helps); the witness fields describe where it occurred.
struct NashCertificate {
  bool holds = false;
  double worst_violation = 0.0;
  int violating_player = -1;  // 0 row, 1 col, -1 none checked
  std::optional<StrategyAngles> witness;
  double witness_payoff = 0.0;
  PayoffPair equilibrium{};
};

// Sweeps the angle grid for each player separately; the pair holds iff no
// unilateral deviation gains more than tol. Grid needs at least 2 points
// per axis.
NashCertificate is_quantum_nash(const EWLConfig& cfg, const StrategyAngles& row,
                                const StrategyAngles& col, GridResolution grid,
                                double tol = kDefaultTol);

// Result of scanning all grid strategy pairs for a joint improvement.
struct ParetoCertificate {
  bool holds = false;
  std::optional<StrategyAngles> witness_row;
  std::optional<StrategyAngles> witness_col;
  PayoffPair witness_payoffs{};
  PayoffPair base{};
};

// Holds iff no pair of grid strategies gives both players at least their
// current payoff with at least one exceeding it by more than tol.
ParetoCertificate is_pareto_optimal(const EWLConfig& cfg,
                                    const StrategyAngles& row,
                                    const StrategyAngles& col,
                                    GridResolution grid,
                                    double tol = kDefaultTol);

}  // namespace qgt::ewl
