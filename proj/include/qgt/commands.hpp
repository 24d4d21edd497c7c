#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgt/classical.hpp"
#include "qgt/evolutionary.hpp"
#include "qgt/ewl.hpp"
#include "qgt/gamespec.hpp"

namespace qgt::cli {

// Raised for malformed command lines; the driver maps it to exit code 1.
// Well-formed input with invalid values raises std::invalid_argument or
// std::domain_error instead, which map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  double tol = kDefaultTol;
  ewl::GridResolution grid{64, 64};
  bool json = false;
};

// Strategy token: C, D, Q, or "<theta>,<phi>" (pi shorthand allowed).
ewl::StrategyAngles parse_strategy_token(const std::string& token);
// Comma-separated weight list, e.g. "0.5,0.5".
MixedStrategy parse_weights(const std::string& csv);
// "N" or "NxM" points per grid axis.
ewl::GridResolution parse_grid(const std::string& token);

struct NashRequest {
  std::optional<std::string> row_strategy;
  std::optional<std::string> col_strategy;
};

struct EssRequest {
  std::string candidate;                 // weight list
  std::vector<std::string> challengers;  // optional explicit weight lists
};

struct PayoffRequest {
  std::optional<std::string> row;  // weights (classical) or token (ewl)
  std::optional<std::string> col;
};

struct SweepRequest {
  std::string opponent;          // strategy token
  std::size_t gamma_steps = 0;   // 0 = keep the spec's gamma fixed
};

struct InvadeRequest {
  std::string incumbent;               // "D" or "Q"
  std::optional<std::string> mutant;   // absent = sweep the grid
};

struct ReplicateRequest {
  std::optional<std::string> start;  // weight list; absent = uniform
  double step_size = 0.01;
  std::size_t steps = 5000;
};

// Pure Nash report for classical kinds; quantum equilibrium certificate
// for kind ewl (both strategies required).
void cmd_nash(const GameSpecFile& spec, const NashRequest& req,
              const CommonOptions& opt, std::ostream& out);

// Evolutionary stability of the candidate against explicit challengers or
// a simplex grid. Classical kinds only.
void cmd_ess(const GameSpecFile& spec, const EssRequest& req,
             const CommonOptions& opt, std::ostream& out);

// Expected payoffs of one profile (classical kinds) or one strategy pair
// (kind ewl).
void cmd_payoff(const GameSpecFile& spec, const PayoffRequest& req,
                const CommonOptions& opt, std::ostream& out);

// CSV payoff sweep over the strategy grid against a fixed opponent. Kind
// ewl only. Columns theta,phi,p_row,p_col, preceded by gamma when
// gamma_steps > 0; rows in row-major grid order, 12 significant digits.
void cmd_sweep(const GameSpecFile& spec, const SweepRequest& req,
               const CommonOptions& opt, std::ostream& out);

// Invasion analysis against the defect or q_hat incumbent. Kind ewl with
// payoffs (3, 0, 5, 1) at maximal entanglement only.
void cmd_invade(const GameSpecFile& spec, const InvadeRequest& req,
                const CommonOptions& opt, std::ostream& out);

// Replicator trajectory as CSV (time,share_0,...); a one-line final-state
// summary goes to err. Classical kinds only.
void cmd_replicate(const GameSpecFile& spec, const ReplicateRequest& req,
                   const CommonOptions& opt, std::ostream& out,
                   std::ostream& err);

// Full command-line driver. Returns 0 on success, 1 on usage or parse
// errors, 2 on semantic or validation errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qgt::cli
