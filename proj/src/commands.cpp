#include "qgt/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qgt::cli {
namespace {

using nlohmann::json;

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const PayoffPair& p) {
  return "(" + fmt(p.row) + ", " + fmt(p.col) + ")";
}

std::string fmt(const ewl::StrategyAngles& a) {
  return "(" + fmt(a.theta) + ", " + fmt(a.phi) + ")";
}

std::string fmt(const MixedStrategy& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += fmt(x[i]);
  }
  return out + ")";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (true) {
    const std::size_t e = s.find(sep, b);
    out.push_back(s.substr(b, e == std::string::npos ? e : e - b));
    if (e == std::string::npos) break;
    b = e + 1;
  }
  return out;
}

double parse_number_token(const std::string& token, const char* what) {
  try {
    return parse_number_or_pi(token);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

// All weight vectors (i_1/denom, ..., i_k/denom) with the i summing to
// denom, in lexicographic order.
void simplex_points(std::size_t parts, std::size_t left, std::size_t denom,
                    std::vector<double>& acc,
                    std::vector<MixedStrategy>& out) {
  if (parts == 1) {
    acc.push_back(static_cast<double>(left) / static_cast<double>(denom));
    out.push_back(MixedStrategy(acc));
    acc.pop_back();
    return;
  }
  for (std::size_t i = 0; i <= left; ++i) {
    acc.push_back(static_cast<double>(i) / static_cast<double>(denom));
    simplex_points(parts - 1, left - i, denom, acc, out);
    acc.pop_back();
  }
}

std::vector<MixedStrategy> simplex_grid(std::size_t types,
                                        std::size_t resolution) {
  std::vector<MixedStrategy> out;
  std::vector<double> acc;
  simplex_points(types, resolution, resolution, acc, out);
  return out;
}

double max_abs_diff(const MixedStrategy& a, const MixedStrategy& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

void require_classical_kind(const GameSpecFile& spec, const char* verb) {
  if (spec.kind == GameSpecFile::Kind::EWL) {
    throw std::invalid_argument(std::string(verb) +
                                " needs a classical game (kind bimatrix or "
                                "pd)");
  }
}

void require_reference_quantum_game(const GameSpecFile& spec) {
  if (spec.kind != GameSpecFile::Kind::EWL) {
    throw std::invalid_argument("invade needs a spec with kind ewl");
  }
  const PDParams& p = *spec.params;
  if (p.reward != 3.0 || p.sucker != 0.0 || p.temptation != 5.0 ||
      p.punishment != 1.0 || std::abs(spec.gamma - kHalfPi) > 1e-12) {
    throw std::invalid_argument(
        "invasion analysis is tabulated for payoffs (3, 0, 5, 1) at "
        "gamma = pi/2");
  }
}

}  // namespace

ewl::StrategyAngles parse_strategy_token(const std::string& token) {
  if (token == "C") return ewl::StrategyAngles::cooperate();
  if (token == "D") return ewl::StrategyAngles::defect();
  if (token == "Q") return ewl::StrategyAngles::q_hat();
  const auto parts = split(token, ',');
  if (parts.size() != 2) {
    throw UsageError("strategy '" + token +
                     "' must be C, D, Q, or \"theta,phi\"");
  }
  return {parse_number_token(parts[0], "strategy"),
          parse_number_token(parts[1], "strategy")};
}

MixedStrategy parse_weights(const std::string& csv) {
  const auto parts = split(csv, ',');
  std::vector<double> w;
  w.reserve(parts.size());
  for (const auto& p : parts) w.push_back(parse_number_token(p, "weights"));
  return MixedStrategy(std::move(w));
}

ewl::GridResolution parse_grid(const std::string& token) {
  const auto parts = split(token, 'x');
  if (parts.empty() || parts.size() > 2) {
    throw UsageError("grid '" + token + "' must be N or NxM");
  }
  const auto parse_count = [&](const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw UsageError("grid '" + token + "' must be N or NxM");
    }
    return v;
  };
  const std::size_t a = parse_count(parts[0]);
  const std::size_t b = parts.size() == 2 ? parse_count(parts[1]) : a;
  return {a, b};
}

void cmd_nash(const GameSpecFile& spec, const NashRequest& req,
              const CommonOptions& opt, std::ostream& out) {
  if (spec.kind != GameSpecFile::Kind::EWL) {
    if (req.row_strategy || req.col_strategy) {
      throw UsageError("--row-strategy/--col-strategy are only valid for "
                       "kind ewl");
    }
    const BimatrixGame game = spec.bimatrix();
    const auto profiles = enumerate_pure_nash(game);
    if (opt.json) {
      json arr = json::array();
      for (const auto& p : profiles) {
        arr.push_back({{"row", p.row},
                       {"col", p.col},
                       {"row_label", spec.row_labels[p.row]},
                       {"col_label", spec.col_labels[p.col]},
                       {"payoff_row", game.at(p.row, p.col).row},
                       {"payoff_col", game.at(p.row, p.col).col}});
      }
      out << json{{"pure_nash", arr}}.dump() << '\n';
      return;
    }
    out << "pure Nash equilibria: " << profiles.size() << '\n';
    for (const auto& p : profiles) {
      out << "  (" << spec.row_labels[p.row] << ", " << spec.col_labels[p.col]
          << ")  payoffs = " << fmt(game.at(p.row, p.col)) << '\n';
    }
    return;
  }

  if (!req.row_strategy || !req.col_strategy) {
    throw UsageError("kind ewl needs --row-strategy and --col-strategy");
  }
  const ewl::StrategyAngles row = parse_strategy_token(*req.row_strategy);
  const ewl::StrategyAngles col = parse_strategy_token(*req.col_strategy);
  const ewl::EWLConfig cfg = spec.ewl_config();
  const ewl::NashCertificate cert =
      ewl::is_quantum_nash(cfg, row, col, opt.grid, opt.tol);
  if (opt.json) {
    json doc{{"holds", cert.holds},
             {"payoff_row", cert.equilibrium.row},
             {"payoff_col", cert.equilibrium.col},
             {"worst_gain", cert.worst_violation}};
    if (!cert.holds) {
      doc["witness"] = {{"player", cert.violating_player == 0 ? "row" : "col"},
                        {"theta", cert.witness->theta},
                        {"phi", cert.witness->phi},
                        {"payoff", cert.witness_payoff}};
    }
    out << doc.dump() << '\n';
    return;
  }
  out << "quantum equilibrium certificate for " << fmt(row) << " vs "
      << fmt(col) << '\n';
  out << "gamma = " << fmt(cfg.gamma()) << ", grid = " << opt.grid.theta << "x"
      << opt.grid.phi << ", tol = " << fmt(opt.tol) << '\n';
  out << "payoffs = " << fmt(cert.equilibrium) << '\n';
  if (cert.holds) {
    out << "holds: yes (worst deviation gain = " << fmt(cert.worst_violation)
        << ")\n";
  } else {
    out << "holds: no\n";
    out << "worst deviation: " << (cert.violating_player == 0 ? "row" : "col")
        << " player to " << fmt(*cert.witness) << " for payoff "
        << fmt(cert.witness_payoff) << " (gain "
        << fmt(cert.worst_violation) << ")\n";
  }
}

void cmd_ess(const GameSpecFile& spec, const EssRequest& req,
             const CommonOptions& opt, std::ostream& out) {
  require_classical_kind(spec, "ess");
  const SymmetricGame game = spec.symmetric();
  const MixedStrategy candidate = parse_weights(req.candidate);
  std::vector<MixedStrategy> challengers;
  bool from_grid = false;
  if (!req.challengers.empty()) {
    for (const auto& c : req.challengers) challengers.push_back(parse_weights(c));
  } else {
    from_grid = true;
    if (opt.grid.theta < 1) {
      throw std::invalid_argument("challenger grid needs at least 1 step");
    }
    for (auto& y : simplex_grid(game.size(), opt.grid.theta)) {
      if (max_abs_diff(candidate, y) > opt.tol) challengers.push_back(std::move(y));
    }
  }

  bool stable = true;
  std::optional<MixedStrategy> counterexample;
  for (const auto& y : challengers) {
    const std::span<const MixedStrategy> single(&y, 1);
    if (!is_ess(game, candidate, single, opt.tol)) {
      stable = false;
      counterexample = y;
      break;
    }
  }

  if (opt.json) {
    json doc{{"stable", stable},
             {"candidate", candidate.weights()},
             {"challengers", challengers.size()},
             {"from_grid", from_grid}};
    if (counterexample) doc["counterexample"] = counterexample->weights();
    out << doc.dump() << '\n';
    return;
  }
  out << "candidate " << fmt(candidate) << " vs " << challengers.size()
      << (from_grid ? " grid challengers: " : " challengers: ")
      << (stable ? "evolutionarily stable" : "not evolutionarily stable")
      << '\n';
  if (counterexample) {
    out << "counterexample challenger = " << fmt(*counterexample) << '\n';
  }
}

void cmd_payoff(const GameSpecFile& spec, const PayoffRequest& req,
                const CommonOptions& opt, std::ostream& out) {
  if (!req.row || !req.col) {
    throw UsageError("payoff needs --row and --col");
  }
  PayoffPair pay{};
  if (spec.kind == GameSpecFile::Kind::EWL) {
    pay = ewl::payoffs(spec.ewl_config(), parse_strategy_token(*req.row),
                       parse_strategy_token(*req.col));
  } else {
    const BimatrixGame game = spec.bimatrix();
    pay = expected_payoff(
        game, {parse_weights(*req.row), parse_weights(*req.col)});
  }
  if (opt.json) {
    out << json{{"payoff_row", pay.row}, {"payoff_col", pay.col}}.dump()
        << '\n';
    return;
  }
  out << "payoffs = " << fmt(pay) << '\n';
}

void cmd_sweep(const GameSpecFile& spec, const SweepRequest& req,
               const CommonOptions& opt, std::ostream& out) {
  if (spec.kind != GameSpecFile::Kind::EWL) {
    throw std::invalid_argument("sweep needs a spec with kind ewl");
  }
  if (opt.grid.theta < 2 || opt.grid.phi < 2) {
    throw std::invalid_argument("sweep needs at least 2 grid points per axis");
  }
  if (req.gamma_steps == 1) {
    throw std::invalid_argument("gamma sweep needs at least 2 steps");
  }
  const ewl::StrategyAngles opponent = parse_strategy_token(req.opponent);
  const bool sweep_gamma = req.gamma_steps > 0;
  const std::vector<double> gammas =
      sweep_gamma ? ewl::linspace(0.0, kHalfPi, req.gamma_steps)
                  : std::vector<double>{spec.gamma};
  const auto thetas = ewl::linspace(0.0, std::numbers::pi, opt.grid.theta);
  const auto phis = ewl::linspace(0.0, kHalfPi, opt.grid.phi);

  json rows = json::array();
  if (!opt.json) {
    out << (sweep_gamma ? "gamma,theta,phi,p_row,p_col"
                        : "theta,phi,p_row,p_col")
        << '\n';
  }
  for (double gamma : gammas) {
    const ewl::EWLConfig cfg(*spec.params, gamma);
    for (double theta : thetas) {
      for (double phi : phis) {
        const PayoffPair p =
            ewl::payoffs(cfg, ewl::StrategyAngles(theta, phi), opponent);
        if (opt.json) {
          json row{{"theta", theta},
                   {"phi", phi},
                   {"p_row", p.row},
                   {"p_col", p.col}};
          if (sweep_gamma) row["gamma"] = gamma;
          rows.push_back(std::move(row));
        } else {
          if (sweep_gamma) out << fmt(gamma) << ',';
          out << fmt(theta) << ',' << fmt(phi) << ',' << fmt(p.row) << ','
              << fmt(p.col) << '\n';
        }
      }
    }
  }
  if (opt.json) out << rows.dump() << '\n';
}

void cmd_invade(const GameSpecFile& spec, const InvadeRequest& req,
                const CommonOptions& opt, std::ostream& out) {
  require_reference_quantum_game(spec);
  const ewl::StrategyAngles incumbent = parse_strategy_token(req.incumbent);
  const bool against_defect =
      std::numbers::pi - incumbent.theta <= 1e-9;  // the defect ray
  const bool against_q = incumbent.theta <= 1e-9 &&
                         std::abs(incumbent.phi - kHalfPi) <= 1e-9;
  if (!against_defect && !against_q) {
    throw std::invalid_argument(
        "incumbent must be D or Q; other incumbents are not analyzed");
  }

  evo::InvasionVerdict verdict;
  std::string population;
  if (req.mutant) {
    const ewl::StrategyAngles mutant = parse_strategy_token(*req.mutant);
    population = "mutant " + fmt(mutant);
    if (against_defect) {
      verdict = evo::classical_incumbent_invasion(mutant);
    } else {
      const std::span<const ewl::StrategyAngles> single(&mutant, 1);
      verdict = evo::quantum_incumbent_certificate(single, opt.tol);
    }
  } else {
    population = std::to_string(opt.grid.theta) + "x" +
                 std::to_string(opt.grid.phi) + " mutant grid";
    verdict = against_defect
                  ? evo::classical_incumbent_certificate(opt.grid)
                  : evo::quantum_incumbent_certificate(opt.grid, opt.tol);
  }

  const bool self_only = std::isinf(verdict.margin);
  if (opt.json) {
    json doc{{"incumbent", against_defect ? "D" : "Q"},
             {"stable", verdict.incumbent_stable},
             {"self_excluded", self_only}};
    if (!self_only) doc["margin"] = verdict.margin;
    if (verdict.threshold) doc["threshold"] = *verdict.threshold;
    if (verdict.witness) {
      doc["witness"] = {{"theta", verdict.witness->theta},
                        {"phi", verdict.witness->phi}};
    }
    out << doc.dump() << '\n';
    return;
  }
  out << "incumbent " << (against_defect ? "D" : "Q") << " vs " << population
      << ": ";
  if (self_only) {
    out << "self-mutant excluded\n";
    return;
  }
  out << (verdict.incumbent_stable ? "stable" : "invaded") << '\n';
  out << "margin = " << fmt(verdict.margin) << '\n';
  if (verdict.threshold) {
    out << "threshold phi = " << fmt(*verdict.threshold) << '\n';
  }
  if (verdict.witness) {
    out << "witness mutant = " << fmt(*verdict.witness) << '\n';
  }
}

void cmd_replicate(const GameSpecFile& spec, const ReplicateRequest& req,
                   const CommonOptions& opt, std::ostream& out,
                   std::ostream& err) {
  require_classical_kind(spec, "replicate");
  const SymmetricGame game = spec.symmetric();
  const MixedStrategy start = req.start ? parse_weights(*req.start)
                                        : MixedStrategy::uniform(game.size());
  const evo::PopulationState x0(start.weights(), 0.0);
  const evo::ReplicatorTrajectory traj =
      evo::simulate_replicator(game, x0, req.step_size, req.steps);

  if (opt.json) {
    json states = json::array();
    for (const auto& s : traj.states) {
      states.push_back({{"time", s.time}, {"shares", s.shares}});
    }
    out << json{{"step_size", traj.step_size},
                {"steps", req.steps},
                {"trajectory", states}}
               .dump()
        << '\n';
  } else {
    out << "time";
    for (std::size_t i = 0; i < game.size(); ++i) out << ",share_" << i;
    out << '\n';
    for (const auto& s : traj.states) {
      out << fmt(s.time);
      for (double v : s.shares) out << ',' << fmt(v);
      out << '\n';
    }
  }

  const auto& last = traj.states.back();
  err << "final shares at time " << fmt(last.time) << ":";
  for (std::size_t i = 0; i < last.shares.size(); ++i) {
    err << ' ' << spec.row_labels[i] << " = " << fmt(last.shares[i]);
  }
  err << '\n';
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"classical and quantized 2x2 games: equilibria, stability, "
               "payoff sweeps"};
  app.name("qgt");

  CommonOptions opt;
  std::string grid_token = "64";
  std::string output = "-";
  app.add_option("--tol", opt.tol, "comparison tolerance")
      ->capture_default_str();
  app.add_option("--grid", grid_token, "grid points per axis, N or NxM")
      ->capture_default_str();
  app.add_option("--output", output, "output path, - for stdout")
      ->capture_default_str();
  app.add_flag("--json", opt.json, "emit JSON instead of text");
  app.require_subcommand(1);

  std::string spec_path;
  const auto add_spec = [&](CLI::App* sub) {
    sub->fallthrough();  // global flags may follow the subcommand
    sub->add_option("spec", spec_path, "game spec file")->required();
  };

  auto* nash = app.add_subcommand(
      "nash", "pure equilibria; quantum certificate for kind ewl");
  add_spec(nash);
  std::string nash_row, nash_col;
  auto* nash_row_opt = nash->add_option(
      "--row-strategy", nash_row, "row strategy (C, D, Q, or theta,phi)");
  auto* nash_col_opt =
      nash->add_option("--col-strategy", nash_col, "column strategy");

  auto* ess = app.add_subcommand(
      "ess", "evolutionary stability against challengers");
  add_spec(ess);
  EssRequest ess_req;
  ess->add_option("--candidate", ess_req.candidate, "candidate weights")
      ->required();
  ess->add_option("--challenger", ess_req.challengers,
                  "explicit challenger weights (repeatable); default is a "
                  "simplex grid");

  auto* payoff = app.add_subcommand("payoff", "expected payoffs of a profile");
  add_spec(payoff);
  std::string pay_row, pay_col;
  auto* pay_row_opt = payoff->add_option(
      "--row", pay_row, "row weights, or strategy token for kind ewl");
  auto* pay_col_opt = payoff->add_option("--col", pay_col, "column weights, "
                                         "or strategy token for kind ewl");

  auto* sweep = app.add_subcommand(
      "sweep", "CSV payoff sweep against a fixed opponent (kind ewl)");
  add_spec(sweep);
  SweepRequest sweep_req;
  sweep->add_option("--opponent", sweep_req.opponent, "fixed opponent token")
      ->required();
  sweep->add_option("--gamma-steps", sweep_req.gamma_steps,
                    "also sweep gamma over [0, pi/2] with this many steps");

  auto* invade = app.add_subcommand(
      "invade", "invasion analysis for the D or Q incumbent (kind ewl)");
  add_spec(invade);
  InvadeRequest invade_req;
  invade->add_option("--incumbent", invade_req.incumbent, "D or Q")
      ->required();
  std::string invade_mutant;
  auto* invade_mutant_opt = invade->add_option(
      "--mutant", invade_mutant, "single mutant token; default sweeps a grid");

  auto* replicate = app.add_subcommand(
      "replicate", "replicator dynamics trajectory as CSV");
  add_spec(replicate);
  ReplicateRequest repl_req;
  std::string repl_start;
  auto* repl_start_opt = replicate->add_option(
      "--start", repl_start, "initial shares; default uniform");
  replicate->add_option("--dt", repl_req.step_size, "integration step size")
      ->capture_default_str();
  replicate->add_option("--steps", repl_req.steps, "number of steps")
      ->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.size() == 1 ? subs[0]->help() : app.help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    opt.grid = parse_grid(grid_token);

    std::ifstream file(spec_path, std::ios::binary);
    if (!file) {
      throw UsageError("cannot open spec file '" + spec_path + "'");
    }
    std::ostringstream text;
    text << file.rdbuf();
    GameSpecFile spec;
    try {
      spec = parse_game_spec(text.str());
    } catch (const SpecParseError& e) {
      err << "error: " << spec_path << ": " << e.what() << '\n';
      return e.semantic() ? 2 : 1;
    }

    std::ofstream file_out;
    std::ostream* sink = &out;
    if (output != "-") {
      file_out.open(output, std::ios::binary);
      if (!file_out) {
        throw UsageError("cannot open output file '" + output + "'");
      }
      sink = &file_out;
    }

    if (nash->parsed()) {
      NashRequest req;
      if (nash_row_opt->count()) req.row_strategy = nash_row;
      if (nash_col_opt->count()) req.col_strategy = nash_col;
      cmd_nash(spec, req, opt, *sink);
    } else if (ess->parsed()) {
      cmd_ess(spec, ess_req, opt, *sink);
    } else if (payoff->parsed()) {
      PayoffRequest req;
      if (pay_row_opt->count()) req.row = pay_row;
      if (pay_col_opt->count()) req.col = pay_col;
      cmd_payoff(spec, req, opt, *sink);
    } else if (sweep->parsed()) {
      cmd_sweep(spec, sweep_req, opt, *sink);
    } else if (invade->parsed()) {
      if (invade_mutant_opt->count()) invade_req.mutant = invade_mutant;
      cmd_invade(spec, invade_req, opt, *sink);
    } else if (replicate->parsed()) {
      if (repl_start_opt->count()) repl_req.start = repl_start;
      cmd_replicate(spec, repl_req, opt, *sink, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace qgt::cli
