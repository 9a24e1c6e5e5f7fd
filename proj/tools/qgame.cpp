// qgame: command-line front end for the quantum game library.
//
//   qgame <play|sweep|dominance|entropy|solve-alphas|verify> [--config FILE]
//         [--out FILE] [--seed N] [--format json|csv]
//
// Exit codes: 0 success, 1 validation error, 2 runtime or numerical fault.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "qgame/analysis.hpp"
#include "qgame/config.hpp"
#include "qgame/error.hpp"
#include "qgame/protocol.hpp"
#include "qgame/verify.hpp"

namespace {

using namespace qgame;

struct Options {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string format;
};

ExperimentConfig load_config(const Options& opt) {
  if (opt.config_path.empty()) return parse_config("{}");
  std::ifstream in(opt.config_path);
  if (!in) throw ValidationError("cannot read config file '" + opt.config_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out_path);
  if (!out) throw std::runtime_error("cannot write output file '" + opt.out_path + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> labels_for(const ExperimentConfig& cfg, const std::vector<Strategy>& strategies) {
  std::vector<std::string> labels;
  for (const auto& s : strategies) {
    const auto* pure = std::get_if<ClassicalPure>(&s);
    if (pure && cfg.game.name() == "rsp" && pure->index >= 1 && pure->index <= 3) {
      labels.emplace_back(kRspLabels[pure->index - 1]);
    } else {
      labels.push_back(describe(s));
    }
  }
  return labels;
}

std::uint64_t seed_of(const Options& opt, const ExperimentConfig* cfg) {
  if (opt.seed) return *opt.seed;
  if (cfg && cfg->seed) return *cfg->seed;
  return kDefaultSeed;
}

const ComplexMatrix& single_unitary(const std::vector<WeightedUnitary>& plays, const char* who) {
  if (plays.size() != 1) {
    throw ValidationError(std::string("entropy of the final state needs a non-mixed strategy for ") + who);
  }
  return plays.front().unitary;
}

int run(const Options& opt) {
  const std::string format = opt.format.empty() ? (opt.command == "sweep" ? "csv" : "json") : opt.format;
  if (format != "json" && format != "csv") throw ValidationError("--format must be json or csv");
  if (format == "csv" && opt.command != "sweep") throw ValidationError("csv output is only available for sweep");

  if (opt.command == "verify") {
    const auto seed = seed_of(opt, nullptr);
    const auto report = verification_report(run_verification(seed), seed);
    emit(opt, dump(report));
    return report["passed"].get<bool>() ? 0 : 2;
  }

  const auto cfg = load_config(opt);

  if (opt.command == "play") {
    if (cfg.strategies.size() != 2) throw ValidationError("config field 'strategies': play needs exactly 2 strategies");
    emit(opt, dump(outcome_to_json(play(cfg.game, cfg.entangler, cfg.strategies[0], cfg.strategies[1]))));
    return 0;
  }

  if (opt.command == "dominance") {
    std::vector<Strategy> strategies = cfg.strategies;
    if (strategies.empty())
      for (std::size_t i = 1; i <= cfg.game.n(); ++i) strategies.emplace_back(ClassicalPure{i});
    const auto rel = dominance(cfg.game, cfg.entangler, strategies);
    emit(opt, dump(dominance_to_json(rel, has_cycle(rel), labels_for(cfg, strategies))));
    return 0;
  }

  if (opt.command == "entropy") {
    const std::size_t n = cfg.game.n();
    std::optional<StateVector> state;
    if (cfg.entropy_state == EntropyState::Initial) {
      state = entangled_initial_state(cfg.game, cfg.entangler);
    } else {
      if (cfg.strategies.size() != 2) throw ValidationError("config field 'strategies': final-state entropy needs 2 strategies");
      const auto pa = realize(cfg.strategies[0], n);
      const auto pb = realize(cfg.strategies[1], n);
      state = final_state(cfg.game, cfg.entangler, single_unitary(pa, "alice"), single_unitary(pb, "bob"));
    }
    const double e = entanglement_entropy(*state, n);
    emit(opt, dump(entropy_to_json(e, n, cfg.entropy_state == EntropyState::Initial ? "initial" : "final",
                                   cfg.entangler_name)));
    return 0;
  }

  if (opt.command == "solve-alphas") {
    std::vector<double> phases;
    std::optional<std::uint64_t> seed;
    if (cfg.solve.phases) {
      phases = *cfg.solve.phases;
    } else {
      seed = seed_of(opt, &cfg);
      std::mt19937_64 rng(*seed);
      std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
      for (std::size_t k = 0; k < cfg.solve.n; ++k) phases.push_back(u(rng));
    }
    emit(opt, dump(solve_alphas_to_json(solve_alphas(cfg.solve.n, phases), phases, seed)));
    return 0;
  }

  if (opt.command == "sweep") {
    if (cfg.strategies.size() != 2) throw ValidationError("config field 'strategies': sweep needs 2 base strategies");
    if (cfg.sweep_axes.empty()) throw ValidationError("config field 'sweep.axes': at least one axis is required");
    const auto result =
        payoff_sweep(cfg.game, cfg.entangler, SweepSpec{cfg.strategies[0], cfg.strategies[1], cfg.sweep_axes},
                     cfg.sweep_threads);
    if (format == "csv") {
      std::ostringstream os;
      write_sweep_csv(os, result);
      emit(opt, os.str());
    } else {
      json rows = json::array();
      for (const auto& r : result.records)
        rows.push_back({{"coordinates", r.coordinates}, {"alice_payoff", r.alice_payoff}, {"bob_payoff", r.bob_payoff}});
      emit(opt, dump({{"command", "sweep"}, {"axes", result.axis_names}, {"records", rows}}));
    }
    return 0;
  }

  throw ValidationError("unknown command '" + opt.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum game simulator for the EWL entanglement protocol"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed_value = 0;
  app.add_option("--config", opt.config_path, "JSON experiment config");
  app.add_option("--out", opt.out_path, "write the artifact here instead of stdout");
  auto* seed_opt = app.add_option("--seed", seed_value, "seed for randomized trials");
  app.add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  for (const char* name : {"play", "sweep", "dominance", "entropy", "solve-alphas", "verify"}) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  opt.command = app.get_subcommands().front()->get_name();
  if (seed_opt->count()) opt.seed = seed_value;

  try {
    return run(opt);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << "\n";
    return 2;
  }
}
