#pragma once

// JSON experiment configs and the JSON/CSV artifacts the CLI emits.
//
// Complex numbers are [re, im] pairs (a bare number is accepted as a real on
// input); matrices are row-major nested arrays of those. Unknown keys are
// rejected so that typos surface as errors instead of silently applied
// defaults.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qgame/analysis.hpp"
#include "qgame/cmatrix.hpp"
#include "qgame/entanglers.hpp"
#include "qgame/error.hpp"
#include "qgame/games.hpp"
#include "qgame/protocol.hpp"
#include "qgame/strategies.hpp"

namespace qgame {

using nlohmann::json;

enum class EntropyState { Initial, Final };

struct SolveAlphasRequest {
  std::size_t n = 3;
  std::optional<std::vector<double>> phases;  // random from the seed when absent
};

struct ExperimentConfig {
  GameDefinition game = rsp();
  std::optional<Entangler> entangler;
  std::string entangler_name = "none";
  std::vector<Strategy> strategies;
  std::vector<SweepAxis> sweep_axes;
  unsigned sweep_threads = 0;
  EntropyState entropy_state = EntropyState::Initial;
  SolveAlphasRequest solve;
  std::optional<std::uint64_t> seed;
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw ValidationError("config field '" + field + "': " + what);
}

inline void reject_unknown_keys(const json& obj, const std::string& field, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) field_error(field.empty() ? key : field + "." + key, "unknown key");
}

inline double real_of(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(field, "must be finite");
  return v;
}

inline Complex complex_of(const json& j, const std::string& field) {
  if (j.is_number()) return {real_of(j, field), 0.0};
  if (!j.is_array() || j.size() != 2) field_error(field, "expected a number or an [re, im] pair");
  return {real_of(j[0], field + "[0]"), real_of(j[1], field + "[1]")};
}

inline std::vector<double> reals_of(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(real_of(j[k], field + "[" + std::to_string(k) + "]"));
  return v;
}

inline std::size_t index_of(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) field_error(field, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline ComplexMatrix matrix_of(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) field_error(field, "expected a nested matrix");
  const std::size_t rows = j.size(), cols = j[0].size();
  std::vector<Complex> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) field_error(field, "ragged matrix");
    for (std::size_t c = 0; c < cols; ++c)
      entries.push_back(complex_of(j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

inline RealMatrix real_matrix_of(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected a nested array");
  RealMatrix m;
  for (std::size_t r = 0; r < j.size(); ++r) m.push_back(reals_of(j[r], field + "[" + std::to_string(r) + "]"));
  return m;
}

inline GameDefinition game_of(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "rsp") return rsp();
    field_error("game", "unknown built-in game '" + j.get<std::string>() + "'");
  }
  if (!j.is_object()) field_error("game", "expected \"rsp\" or an object with payoff tables");
  reject_unknown_keys(j, "game", {"name", "alice", "bob", "zero_sum", "initial_index"});
  if (!j.contains("alice") || !j.contains("bob")) field_error("game", "inline games need 'alice' and 'bob' tables");
  const bool zero_sum = j.value("zero_sum", false);
  const std::size_t init = j.contains("initial_index") ? index_of(j["initial_index"], "game.initial_index") : 0;
  try {
    return GameDefinition(
        PayoffTable(real_matrix_of(j["alice"], "game.alice"), real_matrix_of(j["bob"], "game.bob"), zero_sum), init,
        j.value("name", std::string("custom")));
  } catch (const ValidationError& e) {
    field_error("game", e.what());
  }
}

inline std::vector<Complex> complexes_of(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array");
  std::vector<Complex> v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(complex_of(j[k], field + "[" + std::to_string(k) + "]"));
  return v;
}

inline std::pair<std::optional<Entangler>, std::string> entangler_of(const json& j) {
  if (j.is_null()) return {std::nullopt, "none"};
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "none") return {std::nullopt, name};
    if (name == "ewl2") return {ewl2(Ewl2Variant::Plain), name};
    if (name == "ewl2-prime") return {ewl2(Ewl2Variant::Prime), name};
    if (name == "jbar3") return {jbar3(), name};
    field_error("entangler", "unknown entangler '" + name + "'");
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    field_error("entangler", "expected a name or an object with a 'type'");
  const auto type = j["type"].get<std::string>();
  try {
    if (type == "cyclic") {
      reject_unknown_keys(j, "entangler", {"type", "alphas", "phases"});
      if (j.contains("alphas") == j.contains("phases")) field_error("entangler", "give exactly one of 'alphas' or 'phases'");
      if (j.contains("alphas")) {
        return {cyclic_entangler(EntanglerCoefficients(complexes_of(j["alphas"], "entangler.alphas"))), "cyclic"};
      }
      const auto phases = reals_of(j["phases"], "entangler.phases");
      return {cyclic_entangler(solve_alphas(phases.size(), phases)), "cyclic"};
    }
    if (type == "custom") {
      reject_unknown_keys(j, "entangler", {"type", "matrix"});
      if (!j.contains("matrix")) field_error("entangler", "custom entangler needs 'matrix'");
      return {Entangler(matrix_of(j["matrix"], "entangler.matrix"), EntanglerKind::Custom), "custom"};
    }
    if (type == "none" || type == "ewl2" || type == "ewl2-prime" || type == "jbar3") {
      reject_unknown_keys(j, "entangler", {"type"});
      return entangler_of(json(type));
    }
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind("config field", 0) == 0) throw;
    field_error("entangler", msg);
  }
  field_error("entangler.type", "unknown entangler type '" + type + "'");
}

}  // namespace detail

inline Strategy strategy_from_json(const json& j, const std::string& field = "strategy") {
  using namespace detail;
  if (!j.is_object()) field_error(field, "expected an object");
  if (j.contains("pure")) {
    reject_unknown_keys(j, field, {"pure"});
    const auto i = index_of(j["pure"], field + ".pure");
    if (i == 0) field_error(field + ".pure", "strategy indices are 1-based");
    return ClassicalPure{i};
  }
  if (j.contains("mixed")) {
    reject_unknown_keys(j, field, {"mixed"});
    return ClassicalMixed{reals_of(j["mixed"], field + ".mixed")};
  }
  if (j.contains("theta")) {
    reject_unknown_keys(j, field, {"theta", "phi"});
    return Parametric2{real_of(j["theta"], field + ".theta"), j.contains("phi") ? real_of(j["phi"], field + ".phi") : 0.0};
  }
  if (j.contains("x") || j.contains("y")) {
    reject_unknown_keys(j, field, {"x", "y"});
    if (!j.contains("x") || !j.contains("y")) field_error(field, "parametric (x, y) strategy needs both x and y");
    return Parametric3{real_of(j["x"], field + ".x"), real_of(j["y"], field + ".y")};
  }
  if (j.contains("unitary")) {
    reject_unknown_keys(j, field, {"unitary"});
    return UnitaryPlay{matrix_of(j["unitary"], field + ".unitary")};
  }
  field_error(field, "expected one of pure, mixed, theta/phi, x/y, unitary");
}

inline SweepParam sweep_param_of(const std::string& s, const std::string& field) {
  if (s == "theta") return SweepParam::Theta;
  if (s == "phi") return SweepParam::Phi;
  if (s == "p") return SweepParam::P;
  if (s == "x") return SweepParam::X;
  if (s == "y") return SweepParam::Y;
  detail::field_error(field, "unknown sweep parameter '" + s + "'");
}

/// Parses and validates a config document. Defaults: game "rsp", no entangler.
inline ExperimentConfig parse_config(const std::string& text) {
  using namespace detail;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown_keys(doc, "", {"game", "entangler", "strategies", "sweep", "entropy", "solve_alphas", "seed"});

  ExperimentConfig cfg;
  if (doc.contains("game")) cfg.game = game_of(doc["game"]);
  if (doc.contains("entangler")) {
    std::tie(cfg.entangler, cfg.entangler_name) = entangler_of(doc["entangler"]);
    if (cfg.entangler && cfg.entangler->local_dim() != cfg.game.n()) {
      field_error("entangler", "acts on local dimension " + std::to_string(cfg.entangler->local_dim()) +
                                   " but the game has n=" + std::to_string(cfg.game.n()));
    }
  }
  if (doc.contains("strategies")) {
    if (!doc["strategies"].is_array()) field_error("strategies", "expected an array");
    for (std::size_t k = 0; k < doc["strategies"].size(); ++k) {
      const std::string field = "strategies[" + std::to_string(k) + "]";
      cfg.strategies.push_back(strategy_from_json(doc["strategies"][k], field));
      try {
        realize(cfg.strategies.back(), cfg.game.n());
      } catch (const ValidationError& e) {
        field_error(field, e.what());
      }
    }
  }
  if (doc.contains("sweep")) {
    const auto& s = doc["sweep"];
    if (!s.is_object()) field_error("sweep", "expected an object");
    reject_unknown_keys(s, "sweep", {"axes", "threads"});
    if (s.contains("threads")) cfg.sweep_threads = static_cast<unsigned>(index_of(s["threads"], "sweep.threads"));
    if (!s.contains("axes") || !s["axes"].is_array()) field_error("sweep.axes", "expected an array");
    for (std::size_t k = 0; k < s["axes"].size(); ++k) {
      const auto& a = s["axes"][k];
      const std::string field = "sweep.axes[" + std::to_string(k) + "]";
      if (!a.is_object()) field_error(field, "expected an object");
      reject_unknown_keys(a, field, {"player", "param", "values", "start", "stop", "count"});
      SweepAxis axis;
      const auto player = a.value("player", std::string());
      if (player == "alice") axis.player = Player::Alice;
      else if (player == "bob") axis.player = Player::Bob;
      else field_error(field + ".player", "expected \"alice\" or \"bob\"");
      if (!a.contains("param") || !a["param"].is_string()) field_error(field + ".param", "expected a string");
      axis.param = sweep_param_of(a["param"].get<std::string>(), field + ".param");
      if (a.contains("values")) {
        axis.values = reals_of(a["values"], field + ".values");
      } else if (a.contains("start") && a.contains("stop") && a.contains("count")) {
        const auto count = index_of(a["count"], field + ".count");
        if (count == 0) field_error(field + ".count", "must be positive");
        if (count > kMaxSweepPoints) field_error(field + ".count", "exceeds the sweep size limit");
        axis.values = linspace(real_of(a["start"], field + ".start"), real_of(a["stop"], field + ".stop"), count);
      } else {
        field_error(field, "give 'values' or 'start'/'stop'/'count'");
      }
      if (axis.values.empty()) field_error(field, "grid is empty");
      cfg.sweep_axes.push_back(std::move(axis));
    }
  }
  if (doc.contains("entropy")) {
    const auto& e = doc["entropy"];
    if (!e.is_object()) field_error("entropy", "expected an object");
    reject_unknown_keys(e, "entropy", {"state"});
    const auto state = e.value("state", std::string("initial"));
    if (state == "initial") cfg.entropy_state = EntropyState::Initial;
    else if (state == "final") cfg.entropy_state = EntropyState::Final;
    else field_error("entropy.state", "expected \"initial\" or \"final\"");
  }
  if (doc.contains("solve_alphas")) {
    const auto& s = doc["solve_alphas"];
    if (!s.is_object()) field_error("solve_alphas", "expected an object");
    reject_unknown_keys(s, "solve_alphas", {"n", "phases"});
    if (s.contains("n")) cfg.solve.n = index_of(s["n"], "solve_alphas.n");
    if (cfg.solve.n < 2) field_error("solve_alphas.n", "must be >= 2");
    if (s.contains("phases")) {
      cfg.solve.phases = reals_of(s["phases"], "solve_alphas.phases");
      if (!s.contains("n")) cfg.solve.n = cfg.solve.phases->size();
      if (cfg.solve.phases->size() != cfg.solve.n) field_error("solve_alphas.phases", "length must equal n");
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) field_error("seed", "expected an unsigned integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  return cfg;
}

// ---- emitted artifacts ----

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json outcome_to_json(const GameOutcome& o) {
  return {{"command", "play"},
          {"distribution", o.distribution},
          {"alice_payoff", o.alice_payoff},
          {"bob_payoff", o.bob_payoff}};
}

inline GameOutcome outcome_from_json(const json& j) {
  using namespace detail;
  if (!j.is_object() || j.value("command", "") != "play") field_error("command", "expected a play artifact");
  reject_unknown_keys(j, "", {"command", "distribution", "alice_payoff", "bob_payoff"});
  GameOutcome o;
  o.distribution = reals_of(j.at("distribution"), "distribution");
  o.alice_payoff = real_of(j.at("alice_payoff"), "alice_payoff");
  o.bob_payoff = real_of(j.at("bob_payoff"), "bob_payoff");
  return o;
}

inline json dominance_to_json(const DominanceRelation& rel, const CycleSearch& cycle,
                              const std::vector<std::string>& labels) {
  json beats = json::array();
  for (const auto& row : rel.beats) {
    json r = json::array();
    for (auto v : row) r.push_back(to_string(v));
    beats.push_back(std::move(r));
  }
  json witness = json::array();
  for (auto k : cycle.witness) witness.push_back(k);
  return {{"command", "dominance"}, {"n", rel.n},           {"labels", labels},
          {"beats", beats},         {"has_cycle", cycle.found}, {"witness", witness}};
}

inline DominanceRelation dominance_from_json(const json& j) {
  using namespace detail;
  if (!j.is_object() || j.value("command", "") != "dominance") field_error("command", "expected a dominance artifact");
  reject_unknown_keys(j, "", {"command", "n", "labels", "beats", "has_cycle", "witness"});
  DominanceRelation rel;
  rel.n = index_of(j.at("n"), "n");
  const auto& beats = j.at("beats");
  if (!beats.is_array() || beats.size() != rel.n) field_error("beats", "expected n rows");
  for (const auto& row : beats) {
    if (!row.is_array() || row.size() != rel.n) field_error("beats", "expected n columns");
    std::vector<Relation> r;
    for (const auto& v : row) {
      const auto s = v.get<std::string>();
      if (s == "wins") r.push_back(Relation::Wins);
      else if (s == "loses") r.push_back(Relation::Loses);
      else if (s == "ties") r.push_back(Relation::Ties);
      else field_error("beats", "unknown relation '" + s + "'");
    }
    rel.beats.push_back(std::move(r));
  }
  if (!j.at("has_cycle").is_boolean()) field_error("has_cycle", "expected a boolean");
  for (const auto& w : j.at("witness"))
    if (index_of(w, "witness") >= rel.n) field_error("witness", "index out of range");
  return rel;
}

inline json entropy_to_json(double entropy, std::size_t local_dim, const std::string& state, const std::string& entangler) {
  return {{"command", "entropy"}, {"entropy", entropy}, {"local_dim", local_dim}, {"state", state}, {"entangler", entangler}};
}

inline json solve_alphas_to_json(const EntanglerCoefficients& c, const std::vector<double>& phases,
                                 std::optional<std::uint64_t> seed) {
  json alphas = json::array();
  for (auto a : c.alphas()) alphas.push_back(complex_to_json(a));
  const auto spectrum = coefficient_spectrum(c.alphas());
  double mean = 0.0;
  for (auto z : spectrum) mean += std::abs(z) / static_cast<double>(spectrum.size());
  double spread = 0.0;
  for (auto z : spectrum) spread = std::max(spread, std::abs(std::abs(z) - mean));
  const auto j = cyclic_entangler(c);
  json out = {{"command", "solve-alphas"},
              {"n", c.n()},
              {"phases", phases},
              {"alphas", alphas},
              {"normalization_residual", normalization_residual(c.alphas())},
              {"autocorrelation_residual", autocorrelation_residual(c.alphas())},
              {"spectrum_modulus_spread", spread},
              {"unitarity_residual", unitarity_residual(j.matrix())}};
  out["seed"] = seed ? json(*seed) : json(nullptr);
  return out;
}

inline EntanglerCoefficients solve_alphas_from_json(const json& j) {
  using namespace detail;
  if (!j.is_object() || j.value("command", "") != "solve-alphas") field_error("command", "expected a solve-alphas artifact");
  return EntanglerCoefficients(complexes_of(j.at("alphas"), "alphas"));
}

// CSV with a header row; values carry 17 significant digits.
inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  for (const auto& name : r.axis_names) os << name << ',';
  os << "alice_payoff,bob_payoff\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : r.records) {
    for (double v : row.coordinates) os << v << ',';
    os << row.alice_payoff << ',' << row.bob_payoff << '\n';
  }
}

}  // namespace qgame
