#pragma once

// Self-check suite behind `qgame verify`. Each check recomputes a known
// identity of the library from scratch and reports the worst residual seen.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgame/analysis.hpp"
#include "qgame/cmatrix.hpp"
#include "qgame/entanglers.hpp"
#include "qgame/games.hpp"
#include "qgame/protocol.hpp"
#include "qgame/strategies.hpp"

namespace qgame {

inline constexpr std::uint64_t kDefaultSeed = 20260101;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string fmt_residual(double v) {
  std::ostringstream os;
  os << std::scientific << v;
  return os.str();
}

// The three-strategy cyclic entangler with α = (-1/3, 2/3, 2/3), entry by entry.
inline ComplexMatrix printed_rsp_entangler() {
  const double a = -1.0 / 3.0, b = 2.0 / 3.0;
  return ComplexMatrix{
      {a, 0, 0, 0, b, 0, 0, 0, b}, {0, a, 0, 0, 0, b, b, 0, 0}, {0, 0, a, b, 0, 0, 0, b, 0},
      {0, 0, b, a, 0, 0, 0, b, 0}, {b, 0, 0, 0, a, 0, 0, 0, b}, {0, b, 0, 0, 0, a, b, 0, 0},
      {0, b, 0, 0, 0, b, a, 0, 0}, {0, 0, b, b, 0, 0, 0, a, 0}, {b, 0, 0, 0, b, 0, 0, 0, a},
  };
}

inline std::vector<double> random_phases(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::vector<double> p(n);
  for (auto& x : p) x = u(rng);
  return p;
}

}  // namespace detail

inline std::vector<CheckResult> run_verification(std::uint64_t seed = kDefaultSeed) {
  using detail::fmt_residual;
  std::vector<CheckResult> results;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const auto game = rsp();
  const auto rsp_alphas = EntanglerCoefficients({-1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0});

  auto check = [&results](std::string name, const std::function<std::pair<bool, std::string>()>& body) {
    CheckResult r;
    r.name = std::move(name);
    try {
      std::tie(r.passed, r.detail) = body();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    results.push_back(std::move(r));
  };

  check("classical unitaries form a cyclic group", [] {
    double worst = 0.0;
    for (std::size_t n = 2; n <= 4; ++n)
      for (std::size_t i = 1; i <= n; ++i) {
        worst = std::max(worst, max_abs_diff(adjoint(classical_unitary(i, n)), classical_unitary((n - i + 1) % n + 1, n)));
        for (std::size_t j = 1; j <= n; ++j)
          worst = std::max(worst, max_abs_diff(classical_unitary(i, n) * classical_unitary(j, n),
                                               classical_unitary((i + j - 2) % n + 1, n)));
      }
    return std::pair{worst == 0.0, "max deviation " + fmt_residual(worst)};
  });

  check("rsp cyclic entangler matches printed matrix", [&] {
    const double d = max_abs_diff(cyclic_entangler(rsp_alphas).matrix(), detail::printed_rsp_entangler());
    return std::pair{d < 1e-15, "max deviation " + fmt_residual(d)};
  });

  check("rsp entangler on |11> has entropy 0.88", [&] {
    const auto j = cyclic_entangler(rsp_alphas);
    const auto psi = apply(j.matrix(), StateVector::basis(9, 0));
    const double amp_err = std::max({std::abs(psi[0] + 1.0 / 3.0), std::abs(psi[4] - 2.0 / 3.0),
                                     std::abs(psi[8] - 2.0 / 3.0)});
    const double e = entanglement_entropy(psi, 3);
    std::ostringstream os;
    os << "E = " << e << ", amplitude error " << amp_err;
    return std::pair{amp_err < 1e-12 && std::abs(e - 0.88) <= 0.005, os.str()};
  });

  check("solved coefficients satisfy both unitarity conditions", [&] {
    double worst_coeff = 0.0, worst_unitary = 0.0, worst_comm = 0.0;
    for (std::size_t n = 2; n <= 5; ++n)
      for (int trial = 0; trial < 20; ++trial) {
        const auto c = solve_alphas(n, detail::random_phases(n, rng));
        worst_coeff = std::max({worst_coeff, normalization_residual(c.alphas()), autocorrelation_residual(c.alphas())});
        const auto j = cyclic_entangler(c);
        worst_unitary = std::max(worst_unitary, unitarity_residual(j.matrix()));
        if (n == 3) worst_comm = std::max(worst_comm, max_classical_commutator(j));
      }
    std::ostringstream os;
    os << "coefficients " << worst_coeff << ", unitarity " << worst_unitary << ", commutators " << worst_comm;
    return std::pair{worst_coeff < 1e-9 && worst_unitary < 1e-12 && worst_comm < 1e-12, os.str()};
  });

  std::vector<std::pair<std::string, std::optional<Entangler>>> entanglers = {
      {"none", std::nullopt},
      {"rsp cyclic", cyclic_entangler(rsp_alphas)},
      {"random cyclic", cyclic_entangler(solve_alphas(3, detail::random_phases(3, rng)))},
      {"jbar3", jbar3()},
  };

  check("pure play reproduces the classical table under every entangler", [&] {
    double worst = 0.0;
    for (const auto& [name, ent] : entanglers)
      for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= 3; ++j) {
          const auto out = play(game, ent, ClassicalPure{i}, ClassicalPure{j});
          worst = std::max(worst, std::abs(out.alice_payoff - game.payoffs().alice(i - 1, j - 1)));
          worst = std::max(worst, std::abs(out.distribution[3 * (i - 1) + (j - 1)] - 1.0));
        }
    return std::pair{worst < 1e-12, "max deviation " + fmt_residual(worst)};
  });

  check("R>S>P>R survives every entangler", [&] {
    const std::vector<Strategy> rsp_plays = {ClassicalPure{1}, ClassicalPure{2}, ClassicalPure{3}};
    for (const auto& [name, ent] : entanglers) {
      const auto rel = dominance(game, ent, rsp_plays);
      const auto cyc = has_cycle(rel);
      if (!rel.is_antisymmetric() || !cyc.found || cyc.witness != std::vector<std::size_t>{0, 1, 2})
        return std::pair{false, "cycle missing under " + name};
    }
    return std::pair{true, std::string("3-cycle under all entanglers")};
  });

  check("Bob can always answer a cheating Alice", [&] {
    const auto j = cyclic_entangler(rsp_alphas);
    double worst_payoff = 0.0, worst_sum = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const auto q = random_unitary(3, rng);
      const auto br = best_classical_response(game, j, UnitaryPlay{q});
      worst_payoff = std::min(worst_payoff, br.payoff);
      double sum = 0.0;
      for (std::size_t r = 1; r <= 3; ++r) sum += play_factored(game, j, q, 1, r).bob_payoff;
      worst_sum = std::max(worst_sum, std::abs(sum));
    }
    std::ostringstream os;
    os << "min best payoff " << worst_payoff << ", max |reply sum| " << worst_sum;
    return std::pair{worst_payoff >= -1e-9 && worst_sum < 1e-9, os.str()};
  });

  check("closed-form 2x2 payoff matches the engine", [&] {
    const GameDefinition g2(PayoffTable({{3, 0}, {5, 1}}, {{3, 5}, {0, 1}}));
    const auto coeffs = Coefficients2x2::alice_of(g2.payoffs());
    const auto j = ewl2(Ewl2Variant::Prime);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const double ta = angle(rng), pa = angle(rng), tb = angle(rng), pb = angle(rng);
      const double engine = play(g2, j, Parametric2{ta, pa}, Parametric2{tb, pb}).alice_payoff;
      worst = std::max(worst, std::abs(engine - closed_form_payoff_2x2(ta, pa, tb, pb, coeffs)));
    }
    return std::pair{worst < 1e-9, "max deviation " + fmt_residual(worst)};
  });

  check("parametric3 exponential, closed form and commutation", [&] {
    double worst = 0.0, worst_comm = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const double x = angle(rng), y = angle(rng);
      const auto u = expm_involution(h1(), x) * expm_involution(h2(), y);
      worst = std::max(worst, max_abs_diff(u, parametric3_closed_form(x, y)));
      worst_comm = std::max(worst_comm, commutator_norm(u, f_double_prime()));
    }
    const double jbar = max_abs_diff(jbar3().matrix(), jbar3_closed_form());
    std::ostringstream os;
    os << "closed form " << worst << ", [U,F''] " << worst_comm << ", jbar " << jbar;
    return std::pair{worst < 1e-12 && worst_comm < 1e-12 && jbar < 1e-12, os.str()};
  });

  check("zero-sum conservation under cheating", [&] {
    const auto j = cyclic_entangler(rsp_alphas);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const auto out = play(game, j, UnitaryPlay{random_unitary(3, rng)}, UnitaryPlay{random_unitary(3, rng)});
      double total = 0.0;
      for (double p : out.distribution) total += p;
      worst = std::max({worst, std::abs(out.alice_payoff + out.bob_payoff), std::abs(total - 1.0)});
    }
    return std::pair{worst < 1e-9, "max deviation " + fmt_residual(worst)};
  });

  return results;
}

inline nlohmann::json verification_report(const std::vector<CheckResult>& results, std::uint64_t seed) {
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  return {{"command", "verify"}, {"seed", seed}, {"passed", all}, {"checks", checks}};
}

}  // namespace qgame
