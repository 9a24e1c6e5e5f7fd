#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgame/cmatrix.hpp"
#include "qgame/entanglers.hpp"
#include "qgame/error.hpp"
#include "qgame/games.hpp"
#include "qgame/strategies.hpp"

namespace qgame {

struct GameOutcome {
  std::vector<double> distribution;  // over joint outcomes n*alice + bob
  double alice_payoff = 0.0;
  double bob_payoff = 0.0;
};

namespace detail {

inline void check_entangler(const GameDefinition& game, const std::optional<Entangler>& entangler) {
  if (entangler && entangler->local_dim() != game.n()) {
    throw ValidationError(std::string(to_string(entangler->kind())) + " entangler acts on local dimension " +
                          std::to_string(entangler->local_dim()) + " but the game has n=" + std::to_string(game.n()));
  }
}

}  // namespace detail

// Clamps round-off negatives and weighs the payoff tables.
inline GameOutcome outcome_from_distribution(const GameDefinition& game, std::vector<double> dist) {
  const std::size_t n = game.n();
  if (dist.size() != n * n) throw ValidationError("outcome distribution has the wrong length");
  GameOutcome out;
  double total = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist[k] < 0.0) {
      if (dist[k] < -1e-12) {
        std::ostringstream os;
        os << "outcome probability " << dist[k] << " at index " << k << " is negative beyond round-off";
        throw NumericalFault(os.str());
      }
      dist[k] = 0.0;
    }
    total += dist[k];
    out.alice_payoff += dist[k] * game.payoffs().alice(k / n, k % n);
    out.bob_payoff += dist[k] * game.payoffs().bob(k / n, k % n);
  }
  if (std::abs(total - 1.0) > tol::kProbabilistic) {
    std::ostringstream os;
    os << "outcome distribution sums to " << total;
    throw NumericalFault(os.str());
  }
  out.distribution = std::move(dist);
  return out;
}

// J|ψ0⟩, or |ψ0⟩ without an entangler.
inline StateVector entangled_initial_state(const GameDefinition& game, const std::optional<Entangler>& entangler) {
  detail::check_entangler(game, entangler);
  auto psi0 = StateVector::basis(game.n() * game.n(), game.initial_index());
  return entangler ? apply(entangler->matrix(), psi0) : psi0;
}

// J† (ua ⊗ ub) J |ψ0⟩
inline StateVector final_state(const GameDefinition& game, const std::optional<Entangler>& entangler,
                               const ComplexMatrix& ua, const ComplexMatrix& ub) {
  auto psi = apply(kron(ua, ub), entangled_initial_state(game, entangler));
  return entangler ? apply(adjoint(entangler->matrix()), psi) : psi;
}

/// Runs one round of the protocol. Mixed classical strategies are expanded
/// into their pure draws and the outcome distributions averaged with the
/// product weights.
inline GameOutcome play(const GameDefinition& game, const std::optional<Entangler>& entangler, const Strategy& a,
                        const Strategy& b) {
  detail::check_entangler(game, entangler);
  const std::size_t n = game.n();
  const auto plays_a = realize(a, n);
  const auto plays_b = realize(b, n);
  const auto start = entangled_initial_state(game, entangler);
  const std::optional<ComplexMatrix> disentangle =
      entangler ? std::optional<ComplexMatrix>(adjoint(entangler->matrix())) : std::nullopt;

  std::vector<double> dist(n * n, 0.0);
  for (const auto& wa : plays_a)
    for (const auto& wb : plays_b) {
      auto psi = apply(kron(wa.unitary, wb.unitary), start);
      if (disentangle) psi = apply(*disentangle, psi);
      const double w = wa.probability * wb.probability;
      for (std::size_t k = 0; k < dist.size(); ++k) dist[k] += w * std::norm(psi[k]);
    }
  return outcome_from_distribution(game, std::move(dist));
}

/// Von Neumann entropy of either reduced state, in base local_dim so that a
/// maximally entangled state scores 1.
inline double entanglement_entropy(const StateVector& state, std::size_t local_dim) {
  const auto rho = partial_trace(state, local_dim, Player::Alice);
  double e = 0.0;
  for (double lambda : hermitian_eigenvalues(rho)) {
    if (lambda > 1e-12) e -= lambda * std::log(lambda);
  }
  return e / std::log(static_cast<double>(local_dim));
}

// Alice's coefficients in a 2x2 game, labelled by (alice outcome, bob outcome)
// with label 1 = local index 0 and label 0 = local index 1.
struct Coefficients2x2 {
  double a11;
  double a10;
  double a01;
  double a00;

  static Coefficients2x2 alice_of(const PayoffTable& t) {
    if (t.n() != 2) throw ValidationError("Coefficients2x2 needs a 2x2 payoff table");
    return {t.alice(0, 0), t.alice(0, 1), t.alice(1, 0), t.alice(1, 1)};
  }
};

// Alice's expected payoff for phase-augmented 2x2 play, in closed form.
inline double closed_form_payoff_2x2(double theta_a, double phi_a, double theta_b, double phi_b,
                                     const Coefficients2x2& a) {
  const double ca = std::cos(theta_a), sa = std::sin(theta_a);
  const double cb = std::cos(theta_b), sb = std::sin(theta_b);
  const double t11 = ca * cb * std::cos(phi_a + phi_b);
  const double t10 = ca * sb * std::cos(phi_a) - sa * cb * std::sin(phi_b);
  const double t01 = sa * cb * std::cos(phi_b) - ca * sb * std::sin(phi_a);
  const double t00 = sa * sb + ca * cb * std::sin(phi_a + phi_b);
  return a.a11 * t11 * t11 + a.a10 * t10 * t10 + a.a01 * t01 * t01 + a.a00 * t00 * t00;
}

/// Alice plays U_i·Q, Bob plays U_j. Evaluates the final state directly and
/// as (U_i⊗U_j)·J†(Q⊗I)J|ψ0⟩, and insists the two agree.
inline GameOutcome play_factored(const GameDefinition& game, const std::optional<Entangler>& entangler,
                                 const ComplexMatrix& cheat, std::size_t i, std::size_t j) {
  const std::size_t n = game.n();
  const double r = unitarity_residual(cheat);
  if (cheat.rows() != n || r > tol::kStructural) {
    std::ostringstream os;
    os << "cheat matrix must be a " << n << "x" << n << " unitary (shape " << cheat.shape() << ", residual " << r
       << ")";
    throw ValidationError(os.str());
  }
  const auto ui = classical_unitary(i, n);
  const auto uj = classical_unitary(j, n);
  const auto direct = final_state(game, entangler, ui * cheat, uj);
  const auto psi_jq = final_state(game, entangler, cheat, ComplexMatrix::identity(n));
  const auto factored = apply(kron(ui, uj), psi_jq);

  double diff = 0.0;
  for (std::size_t k = 0; k < direct.dim(); ++k) diff = std::max(diff, std::abs(direct[k] - factored[k]));
  if (diff > tol::kProbabilistic) {
    std::ostringstream os;
    os << "play_factored: direct and factored final states differ by " << diff << " for (i,j)=(" << i << "," << j
       << ")";
    throw NumericalFault(os.str());
  }
  return outcome_from_distribution(game, direct.probabilities());
}

}  // namespace qgame
