#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <exception>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qgame/cmatrix.hpp"
#include "qgame/entanglers.hpp"
#include "qgame/error.hpp"
#include "qgame/games.hpp"
#include "qgame/protocol.hpp"
#include "qgame/strategies.hpp"

namespace qgame {

// Payoffs with magnitude below this are ties.
inline constexpr double kTieThreshold = 1e-9;

enum class Relation { Wins, Loses, Ties };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::Wins: return "wins";
    case Relation::Loses: return "loses";
    case Relation::Ties: return "ties";
  }
  return "?";
}

// beats[i][j]: how strategy i fares (as Alice) against strategy j (as Bob).
struct DominanceRelation {
  std::size_t n = 0;
  std::vector<std::vector<Relation>> beats;

  bool is_antisymmetric() const {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Relation r = beats[i][j], t = beats[j][i];
        if ((r == Relation::Wins) != (t == Relation::Loses)) return false;
        if ((r == Relation::Ties) != (t == Relation::Ties)) return false;
      }
    return true;
  }
};

inline DominanceRelation dominance(const GameDefinition& game, const std::optional<Entangler>& entangler,
                                   const std::vector<Strategy>& strategies) {
  if (strategies.size() < 2) throw ValidationError("dominance needs at least 2 strategies");
  DominanceRelation rel;
  rel.n = strategies.size();
  rel.beats.assign(rel.n, std::vector<Relation>(rel.n, Relation::Ties));
  for (std::size_t i = 0; i < rel.n; ++i)
    for (std::size_t j = 0; j < rel.n; ++j) {
      const double pa = play(game, entangler, strategies[i], strategies[j]).alice_payoff;
      rel.beats[i][j] = pa > kTieThreshold ? Relation::Wins : pa < -kTieThreshold ? Relation::Loses : Relation::Ties;
    }
  return rel;
}

struct CycleSearch {
  bool found = false;
  std::vector<std::size_t> witness;  // i0 beats i1 beats ... beats i0
};

// Shortest directed cycle in the "wins" digraph, via BFS from every vertex.
// Among equally short cycles the one through the lowest vertex wins.
inline CycleSearch has_cycle(const DominanceRelation& rel) {
  CycleSearch best;
  for (std::size_t start = 0; start < rel.n; ++start) {
    std::vector<std::ptrdiff_t> parent(rel.n, -1);
    std::vector<bool> seen(rel.n, false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    std::optional<std::size_t> closer;
    while (!queue.empty() && !closer) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < rel.n; ++v) {
        if (rel.beats[u][v] != Relation::Wins) continue;
        if (v == start) {
          closer = u;
          break;
        }
        if (!seen[v]) {
          seen[v] = true;
          parent[v] = static_cast<std::ptrdiff_t>(u);
          queue.push_back(v);
        }
      }
    }
    if (!closer) continue;
    std::vector<std::size_t> path;
    for (auto v = static_cast<std::ptrdiff_t>(*closer); v != -1; v = parent[static_cast<std::size_t>(v)])
      path.push_back(static_cast<std::size_t>(v));
    std::reverse(path.begin(), path.end());
    if (!best.found || path.size() < best.witness.size()) {
      best.found = true;
      best.witness = std::move(path);
    }
  }
  return best;
}

struct BestResponse {
  std::size_t index = 0;  // 1-based
  double payoff = 0.0;
  std::vector<double> reply_payoffs;  // Bob's payoff for each pure reply
};

/// Bob's best pure classical reply to a fixed Alice strategy. Replies within
/// kTieThreshold of the best count as ties and the lowest index is kept.
inline BestResponse best_classical_response(const GameDefinition& game, const std::optional<Entangler>& entangler,
                                            const Strategy& opponent) {
  BestResponse out;
  for (std::size_t j = 1; j <= game.n(); ++j) {
    const double pb = play(game, entangler, opponent, ClassicalPure{j}).bob_payoff;
    out.reply_payoffs.push_back(pb);
    if (j == 1 || pb > out.payoff + kTieThreshold) {
      out.index = j;
      out.payoff = pb;
    }
  }
  return out;
}

// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix.
template <typename Rng>
ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(n));
  for (auto& c : cols)
    for (auto& z : c) z = {gauss(rng), gauss(rng)};
  for (std::size_t k = 0; k < n; ++k) {
    // two passes of modified Gram-Schmidt keep orthogonality near machine precision
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < k; ++p) {
        Complex dot{};
        for (std::size_t r = 0; r < n; ++r) dot += std::conj(cols[p][r]) * cols[k][r];
        for (std::size_t r = 0; r < n; ++r) cols[k][r] -= dot * cols[p][r];
      }
    double norm = 0.0;
    for (const auto& z : cols[k]) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (auto& z : cols[k]) z /= norm;
  }
  ComplexMatrix u(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) u(r, c) = cols[c][r];
  return u;
}

inline ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unitary(n, rng);
}

enum class SweepParam { Theta, Phi, P, X, Y };

inline const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Theta: return "theta";
    case SweepParam::Phi: return "phi";
    case SweepParam::P: return "p";
    case SweepParam::X: return "x";
    case SweepParam::Y: return "y";
  }
  return "?";
}

struct SweepAxis {
  Player player;
  SweepParam param;
  std::vector<double> values;

  std::string name() const { return std::string(to_string(player)) + "_" + to_string(param); }
};

inline std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count == 0) throw ValidationError("linspace needs count >= 1");
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k)
    v[k] = count == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
  return v;
}

struct SweepSpec {
  Strategy alice;
  Strategy bob;
  std::vector<SweepAxis> axes;
};

struct SweepRow {
  std::vector<double> coordinates;  // one per axis
  double alice_payoff;
  double bob_payoff;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> records;
};

inline constexpr std::size_t kMaxSweepPoints = 1'000'000;

// Overrides one parameter of a parametric strategy.
inline void set_parameter(Strategy& s, SweepParam param, double value) {
  if (auto* p2 = std::get_if<Parametric2>(&s)) {
    switch (param) {
      case SweepParam::Theta: p2->theta = value; return;
      case SweepParam::Phi: p2->phi = value; return;
      case SweepParam::P:
        if (!(value >= 0.0 && value <= 1.0)) throw ValidationError("sweep value for p must lie in [0, 1]");
        p2->theta = std::acos(std::sqrt(value));
        return;
      default: break;
    }
  } else if (auto* p3 = std::get_if<Parametric3>(&s)) {
    if (param == SweepParam::X) {
      p3->x = value;
      return;
    }
    if (param == SweepParam::Y) {
      p3->y = value;
      return;
    }
  }
  throw ValidationError(std::string("sweep parameter '") + to_string(param) + "' does not apply to strategy " +
                        describe(s));
}

/// Plays every point of the Cartesian product of the axes. Rows come out in
/// lexicographic grid order (first axis slowest) regardless of how many
/// worker threads evaluate them.
inline SweepResult payoff_sweep(const GameDefinition& game, const std::optional<Entangler>& entangler,
                                const SweepSpec& spec, unsigned threads = 0) {
  std::size_t total = 1;
  for (const auto& ax : spec.axes) {
    if (ax.values.empty()) throw ValidationError("sweep axis " + ax.name() + " has an empty grid");
    if (total > kMaxSweepPoints / ax.values.size()) {
      throw ValidationError("sweep grid exceeds " + std::to_string(kMaxSweepPoints) + " points");
    }
    total *= ax.values.size();
  }

  SweepResult result;
  for (const auto& ax : spec.axes) result.axis_names.push_back(ax.name());
  result.records.resize(total);

  auto evaluate = [&](std::size_t flat) {
    SweepRow row;
    row.coordinates.resize(spec.axes.size());
    Strategy a = spec.alice, b = spec.bob;
    std::size_t rem = flat;
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& ax = spec.axes[k];
      const double v = ax.values[rem % ax.values.size()];
      rem /= ax.values.size();
      row.coordinates[k] = v;
      set_parameter(ax.player == Player::Alice ? a : b, ax.param, v);
    }
    const auto out = play(game, entangler, a, b);
    row.alice_payoff = out.alice_payoff;
    row.bob_payoff = out.bob_payoff;
    result.records[flat] = std::move(row);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, total / 256)));
  if (threads <= 1) {
    for (std::size_t k = 0; k < total; ++k) evaluate(k);
    return result;
  }

  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = t; k < total; k += threads) evaluate(k);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

}  // namespace qgame
