#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qgame/error.hpp"

namespace qgame {

using RealMatrix = std::vector<std::vector<double>>;

/// Payoff tables for a two-player game with n strategies each. alice[i][j] is
/// Alice's payoff when Alice's outcome is local index i and Bob's is j.
class PayoffTable {
 public:
  PayoffTable(RealMatrix alice, RealMatrix bob, bool zero_sum = false)
      : alice_(std::move(alice)), bob_(std::move(bob)), zero_sum_(zero_sum) {
    n_ = alice_.size();
    auto check = [this](const RealMatrix& m, const char* who) {
      if (m.size() != n_) throw ValidationError(std::string(who) + " payoff table has wrong row count");
      for (const auto& row : m) {
        if (row.size() != n_) throw ValidationError(std::string(who) + " payoff table is not square");
        for (double v : row)
          if (!std::isfinite(v)) throw ValidationError(std::string(who) + " payoff table has a non-finite entry");
      }
    };
    check(alice_, "alice");
    check(bob_, "bob");
    if (zero_sum_) {
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
          if (alice_[i][j] + bob_[i][j] != 0.0) {
            std::ostringstream os;
            os << "table flagged zero-sum but alice+bob = " << alice_[i][j] + bob_[i][j] << " at (" << i << ","
               << j << ")";
            throw ValidationError(os.str());
          }
    }
  }

  std::size_t n() const { return n_; }
  double alice(std::size_t i, std::size_t j) const { return alice_[i][j]; }
  double bob(std::size_t i, std::size_t j) const { return bob_[i][j]; }
  const RealMatrix& alice_table() const { return alice_; }
  const RealMatrix& bob_table() const { return bob_; }
  bool zero_sum() const { return zero_sum_; }

 private:
  RealMatrix alice_;
  RealMatrix bob_;
  bool zero_sum_;
  std::size_t n_ = 0;
};

class GameDefinition {
 public:
  GameDefinition(PayoffTable payoffs, std::size_t initial_index = 0, std::string name = "custom")
      : payoffs_(std::move(payoffs)), initial_index_(initial_index), name_(std::move(name)) {
    if (payoffs_.n() < 2) throw ValidationError("a game needs at least 2 strategies per player");
    if (initial_index_ >= payoffs_.n() * payoffs_.n()) {
      throw ValidationError("initial_index " + std::to_string(initial_index_) + " out of range for n=" +
                            std::to_string(payoffs_.n()));
    }
  }

  std::size_t n() const { return payoffs_.n(); }
  const PayoffTable& payoffs() const { return payoffs_; }
  std::size_t initial_index() const { return initial_index_; }
  const std::string& name() const { return name_; }

 private:
  PayoffTable payoffs_;
  std::size_t initial_index_;
  std::string name_;
};

// Rock-scissors-paper in order (R, S, P); win +1, loss -1, tie 0.
inline GameDefinition rsp() {
  RealMatrix alice = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
  RealMatrix bob = {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}};
  return GameDefinition(PayoffTable(std::move(alice), std::move(bob), true), 0, "rsp");
}

inline constexpr const char* kRspLabels[] = {"R", "S", "P"};

// Throws unless p is a length-n probability vector to kProbabilistic.
inline void validate_distribution(const std::vector<double>& p, std::size_t n, const std::string& name) {
  if (p.size() != n) {
    throw ValidationError(name + ": distribution has length " + std::to_string(p.size()) + ", expected " +
                          std::to_string(n));
  }
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(name + ": distribution has a negative or non-finite entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << name << ": distribution sums to " << total << ", expected 1 within 1e-9";
    throw ValidationError(os.str());
  }
}

struct PayoffPair {
  double alice;
  double bob;
};

inline PayoffPair classical_expected_payoff(const GameDefinition& game, const std::vector<double>& dist_a,
                                            const std::vector<double>& dist_b) {
  validate_distribution(dist_a, game.n(), "dist_a");
  validate_distribution(dist_b, game.n(), "dist_b");
  PayoffPair out{0.0, 0.0};
  for (std::size_t i = 0; i < game.n(); ++i)
    for (std::size_t j = 0; j < game.n(); ++j) {
      const double w = dist_a[i] * dist_b[j];
      out.alice += w * game.payoffs().alice(i, j);
      out.bob += w * game.payoffs().bob(i, j);
    }
  return out;
}

}  // namespace qgame
