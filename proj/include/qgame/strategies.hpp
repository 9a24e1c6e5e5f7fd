#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qgame/cmatrix.hpp"
#include "qgame/error.hpp"
#include "qgame/games.hpp"

namespace qgame {

// Cyclic shift S with S e_j = e_{j+1 mod n}; U_i = S^{i-1}. For n=3 these are
// U1, U2, U3 of the three-strategy game; for n=2 they are N and F.
inline ComplexMatrix classical_unitary(std::size_t i, std::size_t n) {
  if (n < 2) throw ValidationError("classical_unitary needs n >= 2");
  if (i < 1 || i > n) {
    throw ValidationError("classical_unitary index " + std::to_string(i) + " out of range [1," + std::to_string(n) +
                          "]");
  }
  ComplexMatrix m(n, n);
  for (std::size_t col = 0; col < n; ++col) m((col + i - 1) % n, col) = 1.0;
  return m;
}

inline ComplexMatrix parametric2_unitary(double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return ComplexMatrix{{std::polar(1.0, phi) * c, -s}, {s, std::polar(1.0, -phi) * c}};
}

// Hermitian unitary generators for the three-strategy parametric play.
inline ComplexMatrix h1() { return ComplexMatrix{{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}; }
inline ComplexMatrix h2() { return ComplexMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}; }

// (2/3) * ones - I. Commutes with every parametric3 play.
inline ComplexMatrix f_double_prime() {
  const double a = -1.0 / 3.0, b = 2.0 / 3.0;
  return ComplexMatrix{{a, b, b}, {b, a, b}, {b, b, a}};
}

// Closed form of e^{ixH1} e^{iyH2}.
inline ComplexMatrix parametric3_closed_form(double x, double y) {
  const double cx = std::cos(x), sx = std::sin(x), cy = std::cos(y), sy = std::sin(y);
  const Complex ex = std::polar(1.0, x), ey = std::polar(1.0, y);
  return ComplexMatrix{{ex * cy, kI * ex * sy, 0.0},
                       {kI * sy * cx, cx * cy, kI * ey * sx},
                       {-sy * sx, kI * sx * cy, ey * cx}};
}

// Built from the exponentials and cross-checked against the closed form.
inline ComplexMatrix parametric3_unitary(double x, double y) {
  ComplexMatrix u = expm_involution(h1(), x) * expm_involution(h2(), y);
  const double diff = max_abs_diff(u, parametric3_closed_form(x, y));
  if (diff > tol::kStructural) {
    std::ostringstream os;
    os << "parametric3_unitary: exponential and closed form disagree by " << diff << " at x=" << x << ", y=" << y;
    throw NumericalFault(os.str());
  }
  return u;
}

struct ClassicalPure {
  std::size_t index;  // 1-based
};

struct ClassicalMixed {
  std::vector<double> probabilities;
};

struct Parametric2 {
  double theta;
  double phi = 0.0;
};

struct Parametric3 {
  double x;
  double y;
};

struct UnitaryPlay {
  ComplexMatrix matrix;
};

using Strategy = std::variant<ClassicalPure, ClassicalMixed, Parametric2, Parametric3, UnitaryPlay>;

struct WeightedUnitary {
  double probability;
  ComplexMatrix unitary;
};

/// Realizes a strategy as a distribution over unitaries for an n-strategy
/// game. Mixed classical strategies expand into one entry per pure play;
/// every other variant is a single unitary with probability 1.
inline std::vector<WeightedUnitary> realize(const Strategy& strategy, std::size_t n) {
  return std::visit(
      [n](const auto& s) -> std::vector<WeightedUnitary> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ClassicalPure>) {
          return {{1.0, classical_unitary(s.index, n)}};
        } else if constexpr (std::is_same_v<T, ClassicalMixed>) {
          validate_distribution(s.probabilities, n, "mixed strategy");
          std::vector<WeightedUnitary> out;
          for (std::size_t i = 0; i < n; ++i) out.push_back({s.probabilities[i], classical_unitary(i + 1, n)});
          return out;
        } else if constexpr (std::is_same_v<T, Parametric2>) {
          if (n != 2) throw ValidationError("parametric (theta, phi) strategy needs n=2, got n=" + std::to_string(n));
          if (!std::isfinite(s.theta) || !std::isfinite(s.phi)) throw ValidationError("strategy angles must be finite");
          return {{1.0, parametric2_unitary(s.theta, s.phi)}};
        } else if constexpr (std::is_same_v<T, Parametric3>) {
          if (n != 3) throw ValidationError("parametric (x, y) strategy needs n=3, got n=" + std::to_string(n));
          if (!std::isfinite(s.x) || !std::isfinite(s.y)) throw ValidationError("strategy angles must be finite");
          return {{1.0, parametric3_unitary(s.x, s.y)}};
        } else {
          if (s.matrix.rows() != n || s.matrix.cols() != n) {
            throw ValidationError("unitary strategy is " + s.matrix.shape() + ", game needs " + std::to_string(n) +
                                  "x" + std::to_string(n));
          }
          const double r = unitarity_residual(s.matrix);
          if (r > tol::kStructural) {
            std::ostringstream os;
            os << "unitary strategy fails the unitarity check (max |U U^dagger - I| = " << r << ")";
            throw ValidationError(os.str());
          }
          return {{1.0, s.matrix}};
        }
      },
      strategy);
}

inline std::string describe(const Strategy& strategy) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, ClassicalPure>) {
          os << "pure(" << s.index << ")";
        } else if constexpr (std::is_same_v<T, ClassicalMixed>) {
          os << "mixed(";
          for (std::size_t i = 0; i < s.probabilities.size(); ++i) os << (i ? "," : "") << s.probabilities[i];
          os << ")";
        } else if constexpr (std::is_same_v<T, Parametric2>) {
          os << "theta=" << s.theta << ",phi=" << s.phi;
        } else if constexpr (std::is_same_v<T, Parametric3>) {
          os << "x=" << s.x << ",y=" << s.y;
        } else {
          os << "unitary(" << s.matrix.shape() << ")";
        }
        return os.str();
      },
      strategy);
}

}  // namespace qgame
