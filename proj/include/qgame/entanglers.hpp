#pragma once

// Entanglement operators for the EWL scheme.
//
// Every entangler here is a joint unitary J on C^n ⊗ C^n that commutes with
// the sanctioned product plays, so classical play passes through J†(·)J
// untouched while arbitrary local unitaries see genuine entanglement.
//
// The cyclic family J = Σ α_i U_i⊗U_i is unitary exactly when the α sequence
// has unit norm and zero cyclic autocorrelation at every nonzero shift. A
// sequence whose DFT has constant modulus 1 satisfies both, which is how
// solve_alphas manufactures solutions; EntanglerCoefficients re-checks the
// two conditions directly on whatever it is handed.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qgame/cmatrix.hpp"
#include "qgame/error.hpp"
#include "qgame/strategies.hpp"

namespace qgame {

// |Σ|α_k|² - 1|
inline double normalization_residual(const std::vector<Complex>& alphas) {
  double total = 0.0;
  for (const auto& a : alphas) total += std::norm(a);
  return std::abs(total - 1.0);
}

// Σ_j α_{(s+j) mod n} conj(α_j)
inline Complex cyclic_autocorrelation(const std::vector<Complex>& alphas, std::size_t shift) {
  const std::size_t n = alphas.size();
  Complex acc{};
  for (std::size_t j = 0; j < n; ++j) acc += alphas[(shift + j) % n] * std::conj(alphas[j]);
  return acc;
}

// max over shifts s in [1, n-1] of the autocorrelation modulus
inline double autocorrelation_residual(const std::vector<Complex>& alphas) {
  double worst = 0.0;
  for (std::size_t s = 1; s < alphas.size(); ++s) worst = std::max(worst, std::abs(cyclic_autocorrelation(alphas, s)));
  return worst;
}

/// Coefficients α_1..α_n of a cyclic entangler, validated on construction.
class EntanglerCoefficients {
 public:
  explicit EntanglerCoefficients(std::vector<Complex> alphas) : alphas_(std::move(alphas)) {
    if (alphas_.size() < 2) throw ValidationError("entangler coefficients need n >= 2");
    for (const auto& a : alphas_)
      if (!is_finite(a)) throw ValidationError("entangler coefficients must be finite");
    const double norm_res = normalization_residual(alphas_);
    if (norm_res > tol::kProbabilistic) {
      std::ostringstream os;
      os << "entangler coefficients violate normalization sum|alpha|^2 = 1: residual " << norm_res;
      throw ValidationError(os.str());
    }
    const double auto_res = autocorrelation_residual(alphas_);
    if (auto_res > tol::kProbabilistic) {
      std::ostringstream os;
      os << "entangler coefficients violate zero cyclic autocorrelation: residual " << auto_res;
      throw ValidationError(os.str());
    }
  }

  std::size_t n() const { return alphas_.size(); }
  const std::vector<Complex>& alphas() const { return alphas_; }

 private:
  std::vector<Complex> alphas_;
};

enum class EntanglerKind { Ewl2, Ewl2Prime, Cyclic, Jbar, Custom };

inline const char* to_string(EntanglerKind k) {
  switch (k) {
    case EntanglerKind::Ewl2: return "ewl2";
    case EntanglerKind::Ewl2Prime: return "ewl2-prime";
    case EntanglerKind::Cyclic: return "cyclic";
    case EntanglerKind::Jbar: return "jbar3";
    case EntanglerKind::Custom: return "custom";
  }
  return "?";
}

class Entangler {
 public:
  Entangler(ComplexMatrix matrix, EntanglerKind kind) : matrix_(std::move(matrix)), kind_(kind) {
    const double r = unitarity_residual(matrix_);
    if (r > tol::kStructural) {
      std::ostringstream os;
      os << to_string(kind_) << " entangler is not unitary (max |J J^dagger - I| = " << r << ")";
      throw ValidationError(os.str());
    }
    local_dim_ = local_dimension(matrix_.rows());
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  EntanglerKind kind() const { return kind_; }
  std::size_t local_dim() const { return local_dim_; }

 private:
  ComplexMatrix matrix_;
  EntanglerKind kind_;
  std::size_t local_dim_;
};

enum class Ewl2Variant { Plain, Prime };

// F' = [[0,-1],[1,0]]
inline ComplexMatrix f_prime() { return ComplexMatrix{{0, -1}, {1, 0}}; }

inline Entangler ewl2(Ewl2Variant variant = Ewl2Variant::Plain) {
  const auto nn = kron(classical_unitary(1, 2), classical_unitary(1, 2));
  const auto flip = variant == Ewl2Variant::Plain ? classical_unitary(2, 2) : f_prime();
  const double r = 1.0 / std::numbers::sqrt2;
  return Entangler(r * nn + (kI * r) * kron(flip, flip),
                   variant == Ewl2Variant::Plain ? EntanglerKind::Ewl2 : EntanglerKind::Ewl2Prime);
}

inline Entangler cyclic_entangler(const EntanglerCoefficients& coeffs) {
  const std::size_t n = coeffs.n();
  ComplexMatrix j(n * n, n * n);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto u = classical_unitary(i, n);
    j += coeffs.alphas()[i - 1] * kron(u, u);
  }
  return Entangler(std::move(j), EntanglerKind::Cyclic);
}

// The 9x9 generic three-strategy entangler written out entry by entry. Each
// row holds a on the diagonal and b, c where U2⊗U2 and U3⊗U3 place their ones.
inline Entangler generic_jhat(Complex a, Complex b, Complex c) {
  EntanglerCoefficients checked({a, b, c});
  // 0 = zero, 1 = a, 2 = b, 3 = c
  static constexpr int kLayout[9][9] = {
      {1, 0, 0, 0, 3, 0, 0, 0, 2}, {0, 1, 0, 0, 0, 3, 2, 0, 0}, {0, 0, 1, 3, 0, 0, 0, 2, 0},
      {0, 0, 2, 1, 0, 0, 0, 3, 0}, {2, 0, 0, 0, 1, 0, 0, 0, 3}, {0, 2, 0, 0, 0, 1, 3, 0, 0},
      {0, 3, 0, 0, 0, 2, 1, 0, 0}, {0, 0, 3, 2, 0, 0, 0, 1, 0}, {3, 0, 0, 0, 2, 0, 0, 0, 1},
  };
  const Complex letters[4] = {0.0, a, b, c};
  ComplexMatrix j(9, 9);
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t col = 0; col < 9; ++col) j(r, col) = letters[kLayout[r][col]];
  return Entangler(std::move(j), EntanglerKind::Cyclic);
}

/// Flat-spectrum solution of the cyclic unitarity conditions:
///   α_j = (1/n) Σ_k e^{iφ_k} ω^{jk},  ω = e^{2πi/n}.
/// The result is re-validated by EntanglerCoefficients.
inline EntanglerCoefficients solve_alphas(std::size_t n, const std::vector<double>& spectrum_phases) {
  if (n < 2) throw ValidationError("solve_alphas needs n >= 2");
  if (spectrum_phases.size() != n) {
    throw ValidationError("solve_alphas needs " + std::to_string(n) + " phases, got " +
                          std::to_string(spectrum_phases.size()));
  }
  for (double p : spectrum_phases)
    if (!std::isfinite(p)) throw ValidationError("spectrum phases must be finite");
  std::vector<Complex> alphas(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc{};
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += std::polar(1.0, spectrum_phases[k] + angle);
    }
    alphas[j] = acc / static_cast<double>(n);
  }
  return EntanglerCoefficients(std::move(alphas));
}

// A_k = Σ_j α_j ω^{-jk}; inverse of the construction in solve_alphas.
inline std::vector<Complex> coefficient_spectrum(const std::vector<Complex>& alphas) {
  const std::size_t n = alphas.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      out[k] += alphas[j] * std::polar(1.0, angle);
    }
  return out;
}

inline ComplexMatrix jbar3_closed_form() {
  const auto ff = kron(f_double_prime(), f_double_prime());
  const double r = 1.0 / std::numbers::sqrt2;
  return r * ComplexMatrix::identity(9) - (kI * r) * ff;
}

// e^{-iπ/4 F''⊗F''}, checked against its closed form.
inline Entangler jbar3() {
  auto j = expm_involution(kron(f_double_prime(), f_double_prime()), -std::numbers::pi / 4.0);
  const double diff = max_abs_diff(j, jbar3_closed_form());
  if (diff > tol::kStructural) {
    std::ostringstream os;
    os << "jbar3: exponential and closed form disagree by " << diff;
    throw NumericalFault(os.str());
  }
  return Entangler(std::move(j), EntanglerKind::Jbar);
}

// Largest [J, U_i⊗U_j] over all ordered classical pairs.
inline double max_classical_commutator(const Entangler& e) {
  const std::size_t n = e.local_dim();
  double worst = 0.0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      worst = std::max(worst, commutator_norm(e.matrix(), kron(classical_unitary(i, n), classical_unitary(j, n))));
  return worst;
}

}  // namespace qgame
