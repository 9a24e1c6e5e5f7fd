#pragma once

// Small dense complex linear algebra. Everything here is sized for joint
// spaces of at most a few dozen dimensions, so all storage is dense and
// row-major and no operation tries to be clever about cache behaviour.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qgame/error.hpp"

namespace qgame {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

namespace tol {
// unitarity, commutators, Hermiticity
inline constexpr double kStructural = 1e-12;
// norms, traces, probabilities, entropies
inline constexpr double kProbabilistic = 1e-9;
}  // namespace tol

enum class Player { Alice, Bob };

inline const char* to_string(Player p) { return p == Player::Alice ? "alice" : "bob"; }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

class ComplexMatrix {
 public:
  // rows x cols of zeros
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    check_shape();
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_shape();
    if (data_.size() != rows_ * cols_) {
      throw ValidationError("matrix entry count " + std::to_string(data_.size()) + " does not match shape " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (const auto& z : data_) {
      if (!is_finite(z)) throw ValidationError("matrix entries must be finite");
    }
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    check_shape();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw ValidationError("ragged matrix literal");
      for (const auto& z : row) {
        if (!is_finite(z)) throw ValidationError("matrix entries must be finite");
        data_.push_back(z);
      }
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return data_; }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

 private:
  void check_shape() const {
    if (rows_ == 0 || cols_ == 0) throw ValidationError("matrix dimensions must be positive");
  }
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw ValidationError(std::string("shape mismatch in '") + op + "': " + shape() + " vs " + o.shape());
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

// Pure state. The constructor enforces unit norm to kProbabilistic.
class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw ValidationError("state dimension must be positive");
    double norm2 = 0.0;
    for (const auto& z : amps_) {
      if (!is_finite(z)) throw ValidationError("state amplitudes must be finite");
      norm2 += std::norm(z);
    }
    if (std::abs(norm2 - 1.0) > tol::kProbabilistic) {
      std::ostringstream os;
      os << "state norm^2 is " << norm2 << ", expected 1 within " << tol::kProbabilistic;
      throw ValidationError(os.str());
    }
  }

  static StateVector basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
      throw ValidationError("basis index " + std::to_string(index) + " out of range for dimension " +
                            std::to_string(dim));
    }
    std::vector<Complex> a(dim);
    a[index] = 1.0;
    return StateVector(std::move(a));
  }

  std::size_t dim() const { return amps_.size(); }
  Complex operator[](std::size_t k) const { return amps_[k]; }
  std::span<const Complex> amplitudes() const { return amps_; }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(), [](Complex z) { return std::norm(z); });
    return p;
  }

 private:
  std::vector<Complex> amps_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ValidationError("matmul dimension mismatch: " + a.shape() + " * " + b.shape());
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

// (a ⊗ b)[b.rows*i + k][b.cols*j + l] = a[i][j] * b[k][l]; the left factor is
// Alice's, so joint index = local_dim * alice + bob.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(b.rows() * i + k, b.cols() * j + l) = aij * b(k, l);
    }
  return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("shape mismatch: " + a.shape() + " vs " + b.shape());
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

// max |(a a†) - I|
inline double unitarity_residual(const ComplexMatrix& a) {
  if (!a.is_square()) return INFINITY;
  return max_abs_diff(a * adjoint(a), ComplexMatrix::identity(a.rows()));
}

inline bool is_unitary(const ComplexMatrix& a, double tolerance = tol::kStructural) {
  return a.is_square() && unitarity_residual(a) <= tolerance;
}

inline double hermiticity_residual(const ComplexMatrix& a) {
  if (!a.is_square()) return INFINITY;
  return max_abs_diff(a, adjoint(a));
}

// e^{i t h} for a Hermitian involution h: cos(t) I + i sin(t) h.
inline ComplexMatrix expm_involution(const ComplexMatrix& h, double t) {
  if (!h.is_square()) throw ValidationError("expm_involution needs a square matrix, got " + h.shape());
  const double herm = hermiticity_residual(h);
  if (herm > tol::kStructural) {
    std::ostringstream os;
    os << "expm_involution: generator is not Hermitian (max |h - h^dagger| = " << herm << ")";
    throw ValidationError(os.str());
  }
  const auto eye = ComplexMatrix::identity(h.rows());
  const double invol = max_abs_diff(h * h, eye);
  if (invol > tol::kStructural) {
    std::ostringstream os;
    os << "expm_involution: generator is not an involution (max |h*h - I| = " << invol << ")";
    throw ValidationError(os.str());
  }
  return std::cos(t) * eye + (kI * std::sin(t)) * h;
}

// m |s>. No renormalization; a non-norm-preserving m is rejected by the
// StateVector invariant.
inline StateVector apply(const ComplexMatrix& m, const StateVector& s) {
  if (m.cols() != s.dim()) {
    throw ValidationError("apply dimension mismatch: matrix " + m.shape() + " on state of dimension " +
                          std::to_string(s.dim()));
  }
  std::vector<Complex> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * s[j];
    out[i] = acc;
  }
  return StateVector(std::move(out));
}

// Integer square root of a joint dimension, or throws.
inline std::size_t local_dimension(std::size_t joint_dim) {
  auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(joint_dim))));
  if (d * d != joint_dim) {
    throw ValidationError("joint dimension " + std::to_string(joint_dim) + " is not a perfect square");
  }
  return d;
}

inline ComplexMatrix partial_trace(const StateVector& s, std::size_t local_dim, Player keep) {
  if (local_dim == 0 || local_dim * local_dim != s.dim()) {
    throw ValidationError("partial_trace: state dimension " + std::to_string(s.dim()) + " is not " +
                          std::to_string(local_dim) + "^2");
  }
  const std::size_t d = local_dim;
  ComplexMatrix rho(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      Complex acc{};
      for (std::size_t t = 0; t < d; ++t) {
        acc += keep == Player::Alice ? s[d * r + t] * std::conj(s[d * c + t])
                                     : s[d * t + r] * std::conj(s[d * t + c]);
      }
      rho(r, c) = acc;
    }
  return rho;
}

// Max absolute entry of ab - ba.
inline double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("commutator_norm needs equal square shapes, got " + a.shape() + " and " + b.shape());
  }
  return max_abs_diff(a * b, b * a);
}

// Ascending eigenvalues of a Hermitian matrix.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  if (!h.is_square()) throw ValidationError("hermitian_eigenvalues needs a square matrix, got " + h.shape());
  Eigen::MatrixXcd m(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFault("Hermitian eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

// Smallest max-entry distance between a and e^{iγ} b over global phases γ,
// together with the aligning phase.
struct PhaseAlignment {
  double residual;
  double phase;
};

inline PhaseAlignment compare_up_to_global_phase(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("shape mismatch: " + a.shape() + " vs " + b.shape());
  }
  // <b, a> picks the least-squares phase; for genuinely phase-equal matrices
  // this is exact.
  Complex overlap{};
  for (std::size_t k = 0; k < a.entries().size(); ++k) overlap += std::conj(b.entries()[k]) * a.entries()[k];
  const double phase = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
  return {max_abs_diff(a, std::polar(1.0, phase) * b), phase};
}

}  // namespace qgame
