#include "qgame/entanglers.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "qgame/protocol.hpp"
#include "test_util.hpp"

using namespace qgame;
using qgame::testing::MatrixNear;

namespace {

// Direct evaluation of the two unitarity conditions, independent of the
// library's residual helpers.
double oracle_norm_residual(const std::vector<Complex>& a) {
  double s = 0;
  for (auto z : a) s += z.real() * z.real() + z.imag() * z.imag();
  return std::abs(s - 1);
}

double oracle_autocorrelation_residual(const std::vector<Complex>& a) {
  const std::size_t n = a.size();
  double worst = 0;
  for (std::size_t s = 1; s < n; ++s) {
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) acc += a[(s + j) % n] * std::conj(a[j]);
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

std::vector<double> random_phases(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::vector<double> p(n);
  for (auto& x : p) x = u(rng);
  return p;
}

const std::vector<Complex> kRspAlphas = {-1.0 / 3, 2.0 / 3, 2.0 / 3};

}  // namespace

TEST(entanglers, ewl2_variants) {
  const double r = 1.0 / std::numbers::sqrt2;
  for (auto v : {Ewl2Variant::Plain, Ewl2Variant::Prime}) EXPECT_LT(unitarity_residual(ewl2(v).matrix()), 1e-12);

  // Brute force on (10)⊗(10): N⊗N keeps index 0, F⊗F sends it to index 3.
  const auto psi = apply(ewl2().matrix(), StateVector::basis(4, 0));
  EXPECT_NEAR(std::abs(psi[0] - Complex(r)), 0, 1e-15);
  EXPECT_NEAR(std::abs(psi[3] - kI * r), 0, 1e-15);
  EXPECT_EQ(psi[1], Complex{});
  EXPECT_EQ(psi[2], Complex{});

  const auto n = classical_unitary(1, 2), f = classical_unitary(2, 2);
  const auto j = ewl2().matrix();
  EXPECT_LT(commutator_norm(j, kron(n, f)), 1e-12);
  EXPECT_LT(commutator_norm(j, kron(f, n)), 1e-12);
  EXPECT_GT(commutator_norm(j, kron(parametric2_unitary(0.4, 0.3), n)), 1e-3);

  const auto fp = f_prime();
  EXPECT_TRUE(MatrixNear(ewl2(Ewl2Variant::Prime).matrix(), r * kron(n, n) + (kI * r) * kron(fp, fp), 0));
}

TEST(entanglers, cyclic_entangler_reproduces_printed_matrix) {
  const double a = -1.0 / 3, b = 2.0 / 3;
  const ComplexMatrix printed{
      {a, 0, 0, 0, b, 0, 0, 0, b}, {0, a, 0, 0, 0, b, b, 0, 0}, {0, 0, a, b, 0, 0, 0, b, 0},
      {0, 0, b, a, 0, 0, 0, b, 0}, {b, 0, 0, 0, a, 0, 0, 0, b}, {0, b, 0, 0, 0, a, b, 0, 0},
      {0, b, 0, 0, 0, b, a, 0, 0}, {0, 0, b, b, 0, 0, 0, a, 0}, {b, 0, 0, 0, b, 0, 0, 0, a},
  };
  const auto j = cyclic_entangler(EntanglerCoefficients(kRspAlphas));
  EXPECT_TRUE(MatrixNear(j.matrix(), printed, 0));
  EXPECT_EQ(j.kind(), EntanglerKind::Cyclic);
}

TEST(entanglers, cyclic_entangler_special_cases) {
  EXPECT_TRUE(MatrixNear(cyclic_entangler(EntanglerCoefficients({1, 0, 0})).matrix(), ComplexMatrix::identity(9), 0));
  const double r = 1.0 / std::numbers::sqrt2;
  EXPECT_TRUE(MatrixNear(cyclic_entangler(EntanglerCoefficients({r, kI * r})).matrix(), ewl2().matrix(), 1e-15));
}

TEST(entanglers, coefficient_validation_names_the_violated_condition) {
  try {
    EntanglerCoefficients({0.5, 0.5, 0.5});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("normalization"), std::string::npos);
  }
  const double s = 1.0 / std::sqrt(3.0);
  try {
    EntanglerCoefficients({s, s, s});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("autocorrelation"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("residual 1"), std::string::npos);
  }
}

TEST(entanglers, cyclic_entangler_commutes_with_every_classical_pair) {
  std::mt19937_64 rng(21);
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto j = cyclic_entangler(solve_alphas(n, random_phases(n, rng)));
    for (std::size_t a = 1; a <= n; ++a)
      for (std::size_t b = 1; b <= n; ++b)
        EXPECT_LT(commutator_norm(j.matrix(), kron(classical_unitary(a, n), classical_unitary(b, n))), 1e-12);
  }
}

// The letter pattern below is the generic three-strategy matrix as printed;
// the library builds it as a literal table, so comparing against the cyclic
// sum checks the two routes against each other.
TEST(entanglers, generic_jhat_layout_matches_cyclic_sum) {
  EXPECT_TRUE(MatrixNear(generic_jhat(-1.0 / 3, 2.0 / 3, 2.0 / 3).matrix(),
                         cyclic_entangler(EntanglerCoefficients(kRspAlphas)).matrix(), 0));
  EXPECT_TRUE(MatrixNear(generic_jhat(1, 0, 0).matrix(), ComplexMatrix::identity(9), 0));

  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = solve_alphas(3, random_phases(3, rng));
    const auto& al = c.alphas();
    const auto jhat = generic_jhat(al[0], al[1], al[2]);
    EXPECT_LT(unitarity_residual(jhat.matrix()), 1e-12);
    EXPECT_TRUE(MatrixNear(jhat.matrix(), cyclic_entangler(c).matrix(), 1e-15));
  }
  EXPECT_THROW(generic_jhat(1, 1, 0), ValidationError);
}

TEST(entanglers, generic_jhat_maps_basis_states_onto_diagonal_shifts) {
  std::mt19937_64 rng(34);
  const auto c = solve_alphas(3, random_phases(3, rng));
  const auto jhat = generic_jhat(c.alphas()[0], c.alphas()[1], c.alphas()[2]);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      const auto psi = apply(jhat.matrix(), StateVector::basis(9, 3 * a + b));
      for (std::size_t k = 0; k < 9; ++k) {
        const std::size_t ka = k / 3, kb = k % 3;
        const bool same_shift = (ka + 3 - a) % 3 == (kb + 3 - b) % 3;
        if (!same_shift) {
          EXPECT_EQ(psi[k], Complex{}) << "basis " << 3 * a + b << " leaks into " << k;
        }
      }
    }
}

TEST(entanglers, solve_alphas_reproduces_known_solutions) {
  const auto c3 = solve_alphas(3, {0, std::numbers::pi, std::numbers::pi});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(c3.alphas()[k] - kRspAlphas[k]), 0, 1e-15);

  const auto c2 = solve_alphas(2, {0, std::numbers::pi / 2});
  EXPECT_NEAR(std::abs(c2.alphas()[0] - Complex(0.5, 0.5)), 0, 1e-15);
  EXPECT_NEAR(std::abs(c2.alphas()[1] - Complex(0.5, -0.5)), 0, 1e-15);
  EXPECT_LT(oracle_norm_residual(c2.alphas()), 1e-15);
  EXPECT_LT(oracle_autocorrelation_residual(c2.alphas()), 1e-15);
  // These phases give the adjoint of the plain two-strategy entangler up to a
  // global phase; the opposite quadrature gives the entangler itself.
  const auto j2 = cyclic_entangler(c2).matrix();
  EXPECT_LT(compare_up_to_global_phase(j2, adjoint(ewl2().matrix())).residual, 1e-15);
  EXPECT_GT(compare_up_to_global_phase(j2, ewl2().matrix()).residual, 0.5);
  const auto j2b = cyclic_entangler(solve_alphas(2, {0, -std::numbers::pi / 2})).matrix();
  EXPECT_LT(compare_up_to_global_phase(j2b, ewl2().matrix()).residual, 1e-15);
}

TEST(entanglers, solve_alphas_satisfies_unitarity_conditions) {
  std::mt19937_64 rng(55);
  for (std::size_t n = 2; n <= 5; ++n)
    for (int trial = 0; trial < 25; ++trial) {
      const auto phases = random_phases(n, rng);
      const auto c = solve_alphas(n, phases);
      EXPECT_LT(oracle_norm_residual(c.alphas()), 1e-9);
      EXPECT_LT(oracle_autocorrelation_residual(c.alphas()), 1e-9);
      EXPECT_LT(unitarity_residual(cyclic_entangler(c).matrix()), 1e-12);

      // Spectrum round trip: unit modulus with the requested phases.
      const auto spec = coefficient_spectrum(c.alphas());
      for (std::size_t k = 0; k < n; ++k) {
        EXPECT_NEAR(std::abs(spec[k]), 1.0, 1e-9);
        EXPECT_NEAR(std::abs(spec[k] - std::polar(1.0, phases[k])), 0, 1e-12);
      }
    }
  EXPECT_THROW(solve_alphas(1, {0}), ValidationError);
  EXPECT_THROW(solve_alphas(3, {0, 1}), ValidationError);
}

TEST(entanglers, jbar3) {
  const auto j = jbar3();
  EXPECT_TRUE(MatrixNear(j.matrix(), jbar3_closed_form(), 1e-12));
  EXPECT_LT(unitarity_residual(j.matrix()), 1e-12);
  const auto fpp = f_double_prime();
  const double r = 1.0 / std::numbers::sqrt2;
  EXPECT_TRUE(MatrixNear(jbar3_closed_form(), r * ComplexMatrix::identity(9) - (kI * r) * kron(fpp, fpp), 0));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> a(-3.2, 3.2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto uu = kron(parametric3_unitary(a(rng), a(rng)), parametric3_unitary(a(rng), a(rng)));
    EXPECT_LT(commutator_norm(j.matrix(), uu), 1e-12);
  }
}

// J̄|11⟩ = (e0⊗e0 − i v⊗v)/√2 with v = F''e0 has Schmidt rank 2, so its
// base-3 entropy is below log_3 2 and the state is not maximally entangled.
// Oracle: for ψ = Σ c_k x_k⊗x_k the nonzero reduced eigenvalues are those of
// D·G with D_kl = c_k conj(c_l) G_lk and G the Gram matrix of {x_k}.
TEST(entanglers, jbar3_entanglement_of_the_initial_state) {
  const double overlap = -1.0 / 3;  // <e0|v>
  const Complex c0 = 1.0 / std::numbers::sqrt2, c1 = -kI / std::numbers::sqrt2;
  const Complex g[2][2] = {{1.0, overlap}, {overlap, 1.0}};
  const Complex c[2] = {c0, c1};
  Complex d[2][2], dg[2][2];
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) d[k][l] = c[k] * std::conj(c[l]) * g[l][k];
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) dg[k][l] = d[k][0] * g[0][l] + d[k][1] * g[1][l];
  const double tr = (dg[0][0] + dg[1][1]).real();
  const double det = (dg[0][0] * dg[1][1] - dg[0][1] * dg[1][0]).real();
  const double disc = std::sqrt(tr * tr - 4 * det);
  const double l1 = (tr + disc) / 2, l2 = (tr - disc) / 2;
  const double oracle = -(l1 * std::log(l1) + l2 * std::log(l2)) / std::log(3.0);
  EXPECT_NEAR(oracle, 0.5317527778416867, 1e-12);

  const auto psi = apply(jbar3().matrix(), StateVector::basis(9, 0));
  const double e = entanglement_entropy(psi, 3);
  EXPECT_NEAR(e, oracle, 1e-9);
  EXPECT_LT(e, std::log(2.0) / std::log(3.0));
}

TEST(entanglers, entangler_rejects_non_unitary_matrices) {
  EXPECT_THROW(Entangler(2.0 * ComplexMatrix::identity(4), EntanglerKind::Custom), ValidationError);
  EXPECT_THROW(Entangler(ComplexMatrix::identity(3), EntanglerKind::Custom), ValidationError);
}
