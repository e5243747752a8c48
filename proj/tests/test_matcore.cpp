#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nmrdiscord/errors.hpp"
#include "nmrdiscord/matcore.hpp"
#include "nmrdiscord/states.hpp"
#include "support.hpp"

using namespace nmrdiscord;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("validate_density", "[matcore]") {
  SECTION("accepts a valid state and stores its spectrum") {
    const DensityMatrix rho = validate_density(identity(4) / 4.0);
    REQUIRE(rho.dim() == 4);
    REQUIRE(rho.trace() == Approx(1.0));
    for (int i = 0; i < 4; ++i) REQUIRE(rho.spectrum()(i) == Approx(0.25));
  }
  SECTION("rejects a non-Hermitian matrix naming the violation") {
    ComplexMatrix m = identity(4) / 4.0;
    m(0, 1) = 1e-3;
    REQUIRE_THROWS_AS(validate_density(m), NotHermitian);
    REQUIRE_THROWS_WITH(validate_density(m), ContainsSubstring("0.001"));
  }
  SECTION("rejects wrong trace") {
    REQUIRE_THROWS_AS(validate_density(identity(4) / 2.0), TraceNotOne);
  }
  SECTION("rejects a negative eigenvalue") {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1.1;
    m(1, 1) = -0.1;
    REQUIRE_THROWS_AS(validate_density(m), NotPositive);
  }
  SECTION("clamps tiny negative eigenvalues in the spectrum") {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1.0 + 1e-11;
    m(1, 1) = -1e-11;
    const DensityMatrix rho = validate_density(m);
    REQUIRE(rho.spectrum().minCoeff() == 0.0);
  }
  SECTION("rejects odd dimensions") {
    REQUIRE_THROWS_AS(validate_density(identity(3) / 3.0), DimMismatch);
  }
}

TEST_CASE("tensor and partial_trace", "[matcore]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = oracle::random_state(rng, 2);
    const ComplexMatrix b = oracle::random_state(rng, 2);
    const ComplexMatrix ab = tensor(a, b);
    REQUIRE(oracle::max_abs_diff(ab, oracle::kron(a, b)) < 1e-15);
    const DensityMatrix rho = validate_density(ab);
    REQUIRE(oracle::max_abs_diff(partial_trace(rho, Subsystem::A).mat(), a) < 1e-14);
    REQUIRE(oracle::max_abs_diff(partial_trace(rho, Subsystem::B).mat(), b) < 1e-14);
  }
  SECTION("swap exchanges the factors") {
    const ComplexMatrix a = oracle::random_state(rng, 2);
    const ComplexMatrix b = oracle::random_state(rng, 2);
    REQUIRE(oracle::max_abs_diff(swap_qubits(tensor(a, b)), tensor(b, a)) < 1e-15);
  }
}

TEST_CASE("entropy", "[matcore]") {
  SECTION("maximally mixed two-qubit state has 2 bits") {
    REQUIRE(von_neumann_entropy(validate_density(identity(4) / 4.0)) == Approx(2.0).margin(1e-15));
  }
  SECTION("pure state has none") {
    REQUIRE(von_neumann_entropy(bell_state(BellKind::PsiMinus)) == Approx(0.0).margin(1e-14));
  }
  SECTION("agrees with the direct eigenvalue sum") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix m = oracle::random_state(rng);
      REQUIRE(von_neumann_entropy(validate_density(m)) == Approx(oracle::entropy(m)).margin(1e-12));
    }
  }
  SECTION("deficit keeps relative precision near the mixed state") {
    // deficit of 1/4 + eps * dev is quadratic in eps; the naive sum loses it entirely.
    std::mt19937_64 rng(6);
    const ComplexMatrix dev = oracle::random_near_mixed(rng, 1.0) - identity(4) / 4.0;
    const double d1 = entropy_deficit(validate_density(identity(4) / 4.0 + 1e-5 * dev));
    const double d2 = entropy_deficit(validate_density(identity(4) / 4.0 + 2e-5 * dev));
    REQUIRE(d2 / d1 == Approx(4.0).epsilon(1e-4));
  }
  SECTION("qubit deficit matches 1 - h((1 + r)/2)") {
    for (double r : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      const double p = (1 + r) / 2, q = 1 - p;
      const double h = -(p > 0 ? p * std::log2(p) : 0) - (q > 0 ? q * std::log2(q) : 0);
      REQUIRE(qubit_entropy_deficit(r) == Approx(1.0 - h).margin(1e-15));
    }
  }
}

TEST_CASE("eigvals_hermitian", "[matcore]") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 1) = 1.0;
  h(1, 0) = 1.0;
  const auto ev = eigvals_hermitian(h);
  REQUIRE(ev[0] == Approx(1.0));
  REQUIRE(ev[1] == Approx(-1.0));
  h(0, 1) = 2.0;
  REQUIRE_THROWS_AS(eigvals_hermitian(h), NotHermitian);
}

TEST_CASE("fidelity", "[matcore]") {
  const DensityMatrix w = werner(0.3);
  REQUIRE(fidelity(w, w) == Approx(1.0));
  REQUIRE(fidelity(werner(1e-5), werner(0.9)) == Approx(1.0));
  REQUIRE(attenuated_fidelity(werner(0.15), werner(0.3), w) == Approx(0.5));
  REQUIRE_THROWS_AS(fidelity(validate_density(identity(4) / 4.0), w), ZeroDeviation);
  SECTION("opposite deviations give -1") {
    const DensityMatrix a = thermal_equilibrium(1e-4, 1.0);
    ComplexMatrix m = identity(4) / 2.0 - a.mat();
    REQUIRE(fidelity(validate_density(m), a) == Approx(-1.0));
  }
}
