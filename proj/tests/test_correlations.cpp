#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nmrdiscord/correlations.hpp"
#include "nmrdiscord/errors.hpp"
#include "nmrdiscord/states.hpp"
#include "support.hpp"

using namespace nmrdiscord;
using Catch::Approx;

TEST_CASE("Bloch decomposition", "[correlations]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = oracle::random_state(rng);
    const BlochForm f = bloch_decompose(validate_density(m));
    REQUIRE(oracle::max_abs_diff(bloch_compose(f), m) < 1e-15);
    // x is the Bloch vector of the reduced A state
    const ComplexMatrix ra = oracle::trace_out_b(m);
    REQUIRE(f.x(2) == Approx((ra(0, 0) - ra(1, 1)).real()).margin(1e-15));
  }
}

TEST_CASE("mutual_information", "[correlations]") {
  REQUIRE(mutual_information(bell_state(BellKind::PhiPlus)) == Approx(2.0).margin(1e-14));
  REQUIRE(mutual_information(validate_density(identity(4) / 4.0)) == Approx(0.0).margin(1e-15));
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix m = oracle::random_state(rng);
    REQUIRE(mutual_information(validate_density(m)) == Approx(oracle::mutual_info(m)).margin(1e-12));
  }
  SECTION("tiny deviations keep their scale") {
    // I(werner(eps)) ~ 3 eps^2 / (2 ln 2) + O(eps^3)
    const double eps = 1e-5;
    REQUIRE(mutual_information(werner(eps)) ==
            Approx(3.0 * eps * eps / (2.0 * std::numbers::ln2)).epsilon(1e-4));
  }
}

TEST_CASE("project_and_condition", "[correlations]") {
  SECTION("measuring |0>/|1> on a Bell state") {
    const auto out = project_and_condition(bell_state(BellKind::PhiPlus), MeasurementBasis{0.0, 0.0});
    REQUIRE(out.p_u == Approx(0.5));
    REQUIRE(out.p_v == Approx(0.5));
    REQUIRE(std::abs(out.rho_u.mat()(0, 0) - 1.0) < 1e-15);
    REQUIRE(std::abs(out.rho_v.mat()(1, 1) - 1.0) < 1e-15);
  }
  SECTION("a zero-probability branch is flagged") {
    const DensityMatrix rho = validate_density(tensor(pauli(0) + pauli(3), identity(2)) / 4.0);
    const auto out = project_and_condition(rho, MeasurementBasis{0.0, 0.0});
    REQUIRE_FALSE(out.degenerate_u);
    REQUIRE(out.degenerate_v);
    REQUIRE(out.p_v == Approx(0.0).margin(1e-15));
  }
  SECTION("the two outcomes form an orthonormal basis") {
    const MeasurementBasis b{0.7, 2.1};
    REQUIRE(std::abs(b.ket_u().dot(b.ket_v())) < 1e-15);
    REQUIRE(b.ket_u().norm() == Approx(1.0));
  }
}

TEST_CASE("classical correlation: Bloch kernel against explicit projectors", "[correlations]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const ComplexMatrix m = oracle::random_state(rng);
    const DensityMatrix rho = validate_density(m);
    const MeasurementBasis b{std::numbers::pi * u(rng), 2.0 * std::numbers::pi * u(rng)};
    REQUIRE(classical_correlation_at(rho, b) ==
            Approx(oracle::classical_correlation(m, b.direction())).margin(1e-12));
    // and against the library's own matrix route
    const auto out = project_and_condition(rho, b);
    const double sb = von_neumann_entropy(partial_trace(rho, Subsystem::B));
    const double j_matrix =
        sb - out.p_u * von_neumann_entropy(out.rho_u) - out.p_v * von_neumann_entropy(out.rho_v);
    REQUIRE(classical_correlation_at(rho, b) == Approx(j_matrix).margin(1e-12));
  }
}

TEST_CASE("discord_grid", "[correlations]") {
  SECTION("singlet: I = 2, J = 1, D = 1") {
    const DiscordReport r = discord_grid(bell_state(BellKind::PsiMinus));
    REQUIRE(r.mutual_info == Approx(2.0).margin(1e-13));
    REQUIRE(r.j_max == Approx(1.0).margin(1e-13));
    REQUIRE(r.discord == Approx(1.0).margin(1e-13));
  }
  SECTION("product states have zero discord") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix m = tensor(oracle::random_state(rng, 2), oracle::random_state(rng, 2));
      REQUIRE(std::abs(discord_grid(validate_density(m)).discord) < 1e-12);
    }
  }
  SECTION("Werner states follow the closed form") {
    for (double eps : {0.05, 0.3, 0.77, 1.0}) {
      REQUIRE(discord_grid(werner(eps)).discord ==
              Approx(oracle::werner_discord(eps)).margin(1e-12));
    }
  }
  SECTION("grid discord bounds the true value from above") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix m = oracle::random_state(rng);
      const double d_true = oracle::mutual_info(m) - oracle::max_classical_correlation(m);
      const DiscordReport grid = discord_grid(validate_density(m));
      const DiscordReport fine = discord_grid(validate_density(m), GridSpec{101, 100, true});
      REQUIRE(grid.discord >= d_true - 1e-10);
      REQUIRE(fine.discord <= grid.discord + 1e-15);
      REQUIRE(fine.discord == Approx(d_true).margin(1e-6));
      REQUIRE(grid.j_min <= grid.j_max);
    }
  }
  SECTION("ties keep the first grid point") {
    // Maximally mixed: J = 0 everywhere, so the first point (cos theta = -1, phi = 0) wins.
    const DiscordReport r = discord_grid(validate_density(identity(4) / 4.0));
    REQUIRE(r.argmax_basis.theta == Approx(std::numbers::pi));
    REQUIRE(r.argmax_basis.phi == 0.0);
  }
  SECTION("wrong dimension") {
    REQUIRE_THROWS_AS(discord_grid(validate_density(identity(2) / 2.0)), DimMismatch);
  }
}

TEST_CASE("Bell-diagonal discord", "[correlations]") {
  SECTION("Werner states") {
    for (double eps : {0.0, 0.01, 0.5, 1.0}) {
      REQUIRE(discord_bd({-eps, -eps, -eps}) == Approx(werner_discord_analytic(eps)).margin(1e-14));
    }
  }
  SECTION("agrees with the refined grid") {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 30; ++trial) {
      const BdVector r = oracle::random_bd(rng);
      const DiscordReport g = discord_grid(bell_diagonal(r), GridSpec{101, 100, true});
      REQUIRE(discord_bd(r) == Approx(g.discord).margin(1e-9));
    }
  }
  SECTION("projection keeps the diagonal of T and reports the rest") {
    const BdProjection p = bd_project(werner(0.3));
    REQUIRE(p.r.r1 == Approx(-0.3));
    REQUIRE(p.discarded_norm < 1e-15);
    const BdProjection q = bd_project(thermal_equilibrium(1e-4, 1.0));
    REQUIRE(q.discarded_norm == Approx(0.5 * std::sqrt(2.0) * 0.5e-4));
  }
  SECTION("invalid vectors") {
    REQUIRE_THROWS_AS(discord_bd({1, 1, 1}), InvalidBdVector);
  }
}

TEST_CASE("werner_discord_analytic", "[correlations]") {
  for (int k = 0; k <= 100; ++k) {
    const double eps = k / 100.0;
    REQUIRE(werner_discord_analytic(eps) == Approx(oracle::werner_discord(eps)).margin(1e-14));
  }
  SECTION("small purities keep relative precision") {
    for (double eps : {1e-9, 1e-6, 1e-4, 9.9e-4, 1.1e-3}) {
      const double series = (eps * eps - eps * eps * eps + 5.0 / 3.0 * std::pow(eps, 4)) /
                            std::numbers::ln2;
      REQUIRE(werner_discord_analytic(eps) == Approx(series).epsilon(1e-8));
    }
  }
  REQUIRE_THROWS_AS(werner_discord_analytic(1.01), PurityOutOfRange);
}

TEST_CASE("geometric_discord", "[correlations]") {
  REQUIRE(geometric_discord(werner(0.6)) == Approx(0.18).margin(1e-15));
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 8; ++trial) {
    const ComplexMatrix m = oracle::random_state(rng);
    REQUIRE(geometric_discord(validate_density(m)) ==
            Approx(oracle::geometric_discord_brute(m)).margin(1e-10));
  }
  SECTION("classical states have none") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      REQUIRE(std::abs(geometric_discord(random_classical_state(seed))) < 1e-15);
    }
  }
}
