#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nmrdiscord/correlations.hpp"
#include "nmrdiscord/errors.hpp"
#include "nmrdiscord/states.hpp"
#include "support.hpp"

using namespace nmrdiscord;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("werner", "[states]") {
  SECTION("eps = 1 is the singlet") {
    REQUIRE(oracle::max_abs_diff(werner(1.0).mat(), bell_state(BellKind::PsiMinus).mat()) < 1e-15);
  }
  SECTION("eps = 0 is maximally mixed") {
    REQUIRE(oracle::max_abs_diff(werner(0.0).mat(), identity(4) / 4.0) < 1e-15);
  }
  SECTION("out of range") {
    REQUIRE_THROWS_AS(werner(1.5), PurityOutOfRange);
    REQUIRE_THROWS_AS(werner(-0.1), PurityOutOfRange);
  }
  SECTION("Bloch form is T = -eps 1") {
    const BlochForm f = bloch_decompose(werner(0.4));
    REQUIRE(f.x.norm() < 1e-15);
    REQUIRE(f.y.norm() < 1e-15);
    REQUIRE((f.T + 0.4 * Eigen::Matrix3d::Identity()).norm() < 1e-15);
  }
}

TEST_CASE("bell_diagonal", "[states]") {
  SECTION("(-1,-1,-1) is the singlet") {
    REQUIRE(oracle::max_abs_diff(bell_diagonal({-1, -1, -1}).mat(),
                                 bell_state(BellKind::PsiMinus).mat()) < 1e-15);
  }
  SECTION("eigenvalues are the Bell weights") {
    const BdVector r{0.2, -0.3, 0.1};
    const auto lambda = bd_eigenvalues(r);
    const DensityMatrix rho = bell_diagonal(r);
    const BellKind order[4] = {BellKind::PsiMinus, BellKind::PhiMinus, BellKind::PhiPlus,
                               BellKind::PsiPlus};
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector4cd k = bell_ket(order[i]);
      REQUIRE((k.adjoint() * rho.mat() * k)(0, 0).real() == Approx(lambda[i]));
    }
  }
  SECTION("invalid vector names the negative weight") {
    REQUIRE_THROWS_AS(bell_diagonal({1, 1, 1}), InvalidBdVector);
    REQUIRE_THROWS_WITH(bell_diagonal({1, 1, 1}), ContainsSubstring("lambda1"));
  }
}

TEST_CASE("NMR initial states", "[states]") {
  const double xi = 8e-5;
  SECTION("pseudopure |00> is 1/4 + xi/8 |00><00| - xi/32") {
    const DensityMatrix pp = pseudopure_00(xi);
    REQUIRE(pp.mat()(0, 0).real() == Approx(0.25 + xi * 3.0 / 32.0).epsilon(1e-14));
    for (int k = 1; k < 4; ++k) REQUIRE(pp.mat()(k, k).real() == Approx(0.25 - xi / 32.0).epsilon(1e-14));
  }
  SECTION("thermal Bloch vectors") {
    const BlochForm f = bloch_decompose(thermal_equilibrium(xi, 0.25));
    REQUIRE(f.x(2) == Approx(xi / 2.0));
    REQUIRE(f.y(2) == Approx(xi * 0.25 / 2.0));
    REQUIRE(f.T.norm() < 1e-15);
    REQUIRE(discord_grid(thermal_equilibrium(xi, 0.25)).discord == Approx(0.0).margin(1e-15));
  }
  SECTION("long-lived singlet state equals werner(xi / 3)") {
    REQUIRE(oracle::max_abs_diff(lls_state(xi).mat(), werner(xi / 3.0).mat()) < 1e-18);
  }
  SECTION("relaxation model endpoints") {
    const RelaxModelParams p;
    REQUIRE(oracle::max_abs_diff(relaxation_model_state(0.0, p).mat(),
                                 singlet_triplet_initial(xi).mat()) < 1e-18);
    // After triplet equilibration the state is the long-lived singlet, decayed.
    const double t = 0.5;
    REQUIRE(oracle::max_abs_diff(relaxation_model_state(t, p).mat(),
                                 werner(xi / 3.0 * std::exp(-p.lambda2 * t)).mat()) < 1e-18);
    REQUIRE(oracle::max_abs_diff(relaxation_model_state(1e4, p).mat(), identity(4) / 4.0) < 1e-18);
    REQUIRE_THROWS_AS(relaxation_model_state(-1.0, p), PreconditionError);
  }
  SECTION("xi must be positive") {
    REQUIRE_THROWS_AS(pseudopure_00(0.0), PreconditionError);
    REQUIRE_THROWS_AS(thermal_equilibrium(-1.0, 1.0), PreconditionError);
  }
}

TEST_CASE("classical states", "[states]") {
  SECTION("conditional states are recovered by measuring along the axis") {
    const Eigen::Vector3d axis(1.0, 2.0, -0.5);
    const Eigen::Vector3d b0(0.3, 0.1, -0.2), b1(-0.5, 0.4, 0.6);
    const DensityMatrix rho = classical_state(axis, 0.3, b0, b1);
    const Eigen::Vector3d n = axis.normalized();
    MeasurementBasis basis{std::acos(n(2)) / 2.0, std::atan2(n(1), n(0))};
    REQUIRE((basis.direction() - n).norm() < 1e-12);
    const ConditionedOutcomes out = project_and_condition(rho, basis);
    REQUIRE(out.p_u == Approx(0.3));
    for (int k = 0; k < 3; ++k) {
      REQUIRE(hs_inner(out.rho_u.mat(), pauli(k + 1)) == Approx(b0(k)).margin(1e-12));
      REQUIRE(hs_inner(out.rho_v.mat(), pauli(k + 1)) == Approx(b1(k)).margin(1e-12));
    }
  }
  SECTION("random states are reproducible per seed") {
    REQUIRE(oracle::max_abs_diff(random_classical_state(3).mat(), random_classical_state(3).mat()) == 0.0);
    REQUIRE(oracle::max_abs_diff(random_classical_state(3).mat(), random_classical_state(4).mat()) > 0.0);
  }
}
