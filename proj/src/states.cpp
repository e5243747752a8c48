#include "nmrdiscord/states.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrdiscord {

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void require_positive_xi(double xi, const char* who) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    std::ostringstream os;
    os << who << ": xi must be positive, got " << xi;
    throw PreconditionError(os.str());
  }
}

ComplexMatrix qubit_state(const Eigen::Vector3d& b) {
  ComplexMatrix m = pauli(0);
  for (int k = 0; k < 3; ++k) m += b(k) * pauli(k + 1);
  return m / 2.0;
}

Eigen::Vector3d uniform_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cos_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> phi_dist(0.0, 2.0 * std::numbers::pi);
  const double z = cos_dist(rng);
  const double phi = phi_dist(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

}  // namespace

std::array<double, 4> bd_eigenvalues(const BdVector& r) {
  return {(1.0 - r.r1 - r.r2 - r.r3) / 4.0, (1.0 - r.r1 + r.r2 + r.r3) / 4.0,
          (1.0 + r.r1 - r.r2 + r.r3) / 4.0, (1.0 + r.r1 + r.r2 - r.r3) / 4.0};
}

ComplexMatrix spin_op(Subsystem s, int axis) {
  const ComplexMatrix half = pauli(axis) / 2.0;
  return s == Subsystem::A ? tensor(half, pauli(0)) : tensor(pauli(0), half);
}

ComplexMatrix projector(const Eigen::Vector4cd& ket) { return ket * ket.adjoint(); }

Eigen::Vector4cd bell_ket(BellKind kind) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  switch (kind) {
    case BellKind::PsiMinus:
      v(1) = kInvSqrt2;
      v(2) = -kInvSqrt2;
      break;
    case BellKind::PsiPlus:
      v(1) = kInvSqrt2;
      v(2) = kInvSqrt2;
      break;
    case BellKind::PhiMinus:
      v(0) = kInvSqrt2;
      v(3) = -kInvSqrt2;
      break;
    case BellKind::PhiPlus:
      v(0) = kInvSqrt2;
      v(3) = kInvSqrt2;
      break;
  }
  return v;
}

DensityMatrix bell_state(BellKind kind) { return validate_density(projector(bell_ket(kind))); }

DensityMatrix werner(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    std::ostringstream os;
    os << "PurityOutOfRange: Werner purity must lie in [0, 1], got " << epsilon;
    throw PurityOutOfRange(os.str());
  }
  const ComplexMatrix m =
      (1.0 - epsilon) / 4.0 * identity(4) + epsilon * projector(bell_ket(BellKind::PsiMinus));
  return validate_density(m);
}

DensityMatrix bell_diagonal(const BdVector& r) {
  const auto lambda = bd_eigenvalues(r);
  for (int i = 0; i < 4; ++i) {
    if (lambda[i] < -kDensityTol || lambda[i] > 1.0 + kDensityTol || !std::isfinite(lambda[i])) {
      std::ostringstream os;
      os << "InvalidBdVector: Bell weight lambda" << i + 1 << " = " << lambda[i]
         << " lies outside [0, 1] for r = (" << r.r1 << ", " << r.r2 << ", " << r.r3 << ")";
      throw InvalidBdVector(os.str());
    }
  }
  ComplexMatrix m = identity(4);
  const double rs[3] = {r.r1, r.r2, r.r3};
  for (int j = 0; j < 3; ++j) m += rs[j] * tensor(pauli(j + 1), pauli(j + 1));
  return validate_density(m / 4.0);
}

DensityMatrix pseudopure_00(double xi) {
  require_positive_xi(xi, "pseudopure_00");
  const ComplexMatrix iza = spin_op(Subsystem::A, 3);
  const ComplexMatrix izb = spin_op(Subsystem::B, 3);
  const ComplexMatrix dev = iza + izb + 2.0 * iza * izb;
  return validate_density((identity(4) + xi / 4.0 * dev) / 4.0);
}

DensityMatrix thermal_equilibrium(double xi, double gamma_ratio) {
  require_positive_xi(xi, "thermal_equilibrium");
  const ComplexMatrix dev =
      spin_op(Subsystem::A, 3) + gamma_ratio * spin_op(Subsystem::B, 3);
  return validate_density((identity(4) + xi * dev) / 4.0);
}

DensityMatrix singlet_triplet_initial(double xi) {
  require_positive_xi(xi, "singlet_triplet_initial");
  const ComplexMatrix s0 = projector(bell_ket(BellKind::PsiMinus));
  const ComplexMatrix t0 = projector(bell_ket(BellKind::PsiPlus));
  return validate_density(identity(4) / 4.0 + xi / 4.0 * (s0 - t0));
}

DensityMatrix lls_state(double xi) {
  require_positive_xi(xi, "lls_state");
  return werner(xi / 3.0);
}

DensityMatrix relaxation_model_state(double t, const RelaxModelParams& p) {
  require_positive_xi(p.xi, "relaxation_model_state");
  if (!(t >= 0.0) || !(p.lambda1 > 0.0) || !(p.lambda2 > 0.0)) {
    std::ostringstream os;
    os << "relaxation_model_state: need t >= 0 and positive rates, got t = " << t
       << ", lambda1 = " << p.lambda1 << ", lambda2 = " << p.lambda2;
    throw PreconditionError(os.str());
  }
  const ComplexMatrix s0 = projector(bell_ket(BellKind::PsiMinus));
  const ComplexMatrix t0 = projector(bell_ket(BellKind::PsiPlus));
  const ComplexMatrix triplet = (identity(4) - s0) / 3.0;
  const double a = std::exp(-p.lambda1 * t);
  const ComplexMatrix bracket = s0 - a * t0 - (1.0 - a) * triplet;
  return validate_density(identity(4) / 4.0 + std::exp(-p.lambda2 * t) * p.xi / 4.0 * bracket);
}

DensityMatrix classical_state(const Eigen::Vector3d& axis, double p0, const Eigen::Vector3d& b0,
                              const Eigen::Vector3d& b1) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw PreconditionError("classical_state: p0 must lie in [0, 1]");
  if (b0.norm() > 1.0 + 1e-12 || b1.norm() > 1.0 + 1e-12) {
    throw PreconditionError("classical_state: conditional Bloch vectors must have length <= 1");
  }
  const Eigen::Vector3d n = axis.normalized();
  const ComplexMatrix pi0 = qubit_state(n);
  const ComplexMatrix pi1 = qubit_state(-n);
  const ComplexMatrix m = p0 * tensor(pi0, qubit_state(b0)) + (1.0 - p0) * tensor(pi1, qubit_state(b1));
  return validate_density(m);
}

DensityMatrix random_classical_state(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Vector3d axis = uniform_direction(rng);
  const double p0 = unit(rng);
  const Eigen::Vector3d b0 = std::cbrt(unit(rng)) * uniform_direction(rng);
  const Eigen::Vector3d b1 = std::cbrt(unit(rng)) * uniform_direction(rng);
  return classical_state(axis, p0, b0, b1);
}

}  // namespace nmrdiscord
