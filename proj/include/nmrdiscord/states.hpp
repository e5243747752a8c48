#pragma once

#include <array>
#include <cstdint>

#include "nmrdiscord/matcore.hpp"

namespace nmrdiscord {

// Proton polarization at 11.7 T and room temperature.
inline constexpr double kDefaultXi = 8e-5;

enum class BellKind { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

/// Coefficients of the canonical Bell-diagonal form (1 + sum_j r_j s_j (x) s_j) / 4.
struct BdVector {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
};

/// Bell-basis weights (psi-, phi-, phi+, psi+) of the Bell-diagonal state r.
std::array<double, 4> bd_eigenvalues(const BdVector& r);

/// Parameters of the singlet/triplet relaxation model.
///   xi       polarization of the prepared singlet-triplet mixture
///   lambda1  triplet equilibration rate [1/s]
///   lambda2  global decay rate of the deviation [1/s]
struct RelaxModelParams {
  double xi = kDefaultXi;
  double lambda1 = 1.0 / 0.75e-3;
  double lambda2 = 1.0 / 26.0;
};

// Spin-1/2 operators I = sigma / 2 on the two-qubit space.
ComplexMatrix spin_op(Subsystem s, int axis);

// |psi><psi| for a normalized two-qubit ket.
ComplexMatrix projector(const Eigen::Vector4cd& ket);
Eigen::Vector4cd bell_ket(BellKind kind);

DensityMatrix bell_state(BellKind kind);

/// (1 - eps)/4 * 1 + eps |psi-><psi-|. Throws PurityOutOfRange outside [0, 1].
DensityMatrix werner(double epsilon);

/// Throws InvalidBdVector when a Bell weight leaves [0, 1].
DensityMatrix bell_diagonal(const BdVector& r);

/// |00> pseudopure state 1/4 [1 + xi/4 (Iz_A + Iz_B + 2 Iz_A Iz_B)].
DensityMatrix pseudopure_00(double xi);

/// High-temperature equilibrium 1/4 (1 + xi (Iz_A + gamma_ratio Iz_B)).
DensityMatrix thermal_equilibrium(double xi, double gamma_ratio);

/// 1/4 + xi/4 (|S0><S0| - |T0><T0|), the state entering the spin-lock.
DensityMatrix singlet_triplet_initial(double xi);

/// Long-lived singlet state; identical to werner(xi / 3).
DensityMatrix lls_state(double xi);

/// 1/4 + e^{-l2 t} xi/4 (P_S0 - e^{-l1 t} P_T0 - (1 - e^{-l1 t}) P_T), P_T the equal
/// triplet mixture.
DensityMatrix relaxation_model_state(double t, const RelaxModelParams& p);

/// sum_i p_i Pi_i (x) rho_{B|i} for the basis {|n>, |-n>} with Bloch direction `axis` on
/// qubit A. `b0` and `b1` are Bloch vectors (|b| <= 1) of the conditional B states.
DensityMatrix classical_state(const Eigen::Vector3d& axis, double p0, const Eigen::Vector3d& b0,
                              const Eigen::Vector3d& b1);

/// Random zero-discord (for measurement on A) state: basis direction uniform on the
/// sphere, p0 uniform on [0, 1], conditional states uniform in the Bloch ball.
DensityMatrix random_classical_state(std::uint64_t seed);

}  // namespace nmrdiscord
