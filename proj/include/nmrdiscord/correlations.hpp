#pragma once

#include <Eigen/Dense>

#include "nmrdiscord/matcore.hpp"
#include "nmrdiscord/states.hpp"

namespace nmrdiscord {

/// Local Bloch vectors and correlation matrix:
///   rho = 1/4 (1 + x.s (x) 1 + 1 (x) y.s + sum_ij T_ij s_i (x) s_j)
struct BlochForm {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  Eigen::Matrix3d T = Eigen::Matrix3d::Zero();
};

BlochForm bloch_decompose(const DensityMatrix& rho);
ComplexMatrix bloch_compose(const BlochForm& f);

/// Projective basis on qubit A:
///   |u> = cos(theta)|0> + e^{i phi} sin(theta)|1>,  |v> = sin(theta)|0> - e^{i phi} cos(theta)|1>
struct MeasurementBasis {
  double theta = 0.0;
  double phi = 0.0;

  // Bloch direction of |u>; |v> points the opposite way.
  Eigen::Vector3d direction() const;
  Eigen::Vector2cd ket_u() const;
  Eigen::Vector2cd ket_v() const;
};

struct GridSpec {
  int n_cos_theta = 101;
  int n_phi = 100;
  // Coordinate-shrink search around the grid optimum (20 halvings).
  bool refine = false;
};

struct ConditionedOutcomes {
  double p_u = 0.0;
  DensityMatrix rho_u;
  double p_v = 0.0;
  DensityMatrix rho_v;
  // A branch with probability below 1e-12 is reported as 1/2 and flagged here.
  bool degenerate_u = false;
  bool degenerate_v = false;
};

struct DiscordReport {
  double mutual_info = 0.0;
  double j_max = 0.0;
  double discord = 0.0;
  MeasurementBasis argmax_basis;
  // Smallest J seen on the grid; j_max - j_min is the angular spread.
  double j_min = 0.0;
};

struct BdProjection {
  BdVector r;
  // Hilbert-Schmidt norm of everything the Bell-diagonal form drops.
  double discarded_norm = 0.0;
};

/// S(A) + S(B) - S(AB), bits.
double mutual_information(const DensityMatrix& rho);

/// Measures qubit A in basis `b` and returns outcome probabilities and conditional B states.
ConditionedOutcomes project_and_condition(const DensityMatrix& rho, const MeasurementBasis& b);

/// J = S(B) - sum_i p_i S(B|i) for the basis `b`.
double classical_correlation_at(const DensityMatrix& rho, const MeasurementBasis& b);

/// Discord D(B|A) = I - max_grid J. The grid only bounds J from below, so the value is
/// an upper bound on the true discord.
DiscordReport discord_grid(const DensityMatrix& rho, const GridSpec& g = {});

/// D(A|B): discord_grid after exchanging the qubits.
DiscordReport discord_swapped(const DensityMatrix& rho, const GridSpec& g = {});

/// Keeps only the diagonal of T. Throws InvalidBdVector if the result is not a state.
BdProjection bd_project(const DensityMatrix& rho);

/// Closed-form discord of a Bell-diagonal state.
double discord_bd(const BdVector& r);

/// Closed-form Werner discord, ~ eps^2 / ln 2 for small eps.
double werner_discord_analytic(double epsilon);

/// (|x|^2 + |T|^2 - eta_max) / 4 with eta_max the top eigenvalue of x x^T + T T^T.
double geometric_discord(const DensityMatrix& rho);

}  // namespace nmrdiscord
