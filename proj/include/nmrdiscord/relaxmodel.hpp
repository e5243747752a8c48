#pragma once

#include <span>
#include <vector>

#include "nmrdiscord/states.hpp"

namespace nmrdiscord {

enum class SeriesKind { Fidelity, Attenuated };

struct FidelityPoint {
  double t = 0.0;  // s
  double value = 0.0;
};

/// Measured or synthetic fidelity curve against the spin-lock duration.
struct FidelitySeries {
  SeriesKind kind = SeriesKind::Attenuated;
  std::vector<FidelityPoint> points;

  // Throws PreconditionError unless times strictly increase and values are finite.
  void validate() const;
};

/// Fidelity of relaxation_model_state(t) against the Werner target: 1 / sqrt(1 + a^2 / 2)
/// with a = exp(-lambda1 t). Independent of xi and lambda2.
double model_fidelity(double t, const RelaxModelParams& p);

/// Attenuated fidelity of the model: sqrt(2/3) exp(-lambda2 t). The triplet
/// equilibration changes the direction of the deviation but conserves its overlap with
/// the singlet, so lambda1 drops out.
double model_attenuated_fidelity(double t, const RelaxModelParams& p);

/// Discord (bits) of the model state, via its Bell-diagonal coefficients.
double model_discord(double t, const RelaxModelParams& p);

double model_value(SeriesKind kind, double t, const RelaxModelParams& p);

struct FitOptions {
  // Residual RMS below which a stalled search is still accepted.
  double noise_floor = 1e-3;
  int max_iterations = 500;
};

struct FitResult {
  double lambda1 = 0.0;  // 1/s
  double lambda2 = 0.0;  // 1/s
  double residual = 0.0;  // sum of squared residuals
  double rms = 0.0;
  std::vector<double> point_residuals;  // model - data, series concatenated in input order
  std::vector<double> model_values;
  // Estimate pinned at the edge of the search box log10(lambda) in [-8, 6].
  bool lambda1_at_boundary = false;
  bool lambda2_at_boundary = false;
  // Attenuated data alone carries no lambda1 information; a fidelity series does, and
  // carries no lambda2 information.
  bool lambda1_identifiable = false;
  bool lambda2_identifiable = false;
};

/// Least-squares (lambda1, lambda2) in log space: simplex descent from a 5 x 5 start
/// grid over log10(lambda) in [-5, 2], best residual wins (ties to the smaller
/// (lambda1, lambda2)). Needs >= 4 points spanning two decades of time and xi > 0.
/// Throws FitDivergence if no start lowered the residual and the RMS stays above
/// 10 x noise_floor.
FitResult fit_lambdas(const FidelitySeries& data, double xi, const FitOptions& opt = {});

/// Joint fit of several series (for example attenuated plus plain fidelity, which
/// together identify both rates).
FitResult fit_lambdas(std::span<const FidelitySeries> data, double xi, const FitOptions& opt = {});

}  // namespace nmrdiscord
