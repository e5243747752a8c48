#include "nmrdiscord/correlations.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrdiscord {

namespace {

constexpr double kDegenerateBranch = 1e-12;
constexpr int kRefineIterations = 20;

// sigma_mu (x) sigma_nu, mu/nu = 0..3
const std::array<ComplexMatrix, 16>& pauli_products() {
  static const std::array<ComplexMatrix, 16> table = [] {
    std::array<ComplexMatrix, 16> t;
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) t[4 * mu + nu] = tensor(pauli(mu), pauli(nu));
    }
    return t;
  }();
  return table;
}

void require_two_qubit(const DensityMatrix& rho, const char* who) {
  if (rho.dim() != 4) {
    std::ostringstream os;
    os << who << ": expected a two-qubit (4x4) state, got dim " << rho.dim();
    throw DimMismatch(os.str());
  }
}

Eigen::Vector3d direction_from(double cos_theta, double phi) {
  // Bloch direction of cos(t)|0> + e^{i phi} sin(t)|1>, t in [0, pi].
  const double c = std::clamp(cos_theta, -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double sin2 = 2.0 * s * c;
  return {sin2 * std::cos(phi), sin2 * std::sin(phi), 2.0 * c * c - 1.0};
}

// Everything the measurement search needs, precomputed once per state.
struct ConditioningKernel {
  BlochForm f;
  double deficit_a = 0.0;
  double deficit_b = 0.0;
  double mutual_info = 0.0;

  explicit ConditioningKernel(const DensityMatrix& rho) : f(bloch_decompose(rho)) {
    deficit_a = qubit_entropy_deficit(f.x.norm());
    deficit_b = qubit_entropy_deficit(f.y.norm());
    mutual_info = entropy_deficit(rho) - deficit_a - deficit_b;
  }

  // J(n) = sum_i p_i deficit(B|i) - deficit(B); p_u = (1 + n.x)/2 and the unnormalized
  // conditional Bloch vector is y + T^T n (y - T^T n for the opposite outcome).
  double classical_correlation(const Eigen::Vector3d& n) const {
    const double nx = n.dot(f.x);
    const Eigen::Vector3d tn = f.T.transpose() * n;
    double j = -deficit_b;
    const double p_u = 0.5 * (1.0 + nx);
    const double p_v = 0.5 * (1.0 - nx);
    if (p_u >= kDegenerateBranch) j += p_u * qubit_entropy_deficit((f.y + tn).norm() / (2.0 * p_u));
    if (p_v >= kDegenerateBranch) j += p_v * qubit_entropy_deficit((f.y - tn).norm() / (2.0 * p_v));
    return j;
  }
};

double wrap_phi(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  return phi < 0.0 ? phi + two_pi : phi;
}

DensityMatrix branch_state(const ComplexMatrix& rho, const Eigen::Vector2cd& ket, double* p,
                           bool* degenerate) {
  // <k| (x) 1 as a 2x4 map
  ComplexMatrix bra(2, 4);
  bra.setZero();
  for (int b = 0; b < 2; ++b) {
    bra(b, b) = std::conj(ket(0));
    bra(b, 2 + b) = std::conj(ket(1));
  }
  const ComplexMatrix unnorm = bra * rho * bra.adjoint();
  *p = unnorm.trace().real();
  if (*p < kDegenerateBranch) {
    *degenerate = true;
    return validate_density(identity(2) / 2.0);
  }
  *degenerate = false;
  return validate_density(unnorm / *p);
}

}  // namespace

Eigen::Vector3d MeasurementBasis::direction() const { return direction_from(std::cos(theta), phi); }

Eigen::Vector2cd MeasurementBasis::ket_u() const {
  return {Complex(std::cos(theta), 0.0), std::polar(1.0, phi) * std::sin(theta)};
}

Eigen::Vector2cd MeasurementBasis::ket_v() const {
  return {Complex(std::sin(theta), 0.0), -std::polar(1.0, phi) * std::cos(theta)};
}

BlochForm bloch_decompose(const DensityMatrix& rho) {
  require_two_qubit(rho, "bloch_decompose");
  const auto& table = pauli_products();
  const ComplexMatrix& m = rho.mat();
  BlochForm f;
  for (int i = 0; i < 3; ++i) {
    f.x(i) = hs_inner(m, table[4 * (i + 1)]);
    f.y(i) = hs_inner(m, table[i + 1]);
    for (int j = 0; j < 3; ++j) f.T(i, j) = hs_inner(m, table[4 * (i + 1) + (j + 1)]);
  }
  return f;
}

ComplexMatrix bloch_compose(const BlochForm& f) {
  const auto& table = pauli_products();
  ComplexMatrix m = table[0];
  for (int i = 0; i < 3; ++i) {
    m += f.x(i) * table[4 * (i + 1)] + f.y(i) * table[i + 1];
    for (int j = 0; j < 3; ++j) m += f.T(i, j) * table[4 * (i + 1) + (j + 1)];
  }
  return m / 4.0;
}

double mutual_information(const DensityMatrix& rho) {
  require_two_qubit(rho, "mutual_information");
  return ConditioningKernel(rho).mutual_info;
}

ConditionedOutcomes project_and_condition(const DensityMatrix& rho, const MeasurementBasis& b) {
  require_two_qubit(rho, "project_and_condition");
  double p_u = 0.0, p_v = 0.0;
  bool deg_u = false, deg_v = false;
  DensityMatrix rho_u = branch_state(rho.mat(), b.ket_u(), &p_u, &deg_u);
  DensityMatrix rho_v = branch_state(rho.mat(), b.ket_v(), &p_v, &deg_v);
  return ConditionedOutcomes{p_u, std::move(rho_u), p_v, std::move(rho_v), deg_u, deg_v};
}

double classical_correlation_at(const DensityMatrix& rho, const MeasurementBasis& b) {
  require_two_qubit(rho, "classical_correlation_at");
  return ConditioningKernel(rho).classical_correlation(b.direction());
}

DiscordReport discord_grid(const DensityMatrix& rho, const GridSpec& g) {
  require_two_qubit(rho, "discord_grid");
  if (g.n_cos_theta < 2 || g.n_phi < 2) {
    throw PreconditionError("discord_grid: grid needs at least 2 x 2 points");
  }
  const ConditioningKernel kernel(rho);
  const double c_step = 2.0 / (g.n_cos_theta - 1);
  const double phi_step = 2.0 * std::numbers::pi / g.n_phi;

  double best = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  double best_c = 1.0, best_phi = 0.0;
  for (int ic = 0; ic < g.n_cos_theta; ++ic) {
    const double c = ic + 1 == g.n_cos_theta ? 1.0 : -1.0 + ic * c_step;
    for (int ip = 0; ip < g.n_phi; ++ip) {
      const double phi = ip * phi_step;
      const double j = kernel.classical_correlation(direction_from(c, phi));
      // strict comparison keeps the smallest (theta, phi) index on ties
      if (j > best) {
        best = j;
        best_c = c;
        best_phi = phi;
      }
      worst = std::min(worst, j);
    }
  }

  if (g.refine) {
    double hc = c_step, hp = phi_step;
    for (int it = 0; it < kRefineIterations; ++it) {
      const double cand[4][2] = {{std::min(1.0, best_c + hc), best_phi},
                                 {std::max(-1.0, best_c - hc), best_phi},
                                 {best_c, wrap_phi(best_phi + hp)},
                                 {best_c, wrap_phi(best_phi - hp)}};
      for (const auto& p : cand) {
        const double j = kernel.classical_correlation(direction_from(p[0], p[1]));
        if (j > best) {
          best = j;
          best_c = p[0];
          best_phi = p[1];
        }
      }
      hc *= 0.5;
      hp *= 0.5;
    }
  }

  DiscordReport rep;
  rep.mutual_info = kernel.mutual_info;
  rep.j_max = best;
  rep.j_min = worst;
  rep.discord = kernel.mutual_info - best;
  rep.argmax_basis = MeasurementBasis{std::acos(best_c), best_phi};
  return rep;
}

DiscordReport discord_swapped(const DensityMatrix& rho, const GridSpec& g) {
  require_two_qubit(rho, "discord_swapped");
  return discord_grid(validate_density(swap_qubits(rho.mat())), g);
}

BdProjection bd_project(const DensityMatrix& rho) {
  const BlochForm f = bloch_decompose(rho);
  BdProjection out;
  out.r = BdVector{f.T(0, 0), f.T(1, 1), f.T(2, 2)};
  double off = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) off += f.T(i, j) * f.T(i, j);
    }
  }
  out.discarded_norm = 0.5 * std::sqrt(f.x.squaredNorm() + f.y.squaredNorm() + off);
  bell_diagonal(out.r);  // positivity check
  return out;
}

double discord_bd(const BdVector& r) {
  const auto lambda = bd_eigenvalues(r);
  for (double l : lambda) {
    if (l < -kDensityTol || l > 1.0 + kDensityTol) {
      std::ostringstream os;
      os << "InvalidBdVector: Bell weight " << l << " outside [0, 1]";
      throw InvalidBdVector(os.str());
    }
  }
  // I = 2 + sum l log2 l = 1/4 sum (1 + s) log2(1 + s) with s = 4 l - 1. The s sum to
  // zero, so subtracting them removes the first-order terms that would otherwise cancel
  // in floating point.
  const double s[] = {-r.r1 - r.r2 - r.r3, -r.r1 + r.r2 + r.r3, r.r1 - r.r2 + r.r3, r.r1 + r.r2 - r.r3};
  double mi = 0.0;
  for (double si : s) {
    if (si <= -1.0) {
      mi += 1.0;  // (1 + s) log1p(s) -> 0, minus s = -1
      continue;
    }
    mi += (1.0 + si) * std::log1p(si) - si;
  }
  mi /= 4.0 * std::numbers::ln2;
  const double r_max = std::max({std::abs(r.r1), std::abs(r.r2), std::abs(r.r3)});
  return mi - qubit_entropy_deficit(r_max);
}

double werner_discord_analytic(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    std::ostringstream os;
    os << "PurityOutOfRange: Werner purity must lie in [0, 1], got " << epsilon;
    throw PurityOutOfRange(os.str());
  }
  // [(1-e) ln(1-e) + (1+3e) ln(1+3e) - 2(1+e) ln(1+e)] / (4 ln 2)
  const double e = epsilon;
  if (e < 1e-3) {
    // The O(e) terms of the closed form cancel; the Taylor series keeps relative precision.
    const double c[] = {1.0, -1.0, 5.0 / 3.0, -3.0, 91.0 / 15.0, -13.0, 205.0 / 7.0};
    double acc = 0.0;
    for (int k = 6; k >= 0; --k) acc = acc * e + c[k];
    return e * e * acc / std::numbers::ln2;
  }
  const double head = e < 1.0 ? (1.0 - e) * std::log1p(-e) : 0.0;
  return (head + (1.0 + 3.0 * e) * std::log1p(3.0 * e) - 2.0 * (1.0 + e) * std::log1p(e)) /
         (4.0 * std::numbers::ln2);
}

double geometric_discord(const DensityMatrix& rho) {
  const BlochForm f = bloch_decompose(rho);
  const Eigen::Matrix3d k = f.x * f.x.transpose() + f.T * f.T.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(k, Eigen::EigenvaluesOnly);
  const double eta_max = solver.eigenvalues().maxCoeff();
  return (f.x.squaredNorm() + f.T.squaredNorm() - eta_max) / 4.0;
}

}  // namespace nmrdiscord
