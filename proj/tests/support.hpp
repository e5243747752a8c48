#pragma once

// Reference implementations used only by the tests. They take the direct route
// (full-matrix eigenvalues, explicit projectors, brute-force minimization) so that they
// share no code path with the library internals they check.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "nmrdiscord/matcore.hpp"
#include "nmrdiscord/states.hpp"

namespace oracle {

using nmrdiscord::Complex;
using CMat = Eigen::MatrixXcd;

inline CMat sx() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMat sy() {
  CMat m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline CMat sz() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline CMat id2() { return CMat::Identity(2, 2); }

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// I = sigma / 2 on one spin of the pair
inline CMat op_a(const CMat& s) { return kron(s / 2.0, id2()); }
inline CMat op_b(const CMat& s) { return kron(id2(), s / 2.0); }

inline CMat trace_out_b(const CMat& m) {
  CMat r = CMat::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b) r(a, c) += m(2 * a + b, 2 * c + b);
  return r;
}

inline CMat trace_out_a(const CMat& m) {
  CMat r = CMat::Zero(2, 2);
  for (int b = 0; b < 2; ++b)
    for (int d = 0; d < 2; ++d)
      for (int a = 0; a < 2; ++a) r(b, d) += m(2 * a + b, 2 * a + d);
  return r;
}

// -sum p log2 p straight from the full matrix.
inline double entropy(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-300) s -= p * std::log2(p);
  }
  return s;
}

inline double mutual_info(const CMat& m) {
  return entropy(trace_out_b(m)) + entropy(trace_out_a(m)) - entropy(m);
}

// J for the projective basis on A with Bloch direction n, via explicit projectors.
inline double classical_correlation(const CMat& rho, const Eigen::Vector3d& n) {
  const CMat nsig = n(0) * sx() + n(1) * sy() + n(2) * sz();
  double cond = 0.0;
  for (int sign : {+1, -1}) {
    const CMat proj = kron((id2() + double(sign) * nsig) / 2.0, id2());
    const CMat branch = proj * rho * proj;
    const double p = branch.trace().real();
    if (p < 1e-15) continue;
    cond += p * entropy(trace_out_a(branch) / p);
  }
  return entropy(trace_out_a(rho)) - cond;
}

inline Eigen::Vector3d sphere_point(double cos_t, double phi) {
  const double s = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  return {s * std::cos(phi), s * std::sin(phi), cos_t};
}

// max_n J(n) by a fine sphere scan followed by local coordinate shrinking.
inline double max_classical_correlation(const CMat& rho, int n_grid = 60) {
  double best = -1e300, bc = 1.0, bp = 0.0;
  for (int i = 0; i <= n_grid; ++i) {
    const double c = -1.0 + 2.0 * i / n_grid;
    for (int k = 0; k < 2 * n_grid; ++k) {
      const double phi = std::numbers::pi * k / n_grid;
      const double j = classical_correlation(rho, sphere_point(c, phi));
      if (j > best) {
        best = j;
        bc = c;
        bp = phi;
      }
    }
  }
  double hc = 2.0 / n_grid, hp = std::numbers::pi / n_grid;
  for (int it = 0; it < 40; ++it) {
    bool moved = false;
    for (auto [dc, dp] : {std::pair{hc, 0.0}, {-hc, 0.0}, {0.0, hp}, {0.0, -hp}}) {
      const double c = std::clamp(bc + dc, -1.0, 1.0);
      const double j = classical_correlation(rho, sphere_point(c, bp + dp));
      if (j > best) {
        best = j;
        bc = c;
        bp += dp;
        moved = true;
      }
    }
    if (!moved) {
      hc /= 2;
      hp /= 2;
    }
  }
  return best;
}

// min over measurement directions of || rho - sum_k (P_k x 1) rho (P_k x 1) ||^2
inline double geometric_discord_brute(const CMat& rho, int n_grid = 80) {
  auto dist = [&](const Eigen::Vector3d& n) {
    const CMat nsig = n(0) * sx() + n(1) * sy() + n(2) * sz();
    CMat dephased = CMat::Zero(4, 4);
    for (int sign : {+1, -1}) {
      const CMat proj = kron((id2() + double(sign) * nsig) / 2.0, id2());
      dephased += proj * rho * proj;
    }
    return (rho - dephased).squaredNorm();
  };
  double best = 1e300, bc = 1.0, bp = 0.0;
  for (int i = 0; i <= n_grid; ++i) {
    const double c = -1.0 + 2.0 * i / n_grid;
    for (int k = 0; k < 2 * n_grid; ++k) {
      const double phi = std::numbers::pi * k / n_grid;
      const double d = dist(sphere_point(c, phi));
      if (d < best) {
        best = d;
        bc = c;
        bp = phi;
      }
    }
  }
  double hc = 2.0 / n_grid, hp = std::numbers::pi / n_grid;
  for (int it = 0; it < 60; ++it) {
    bool moved = false;
    for (auto [dc, dp] : {std::pair{hc, 0.0}, {-hc, 0.0}, {0.0, hp}, {0.0, -hp}}) {
      const double c = std::clamp(bc + dc, -1.0, 1.0);
      const double d = dist(sphere_point(c, bp + dp));
      if (d < best) {
        best = d;
        bc = c;
        bp += dp;
        moved = true;
      }
    }
    if (!moved) {
      hc /= 2;
      hp /= 2;
    }
  }
  return best;
}

// (1 + x) ln(1 + x) - x, summed as a power series near 0 so small arguments keep
// their relative precision.
inline double one_plus_x_log(double x) {
  if (std::abs(x) >= 0.1) return (1.0 + x) * std::log1p(x) - x;
  double sum = 0.0, pw = x;
  for (int k = 2; k < 40; ++k) {
    pw *= -x;
    sum += pw / (k * (k - 1.0));
  }
  return -sum;
}

// Werner-state discord written out from its Bell weights (1 + 3 eps)/4 and 3 x (1 - eps)/4:
// mutual information 1/4 sum (1 + s) log2(1 + s) over s = 4 l - 1, classical correlation
// 1 - h((1 + eps)/2). The s and the two Bloch terms sum to zero, so only the
// one_plus_x_log parts survive.
inline double werner_discord(double eps) {
  const double ln2 = std::numbers::ln2;
  if (eps == 1.0) return 1.0;
  const double mi = (one_plus_x_log(3.0 * eps) + 3.0 * one_plus_x_log(-eps)) / (4.0 * ln2);
  const double j = (one_plus_x_log(eps) + one_plus_x_log(-eps)) / (2.0 * ln2);
  return mi - j;
}

// Product-operator result of the entangling sequence on the |00> pseudopure state.
inline CMat werner_sequence_output(double xi, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const CMat dev = -c * op_a(sy()) + c * op_b(sy()) -
                   2.0 * s * (op_a(sx()) * op_b(sx()) + op_a(sz()) * op_b(sz())) -
                   2.0 * op_a(sy()) * op_b(sy());
  return (CMat::Identity(4, 4) + xi / 4.0 * dev) / 4.0;
}

// Random full-rank state from a Ginibre matrix.
inline CMat random_state(std::mt19937_64& rng, int dim = 4) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  CMat m = a * a.adjoint();
  return m / m.trace().real();
}

// Unit-trace state sitting close to the maximally mixed one: 1/d + scale * traceless.
inline CMat random_near_mixed(std::mt19937_64& rng, double scale) {
  CMat m = random_state(rng);
  m -= CMat::Identity(4, 4) / 4.0;
  return CMat::Identity(4, 4) / 4.0 + scale * m;
}

inline CMat random_unitary(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMat> qr(a);
  return qr.householderQ() * CMat::Identity(dim, dim);
}

inline nmrdiscord::BdVector random_bd(std::mt19937_64& rng) {
  // Sample Bell weights from a flat Dirichlet and map back to r.
  std::exponential_distribution<double> e(1.0);
  double l[4], sum = 0.0;
  for (double& v : l) sum += (v = e(rng));
  for (double& v : l) v /= sum;
  // lambda = (psi-, phi-, phi+, psi+)
  return {l[2] + l[3] - l[0] - l[1], l[1] + l[3] - l[0] - l[2], l[1] + l[2] - l[0] - l[3]};
}

inline double max_abs_diff(const CMat& a, const CMat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle
