#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace nmrdiscord {

using Complex = std::complex<double>;

// Carrier for every operator and state. Dimension is 2 (one qubit) or 4 (two qubits,
// qubit A is the left Kronecker factor, basis order |00>,|01>,|10>,|11>).
using ComplexMatrix = Eigen::MatrixXcd;

enum class Subsystem { A, B };

inline constexpr double kDensityTol = 1e-9;

// Pauli matrices; index 0 is the identity.
Eigen::Matrix2cd pauli(int index);
ComplexMatrix identity(int dim);

/// Immutable validated quantum state. Construct through validate_density().
///
/// The spectrum is computed once at validation from the traceless part, which keeps
/// full relative precision for the nearly maximally mixed states typical of NMR
/// (deviations of order 1e-5 would otherwise drown in the 1/dim background).
class DensityMatrix {
 public:
  const ComplexMatrix& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double trace() const { return trace_; }

  // Eigenvalues of the traceless part, descending.
  const Eigen::VectorXd& deviation_spectrum() const { return deviation_spectrum_; }
  // trace/dim + deviation eigenvalue, descending, with values in [-tol, 0) set to 0.
  const Eigen::VectorXd& spectrum() const { return spectrum_; }

 private:
  friend DensityMatrix validate_density(const ComplexMatrix& m, double tol);
  DensityMatrix(ComplexMatrix mat, double trace, Eigen::VectorXd deviation_spectrum,
                Eigen::VectorXd spectrum);

  ComplexMatrix mat_;
  double trace_;
  Eigen::VectorXd deviation_spectrum_;
  Eigen::VectorXd spectrum_;
};

/// Traceless part rho - (Tr rho / dim) * 1 of a Hermitian matrix.
class DeviationMatrix {
 public:
  explicit DeviationMatrix(const ComplexMatrix& m);
  explicit DeviationMatrix(const DensityMatrix& rho) : DeviationMatrix(rho.mat()) {}

  const ComplexMatrix& mat() const { return mat_; }
  // Tr[dev^2]
  double norm_sq() const;

 private:
  ComplexMatrix mat_;
};

/// Checks Hermiticity, unit trace and positivity, each within `tol`. The stored matrix
/// is the Hermitian part of `m`; eigenvalues in [-tol, 0) are clamped in spectrum().
/// Throws DimMismatch, NotHermitian, TraceNotOne or NotPositive with the offending
/// magnitude in the message.
DensityMatrix validate_density(const ComplexMatrix& m, double tol = kDensityTol);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

// Qubit exchange |ab> -> |ba>.
ComplexMatrix swap_qubits(const ComplexMatrix& m);

// Real eigenvalues in descending order, not clamped.
std::vector<double> eigvals_hermitian(const DensityMatrix& rho);
// Generic Hermitian input (dim 2 or 4). Throws NotHermitian above 1e-10 asymmetry.
std::vector<double> eigvals_hermitian(const ComplexMatrix& h);

/// Entropy in bits, -sum lambda log2 lambda with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// log2(dim) - S(rho): how far the state sits below maximal entropy. Evaluated with
/// log1p on the deviation spectrum so that tiny values keep their relative precision.
double entropy_deficit(const DensityMatrix& rho);

/// Entropy deficit of a qubit state with Bloch vector length `r` (clamped to [0, 1]).
double qubit_entropy_deficit(double r);

// Re Tr[a b]
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Deviation-overlap fidelity Tr[d_test d_target] / sqrt(Tr[d_test^2] Tr[d_target^2]).
/// Signed, range [-1, 1]. Throws ZeroDeviation if either traceless part vanishes.
double fidelity(const DensityMatrix& test, const DensityMatrix& target);

/// Like fidelity(), but normalized by the initial state's deviation instead of the
/// current one, so it also tracks loss of purity.
double attenuated_fidelity(const DensityMatrix& rho_tau, const DensityMatrix& rho_initial,
                           const DensityMatrix& target);

}  // namespace nmrdiscord
