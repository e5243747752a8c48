#include "nmrdiscord/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrdiscord {

namespace {

constexpr double kHermitianStrict = 1e-10;
constexpr double kZeroDeviation = 1e-14;

void require_dim(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    std::ostringstream os;
    os << what << ": expected a 2x2 or 4x4 matrix, got " << m.rows() << "x" << m.cols();
    throw DimMismatch(os.str());
  }
}

double max_asymmetry(const ComplexMatrix& m, Eigen::Index* row, Eigen::Index* col) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst) {
        worst = d;
        *row = i;
        *col = j;
      }
    }
  }
  return worst;
}

Eigen::VectorXd descending_eigenvalues(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = solver.eigenvalues();  // ascending
  return ev.reverse().eval();
}

ComplexMatrix traceless_part(const ComplexMatrix& m) {
  const Complex shift = m.trace() / static_cast<double>(m.rows());
  ComplexMatrix d = m;
  d.diagonal().array() -= shift;
  return d;
}

}  // namespace

Eigen::Matrix2cd pauli(int index) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd s;
  switch (index) {
    case 0:
      s << 1.0, 0.0, 0.0, 1.0;
      break;
    case 1:
      s << 0.0, 1.0, 1.0, 0.0;
      break;
    case 2:
      s << 0.0, -i, i, 0.0;
      break;
    case 3:
      s << 1.0, 0.0, 0.0, -1.0;
      break;
    default:
      throw DimMismatch("pauli index must be 0..3");
  }
  return s;
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

DensityMatrix::DensityMatrix(ComplexMatrix mat, double trace, Eigen::VectorXd deviation_spectrum,
                             Eigen::VectorXd spectrum)
    : mat_(std::move(mat)),
      trace_(trace),
      deviation_spectrum_(std::move(deviation_spectrum)),
      spectrum_(std::move(spectrum)) {}

DeviationMatrix::DeviationMatrix(const ComplexMatrix& m) : mat_(traceless_part(m)) {
  require_dim(m, "deviation");
}

double DeviationMatrix::norm_sq() const { return hs_inner(mat_, mat_); }

DensityMatrix validate_density(const ComplexMatrix& m, double tol) {
  require_dim(m, "validate_density");
  if (!m.allFinite()) throw NotHermitian("validate_density: matrix has non-finite entries");

  Eigen::Index r = 0, c = 0;
  const double asym = max_asymmetry(m, &r, &c);
  if (asym > tol) {
    std::ostringstream os;
    os << "NotHermitian: max|m - m^H| = " << asym << " at (" << r << "," << c
       << ") exceeds tolerance " << tol;
    throw NotHermitian(os.str());
  }
  const ComplexMatrix herm = (m + m.adjoint()) / 2.0;
  const double tr = herm.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream os;
    os << "TraceNotOne: trace = " << tr << ", |trace - 1| = " << std::abs(tr - 1.0)
       << " exceeds tolerance " << tol;
    throw TraceNotOne(os.str());
  }

  Eigen::VectorXd dev = descending_eigenvalues(traceless_part(herm));
  const double base = tr / static_cast<double>(herm.rows());
  Eigen::VectorXd spec = dev.array() + base;
  const double lowest = spec.minCoeff();
  if (lowest < -tol) {
    std::ostringstream os;
    os << "NotPositive: smallest eigenvalue " << lowest << " is below -" << tol;
    throw NotPositive(os.str());
  }
  spec = spec.cwiseMax(0.0);
  return DensityMatrix(herm, tr, std::move(dev), std::move(spec));
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    std::ostringstream os;
    os << "tensor: both factors must be 2x2, got " << a.rows() << "x" << a.cols() << " and "
       << b.rows() << "x" << b.cols();
    throw DimMismatch(os.str());
  }
  return Eigen::kroneckerProduct(a, b).eval();
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  if (rho.dim() != 4) throw DimMismatch("partial_trace: expected a two-qubit state");
  const ComplexMatrix& m = rho.mat();
  ComplexMatrix red = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        red(i, j) += keep == Subsystem::A ? m(2 * i + k, 2 * j + k) : m(2 * k + i, 2 * k + j);
      }
    }
  }
  return validate_density(red);
}

ComplexMatrix swap_qubits(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw DimMismatch("swap_qubits: expected 4x4");
  static const int perm[4] = {0, 2, 1, 3};
  ComplexMatrix out(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(perm[i], perm[j]) = m(i, j);
  }
  return out;
}

std::vector<double> eigvals_hermitian(const DensityMatrix& rho) {
  const double base = rho.trace() / rho.dim();
  std::vector<double> out;
  out.reserve(rho.dim());
  for (double mu : rho.deviation_spectrum()) out.push_back(base + mu);
  return out;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix& h) {
  require_dim(h, "eigvals_hermitian");
  Eigen::Index r = 0, c = 0;
  const double asym = max_asymmetry(h, &r, &c);
  if (asym > kHermitianStrict) {
    std::ostringstream os;
    os << "NotHermitian: max|h - h^H| = " << asym;
    throw NotHermitian(os.str());
  }
  const ComplexMatrix herm = (h + h.adjoint()) / 2.0;
  const double base = herm.trace().real() / static_cast<double>(herm.rows());
  const Eigen::VectorXd dev = descending_eigenvalues(traceless_part(herm));
  std::vector<double> out;
  for (double mu : dev) out.push_back(base + mu);
  return out;
}

double entropy_deficit(const DensityMatrix& rho) {
  const double d = rho.dim();
  const double t = rho.trace();
  // Entropy of rho / t. With x_i = d mu_i / t (sum x_i = 0):
  //   log2 d - H = 1/d sum [(1 + x) log1p(x) - x] / ln 2
  // Subtracting x drops first-order terms that would cancel only to rounding.
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rho.deviation_spectrum().size(); ++i) {
    const double x = std::max(d * rho.deviation_spectrum()(i) / t, -1.0);
    sum += (x == -1.0 ? 0.0 : (1.0 + x) * std::log1p(x)) - x;
  }
  return sum / (d * std::numbers::ln2);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return std::log2(static_cast<double>(rho.dim())) - entropy_deficit(rho);
}

double qubit_entropy_deficit(double r) {
  r = std::clamp(r, 0.0, 1.0);
  if (r == 1.0) return 1.0;
  return ((1.0 + r) * std::log1p(r) + (1.0 - r) * std::log1p(-r)) / (2.0 * std::numbers::ln2);
}

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.transpose().array() * b.array()).sum().real();
}

double fidelity(const DensityMatrix& test, const DensityMatrix& target) {
  return attenuated_fidelity(test, test, target);
}

double attenuated_fidelity(const DensityMatrix& rho_tau, const DensityMatrix& rho_initial,
                           const DensityMatrix& target) {
  const DeviationMatrix d_tau(rho_tau);
  const DeviationMatrix d_init(rho_initial);
  const DeviationMatrix d_target(target);
  const double n_init = d_init.norm_sq();
  const double n_target = d_target.norm_sq();
  if (std::sqrt(n_init) < kZeroDeviation || std::sqrt(n_target) < kZeroDeviation) {
    std::ostringstream os;
    os << "ZeroDeviation: traceless part vanishes (norms " << std::sqrt(n_init) << ", "
       << std::sqrt(n_target) << ")";
    throw ZeroDeviation(os.str());
  }
  return hs_inner(d_tau.mat(), d_target.mat()) / std::sqrt(n_init * n_target);
}

}  // namespace nmrdiscord
