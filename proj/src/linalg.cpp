#include "cdsp/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace cdsp::linalg {

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

HermitianSpectrum hermitianSpectrum(const Matrix& m) {
  HermitianSpectrum out;
  if (m.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(m), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  out.minEigenvalue = ev.minCoeff();
  out.maxEigenvalue = ev.maxCoeff();
  out.norm = std::max(std::abs(out.minEigenvalue), std::abs(out.maxEigenvalue));
  return out;
}

Matrix psdUpperFactor(const Matrix& a, double clipTol) {
  const Eigen::Index n = a.rows();
  if (n == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a));
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double scale = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));

  Eigen::VectorXd root(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lambda = ev[i];
    if (lambda < 0.0 && lambda >= -clipTol * scale) lambda = 0.0;
    root[i] = std::sqrt(std::max(lambda, 0.0));
  }
  const Matrix m = root.asDiagonal() * solver.eigenvectors().adjoint();
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix p = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double modulus = std::abs(p(i, i));
    if (modulus > 0.0) p.row(i) *= std::conj(p(i, i)) / modulus;
  }
  return p;
}

}  // namespace cdsp::linalg
