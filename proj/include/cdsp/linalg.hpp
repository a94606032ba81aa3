#pragma once

#include <Eigen/Dense>

namespace cdsp::linalg {

using Matrix = Eigen::MatrixXcd;

/// (M + M*) / 2
Matrix hermitize(const Matrix& m);

struct HermitianSpectrum {
  double minEigenvalue = 0.0;
  double maxEigenvalue = 0.0;
  /// max |eigenvalue|
  double norm = 0.0;
};

/// Spectrum of the Hermitian part of m. Empty matrices give all zeros.
HermitianSpectrum hermitianSpectrum(const Matrix& m);

/// Upper-triangular P with A = P* P for a Hermitian PSD A, via eigenvalue
/// clipping and a QR factorization of Lambda^{1/2} V*. Eigenvalues in
/// [-clipTol * ||A||, 0) are set to zero; the diagonal of P is made real and
/// nonnegative.
Matrix psdUpperFactor(const Matrix& a, double clipTol);

}  // namespace cdsp::linalg
