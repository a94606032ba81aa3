#pragma once

// Taylor-coefficient engines: rows B_m of a rational symbol, the kernel
// coefficient table of kappa_B, Agler sums, and the rank-one model
// (mate, phi = b / a, monomial Gram matrix, Cauchy-dual kernel).

#include <span>
#include <vector>

#include "cdsp/linalg.hpp"
#include "cdsp/symbolpipe.hpp"

namespace cdsp::kernels {

using linalg::Matrix;
using polyrat::Complex;

/// Rows B_1..B_N; rows(m - 1, j) = b_{j,m}, the z^m coefficient of b_j.
struct TaylorTable {
  int N = 0;
  Matrix rows;
  /// max |pole formula - power-series division| / max(1, max |b_{j,m}|)
  double crossCheckResidual = 0.0;

  int width() const noexcept { return static_cast<int>(rows.cols()); }
  /// B_m B_n^*; zero when either index is outside 1..N.
  Complex product(int m, int n) const;
};

/// Throws InvalidArgument for N < 1.
TaylorTable symbolTaylor(const symbolpipe::RationalSymbol& b, int N);
/// b(z) = gamma z / (1 - beta z): B_m = gamma beta^{m-1}.
TaylorTable rank1Taylor(Complex gamma, Complex beta, int N);

/// K(m, n), 0 <= m, n <= N: coefficient of z^m conj(w)^n in kappa_B.
struct KernelTable {
  int N = 0;
  Matrix K;
};

KernelTable kernelCoeffs(const TaylorTable& t);

/// f_k(m, n) = sum_j (-1)^j C(k, j) K(m + j, n + j), accumulated in long
/// double. Requires m + k, n + k <= N.
Complex aglerSum(const KernelTable& kt, int k, int m, int n);
/// sum_{j<k} (-1)^j C(k-1, j) B_{m+1+j} B_{n+1+j}^*, k >= 1.
Complex aglerSumClosedForm(const TaylorTable& t, int k, int m, int n);

double binomial(int n, int k) noexcept;

/// b(z) = gammaB z / (1 - beta z) with outer mate
/// a(z) = (rho - sigma z) / (1 - beta z), |a|^2 + |b|^2 = 1 on the circle.
struct Rank1Model {
  Complex gammaB;
  Complex beta;
  double rho = 1.0;
  Complex sigma;
  double nu = 0.0;
  /// phi_0 = 0, phi_m = (gammaB / rho)(sigma / rho)^{m-1}
  std::vector<Complex> phiCoeffs;

  Complex b(Complex z) const { return gammaB * z / (1.0 - beta * z); }
  Complex a(Complex z) const { return (rho - sigma * z) / (1.0 - beta * z); }
  /// b / a evaluated from the two factors
  Complex phi(Complex z) const { return b(z) / a(z); }
  /// max over samples of | |a|^2 + |b|^2 - 1 |
  double mateResidual(int samples = 512) const;
};

/// Throws InvalidArgument unless |beta| < 1, NotSchur when sup |b| > 1 and
/// ExtremePoint when b is inner (1 - |b|^2 vanishes on the whole circle).
/// A boundary point with |b| = 1 is admissible.
Rank1Model mateRank1(Complex gammaB, Complex beta, int phiTerms = 64);

/// Scalar rank-one data of a one-pole symbol: every numerator is c_j z and
/// sum_j |b_j|^2 = |gamma z / (1 - beta z)|^2. Throws InvalidArgument for
/// other pole counts.
Rank1Model rank1FromSymbol(const symbolpipe::RationalSymbol& b, int phiTerms = 64);

/// <z^m, z^n>, 0 <= m, n <= N: delta + sum_k conj(phi_{m-n+k}) phi_k for m >= n.
Matrix gramMonomialsRank1(const Rank1Model& model, int N);

/// (1 + phi(z) conj(phi(w))) / (1 - z conj(w)) on gridZ x gridW, cross-checked
/// against the (rho, sigma) closed form; throws Internal if they differ by
/// more than 1e-10 relative, GridOutsideDisc for points with |z| >= 1.
Matrix cauchyDualKernelRank1(const Rank1Model& model, std::span<const Complex> gridZ,
                             std::span<const Complex> gridW);

}  // namespace cdsp::kernels
