#pragma once

// Complex polynomial and rational-function arithmetic on the unit disc:
// Horner evaluation, companion-matrix roots, partial fractions over simple
// poles and Fejer-Riesz factorization of trigonometric polynomials that are
// strictly positive on the unit circle.

#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace cdsp::polyrat {

using Complex = std::complex<double>;

/// Polynomial in z with complex coefficients, index = power of z.
/// Trailing (exact) zeros are trimmed, so the zero polynomial has no
/// coefficients and degree kZeroDegree.
class ComplexPolynomial {
 public:
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<Complex> coeffs);
  ComplexPolynomial(std::initializer_list<Complex> coeffs);

  /// leading * prod (z - root_i)
  static ComplexPolynomial fromRoots(std::span<const Complex> roots, Complex leading = 1.0);

  int degree() const noexcept;
  bool isZero() const noexcept { return coeffs_.empty(); }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  /// Coefficient of z^power; zero outside the stored range.
  Complex coeff(int power) const noexcept;

  Complex operator()(Complex z) const noexcept;

  ComplexPolynomial derivative() const;
  /// Quotient of synthetic division by (z - root); the remainder is dropped.
  ComplexPolynomial deflate(Complex root) const;

  ComplexPolynomial operator+(const ComplexPolynomial& other) const;
  ComplexPolynomial operator-(const ComplexPolynomial& other) const;
  ComplexPolynomial operator*(const ComplexPolynomial& other) const;
  ComplexPolynomial operator*(Complex scale) const;

  friend bool operator==(const ComplexPolynomial&, const ComplexPolynomial&) = default;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

Complex polyEval(const ComplexPolynomial& p, Complex z) noexcept;

/// All roots with multiplicity, from eigenvalues of the balanced companion
/// matrix followed by Newton polishing. Sorted by principal argument, ties by
/// modulus. Throws DegreeZero for constant input.
std::vector<Complex> polyRoots(const ComplexPolynomial& p);

/// Sort key used wherever the library orders points of the plane: principal
/// argument in (-pi, pi], with numerically real points snapped onto the axis,
/// then modulus.
void sortByArgument(std::vector<Complex>& points);
bool argumentLess(Complex a, Complex b) noexcept;

/// p(z) / prod (z - pole_i) = sum residue_i / (z - pole_i), deg p < #poles.
struct PartialFractionExpansion {
  std::vector<Complex> poles;
  std::vector<Complex> residues;
  /// prod_{t != i} (pole_i - pole_t)
  std::vector<Complex> denominators;

  Complex operator()(Complex z) const noexcept;
  /// sum_i residue_i prod_{t != i} (z - pole_t)
  ComplexPolynomial reconstructNumerator() const;
};

/// prod_{t != i} (points[i] - points[t]) for every i.
std::vector<Complex> nodeProducts(std::span<const Complex> points);

/// Smallest pairwise distance; +inf with fewer than two points.
double minPairwiseGap(std::span<const Complex> points) noexcept;

PartialFractionExpansion partialFractionsSimple(const ComplexPolynomial& p,
                                                std::span<const Complex> poles);

/// Hermitian Laurent polynomial sum_{m=-k}^{k} d_m z^m with d_{-m} = conj(d_m),
/// real-valued on the unit circle.
class LaurentHermitian {
 public:
  LaurentHermitian() = default;
  /// d_0, d_1, ..., d_k. The imaginary part of d_0 is discarded; trailing
  /// exact zeros are trimmed.
  explicit LaurentHermitian(std::vector<Complex> nonnegative);

  /// |z - a|^2 on the circle: (1 + |a|^2) - conj(a) z - a / z.
  static LaurentHermitian modulusSquared(Complex root);
  static LaurentHermitian constant(double c);

  int bandwidth() const noexcept { return static_cast<int>(half_.size()) - 1; }
  bool isZero() const noexcept { return half_.empty(); }
  /// d_m for -k <= m <= k, zero outside.
  Complex coeff(int m) const noexcept;
  std::span<const Complex> nonnegativeCoeffs() const noexcept { return half_; }

  /// Laurent evaluation at any nonzero z.
  Complex operator()(Complex z) const noexcept;
  /// Real value at exp(i theta).
  double onCircle(double theta) const noexcept;

  /// z^k R(z), an ordinary polynomial of degree 2k.
  ComplexPolynomial shiftedPolynomial() const;

  LaurentHermitian operator+(const LaurentHermitian& other) const;
  LaurentHermitian operator*(const LaurentHermitian& other) const;
  LaurentHermitian operator*(double scale) const;

 private:
  std::vector<Complex> half_;
};

struct FejerRieszFactorization {
  /// R(z) = gamma * prod |z - alpha_j|^2 on the unit circle.
  double gamma = 0.0;
  /// |alpha_j| > 1, sorted by argument then modulus.
  std::vector<Complex> alphas;
  /// max over boundary samples of |R - gamma prod|z - alpha|^2| / max|R|.
  double relativeResidual = 0.0;
};

/// Throws NotPositiveOnCircle or RootOnCircle.
FejerRieszFactorization fejerRieszFactor(const LaurentHermitian& r);

}  // namespace cdsp::polyrat
