#pragma once

// Finitely supported measures on the unit circle and the rational
// de Branges-Rovnyak symbol B = (p_1/q, ..., p_k/q) of the associated
// Dirichlet-type space, together with the closed forms available for a single
// atom and for two antipodal atoms.

#include <optional>
#include <vector>

#include "cdsp/linalg.hpp"
#include "cdsp/polyrat.hpp"

namespace cdsp::symbolpipe {

using polyrat::Complex;
using polyrat::ComplexPolynomial;

struct Atom {
  double theta = 0.0;  // radians
  double weight = 0.0;
};

/// sum_j c_j delta_{exp(i theta_j)}. Zero-weight atoms are dropped on
/// construction; negative or non-finite data and atoms closer than 1e-9 on
/// the circle are rejected.
class UnitCircleMeasure {
 public:
  UnitCircleMeasure() = default;
  explicit UnitCircleMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  std::vector<Complex> zetas() const;
  std::vector<double> weights() const;
  double totalMass() const noexcept;

 private:
  std::vector<Atom> atoms_;
};

/// Rational Schur-class row B = (p_1/q, ..., p_d/q), q = prod (z - alpha_i),
/// with distinct poles outside the closed disc, deg p_j <= k and p_j(0) = 0.
/// The default-constructed value is the zero symbol (k = 0).
class RationalSymbol {
 public:
  RationalSymbol() = default;

  /// Validates the invariants above and the Schur bound
  /// sum_j |b_j|^2 <= 1 + 1e-8 on 512 boundary samples.
  static RationalSymbol fromPoles(std::vector<Complex> alphas, std::vector<ComplexPolynomial> numerators,
                                  std::optional<double> gammaFR = std::nullopt);

  int poleCount() const noexcept { return static_cast<int>(alphas_.size()); }
  int numeratorCount() const noexcept { return static_cast<int>(numerators_.size()); }
  bool isZero() const noexcept;

  const std::vector<Complex>& alphas() const noexcept { return alphas_; }
  const ComplexPolynomial& q() const noexcept { return q_; }
  const std::vector<ComplexPolynomial>& numerators() const noexcept { return numerators_; }
  std::optional<double> gammaFR() const noexcept { return gammaFR_; }

  /// Rows are numerators, column m holds the coefficient of z^{m+1}.
  const linalg::Matrix& coefficientMatrix() const noexcept { return coefficients_; }
  /// k x k PSD A with <A X(z), X(w)> = sum_j p_j(z) conj(p_j(w)),
  /// X(z) = (z, ..., z^k)^T.
  const linalg::Matrix& etaMatrix() const noexcept { return eta_; }

  Complex component(int j, Complex z) const;
  /// sum_j b_j(z) conj(b_j(w))
  Complex eta(Complex z, Complex w) const;
  /// max over equispaced boundary samples of sum_j |b_j|^2
  double boundarySupNormSquared(int samples = 512) const;

 private:
  friend struct SymbolBuilder;

  std::vector<Complex> alphas_;
  ComplexPolynomial q_{Complex{1.0}};
  std::vector<ComplexPolynomial> numerators_;
  std::optional<double> gammaFR_;
  linalg::Matrix coefficients_;
  linalg::Matrix eta_;
};

/// Outer part O = p/q of the pipeline, normalized so p(0)/q(0) > 0.
struct OuterData {
  double gammaFR = 1.0;
  std::vector<Complex> alphas;
  ComplexPolynomial p{Complex{1.0}};
  ComplexPolynomial q{Complex{1.0}};
  double theta0 = 0.0;

  Complex operator()(Complex z) const { return p(z) / q(z); }
};

/// Gram matrix G(i, j) = <f_i, f_j> of f_j = O / (O'(zeta_j)(z - zeta_j)).
struct GramData {
  linalg::Matrix gram;
  linalg::Matrix gramInverse;
  std::vector<Complex> fPrimeAtAtom;
  std::vector<Complex> oPrimeAtAtom;
};

/// Every intermediate of measureToSymbol.
struct SymbolConstruction {
  polyrat::LaurentHermitian boundary;
  OuterData outer;
  GramData gram;
  /// (k+1) x (k+1): entry (m, n) is the coefficient of z^m conj(w)^n in
  /// q(z) eta(z, w) conj(q(w)), before the zero row and column are dropped.
  linalg::Matrix etaFull;
  /// max modulus of the dropped row/column relative to max |etaFull|
  double droppedResidual = 0.0;
  RationalSymbol symbol;
};

/// prod_j |z - zeta_j|^2 + sum_j c_j prod_{l != j} |z - zeta_l|^2 on the
/// circle. Throws EmptyMeasure.
polyrat::LaurentHermitian boundaryPolynomial(const UnitCircleMeasure& mu);

SymbolConstruction measureToSymbolDetailed(const UnitCircleMeasure& mu);
RationalSymbol measureToSymbol(const UnitCircleMeasure& mu);

/// n points spiralling out to the given radius (golden-angle spacing), used as
/// the sample grid for kernel comparisons.
std::vector<Complex> discGrid(int n, double radius = 0.9);

/// Measure with mass c_j at conj(zeta) zeta_j. Throws NotUnimodular.
UnitCircleMeasure rotateMeasure(const UnitCircleMeasure& mu, Complex zeta);

/// Explicit symbol for c1 delta_1 + c2 delta_{-1}:
/// p_1 = gamma1 z + gamma2 z^2, p_2 = gamma3 z^2, q = (z - alpha1)(z - alpha2).
struct AntipodalClosedForm {
  double c1 = 0.0;
  double c2 = 0.0;
  double cPlus = 0.0;
  double cMinus = 0.0;
  double gammaFR = 0.0;
  double alpha1 = 0.0;  // > 1
  double alpha2 = 0.0;  // < -1
  Complex gamma1;
  Complex gamma2;
  Complex gamma3;
  /// False when a square-root radicand came out negative beyond roundoff;
  /// callers should then trust the pipeline instead.
  bool radicandsNonnegative = true;

  ComplexPolynomial p1() const { return ComplexPolynomial({Complex{}, gamma1, gamma2}); }
  ComplexPolynomial p2() const { return ComplexPolynomial({Complex{}, Complex{}, gamma3}); }
  ComplexPolynomial q() const;
  Complex eta(Complex z, Complex w) const;
};

/// Throws InvalidArgument unless c1, c2 > 0.
AntipodalClosedForm closedFormAntipodal(double c1, double c2);

/// Rank-one symbol of tau delta_lambda, lambda = exp(i theta):
/// b(z) = sqrt(eta) sqrt(tau) conj(lambda) z / (1 - eta conj(lambda) z)
/// with eta in (0, 1) solving eta + 1/eta = 2 + tau.
struct SingleAtomClosedForm {
  double tau = 0.0;
  double theta = 0.0;
  double etaValue = 0.0;
  Complex gammaB;  // numerator coefficient of b
  Complex beta;    // b(z) = gammaB z / (1 - beta z)

  Complex b(Complex z) const { return gammaB * z / (1.0 - beta * z); }
  Complex eta(Complex z, Complex w) const { return b(z) * std::conj(b(w)); }
  Complex pole() const { return 1.0 / beta; }
};

/// Throws InvalidArgument unless tau > 0.
SingleAtomClosedForm closedFormSingleAtom(double tau, double theta);

}  // namespace cdsp::symbolpipe
