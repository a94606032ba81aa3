#include "cdsp/symbolpipe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdsp/error.hpp"

namespace cdsp::symbolpipe {

using linalg::Matrix;
using polyrat::LaurentHermitian;

struct SymbolBuilder {
  static void setEta(RationalSymbol& s, Matrix eta) { s.eta_ = std::move(eta); }
};

namespace {

constexpr double kSchurTol = 1e-8;
constexpr double kDroppedTol = 1e-9;
constexpr double kEtaNotPsdTol = 1e-8;

}  // namespace

UnitCircleMeasure::UnitCircleMeasure(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.theta) || !std::isfinite(a.weight))
      throw Error(ErrorCode::InvalidArgument, "atom data must be finite");
    if (a.weight < 0.0) throw Error(ErrorCode::InvalidArgument, "atom weights must be nonnegative");
    if (a.weight > 0.0) atoms_.push_back(a);
  }
  if (polyrat::minPairwiseGap(zetas()) <= 1e-9)
    throw Error(ErrorCode::AtomsNotDistinct, "atoms closer than 1e-9 on the circle");
}

std::vector<Complex> UnitCircleMeasure::zetas() const {
  std::vector<Complex> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) out.push_back(std::polar(1.0, a.theta));
  return out;
}

std::vector<double> UnitCircleMeasure::weights() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) out.push_back(a.weight);
  return out;
}

double UnitCircleMeasure::totalMass() const noexcept {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.weight;
  return m;
}

RationalSymbol RationalSymbol::fromPoles(std::vector<Complex> alphas, std::vector<ComplexPolynomial> numerators,
                                         std::optional<double> gammaFR) {
  const int k = static_cast<int>(alphas.size());
  for (const Complex a : alphas) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !(std::abs(a) > 1.0))
      throw Error(ErrorCode::InvalidArgument, "poles must lie outside the closed unit disc");
  }
  if (polyrat::minPairwiseGap(alphas) <= 1e-9) throw Error(ErrorCode::PolesNotDistinct, "poles closer than 1e-9");

  RationalSymbol s;
  s.coefficients_ = Matrix::Zero(static_cast<Eigen::Index>(numerators.size()), k);
  for (std::size_t j = 0; j < numerators.size(); ++j) {
    ComplexPolynomial& p = numerators[j];
    if (!p.isZero() && p.degree() > k)
      throw Error(ErrorCode::DegreeTooLarge, "numerator " + std::to_string(j + 1) + " has degree above the pole count");
    double scale = 0.0;
    for (const Complex c : p.coeffs()) scale = std::max(scale, std::abs(c));
    if (std::abs(p.coeff(0)) > 1e-12 * std::max(1.0, scale))
      throw Error(ErrorCode::InvalidArgument, "numerator " + std::to_string(j + 1) + " must vanish at z = 0");
    std::vector<Complex> c(p.coeffs().begin(), p.coeffs().end());
    if (!c.empty()) c[0] = Complex{};
    p = ComplexPolynomial(std::move(c));
    for (int m = 1; m <= k; ++m) s.coefficients_(static_cast<Eigen::Index>(j), m - 1) = p.coeff(m);
  }
  s.alphas_ = std::move(alphas);
  s.q_ = ComplexPolynomial::fromRoots(s.alphas_);
  s.numerators_ = std::move(numerators);
  s.gammaFR_ = gammaFR;
  s.eta_ = s.coefficients_.adjoint() * s.coefficients_;

  if (s.boundarySupNormSquared() > 1.0 + kSchurTol)
    throw Error(ErrorCode::NotSchur, "sum_j |b_j|^2 exceeds 1 on the unit circle");
  return s;
}

bool RationalSymbol::isZero() const noexcept {
  return std::all_of(numerators_.begin(), numerators_.end(), [](const auto& p) { return p.isZero(); });
}

Complex RationalSymbol::component(int j, Complex z) const {
  return numerators_.at(static_cast<std::size_t>(j))(z) / q_(z);
}

Complex RationalSymbol::eta(Complex z, Complex w) const {
  Complex acc{};
  for (const auto& p : numerators_) acc += p(z) * std::conj(p(w));
  return acc / (q_(z) * std::conj(q_(w)));
}

double RationalSymbol::boundarySupNormSquared(int samples) const {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * s / samples);
    worst = std::max(worst, eta(z, z).real());
  }
  return worst;
}

LaurentHermitian boundaryPolynomial(const UnitCircleMeasure& mu) {
  if (mu.empty()) throw Error(ErrorCode::EmptyMeasure, "measure has no atoms");
  const std::vector<Complex> zetas = mu.zetas();
  const std::vector<double> c = mu.weights();
  std::vector<LaurentHermitian> factors;
  for (const Complex z : zetas) factors.push_back(LaurentHermitian::modulusSquared(z));

  LaurentHermitian total = LaurentHermitian::constant(1.0);
  for (const auto& f : factors) total = total * f;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    LaurentHermitian term = LaurentHermitian::constant(c[j]);
    for (std::size_t l = 0; l < factors.size(); ++l)
      if (l != j) term = term * factors[l];
    total = total + term;
  }
  return total;
}

SymbolConstruction measureToSymbolDetailed(const UnitCircleMeasure& mu) {
  SymbolConstruction out;
  if (mu.empty()) return out;

  const std::vector<Complex> zetas = mu.zetas();
  const std::vector<double> c = mu.weights();
  const auto k = static_cast<Eigen::Index>(zetas.size());

  out.boundary = boundaryPolynomial(mu);
  const polyrat::FejerRieszFactorization fr = polyrat::fejerRieszFactor(out.boundary);

  OuterData& outer = out.outer;
  outer.gammaFR = fr.gamma;
  outer.alphas = fr.alphas;
  outer.q = ComplexPolynomial::fromRoots(fr.alphas);
  const ComplexPolynomial atomsPoly = ComplexPolynomial::fromRoots(zetas);
  outer.theta0 = -std::arg(atomsPoly(0.0) / outer.q(0.0));
  outer.p = atomsPoly * (std::polar(1.0, outer.theta0) / std::sqrt(fr.gamma));

  // Derivatives are exact: p(zeta_j) = 0 gives O'(zeta_j) = p'(zeta_j) / q(zeta_j),
  // and f_j = r_j / (O'(zeta_j) q) with r_j = p / (z - zeta_j).
  const ComplexPolynomial dp = outer.p.derivative();
  const ComplexPolynomial dq = outer.q.derivative();
  std::vector<ComplexPolynomial> reduced;
  GramData& g = out.gram;
  for (Eigen::Index j = 0; j < k; ++j) {
    const Complex zeta = zetas[static_cast<std::size_t>(j)];
    const Complex qz = outer.q(zeta);
    const Complex oPrime = dp(zeta) / qz;
    const ComplexPolynomial r = outer.p.deflate(zeta);
    const Complex fPrime = (r.derivative()(zeta) * qz - r(zeta) * dq(zeta)) / (qz * qz * oPrime);
    g.oPrimeAtAtom.push_back(oPrime);
    g.fPrimeAtAtom.push_back(fPrime);
    reduced.push_back(r);
  }

  g.gram = Matrix(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto si = static_cast<std::size_t>(i);
      const auto sj = static_cast<std::size_t>(j);
      if (i == j) {
        g.gram(i, i) = c[si] * zetas[si] * g.fPrimeAtAtom[si];
      } else {
        g.gram(i, j) = 1.0 / (g.oPrimeAtAtom[si] * std::conj(g.oPrimeAtAtom[sj]) *
                              (1.0 - zetas[si] * std::conj(zetas[sj])));
      }
    }
  }
  g.gram = linalg::hermitize(g.gram);
  const linalg::HermitianSpectrum gs = linalg::hermitianSpectrum(g.gram);
  if (!std::isfinite(gs.norm) || !(gs.minEigenvalue > 1e-14 * gs.norm))
    throw Error(ErrorCode::GramSingular, "Gram matrix of the atom kernels is not positive definite");
  Eigen::LLT<Matrix> llt(g.gram);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::GramSingular, "Cholesky of the Gram matrix failed");
  g.gramInverse = llt.solve(Matrix::Identity(k, k));

  // q(z) eta(z, w) conj(q(w)) = q q* - p p* - (1 - z w*) sum_ij coef_ij r_i(z) conj(r_j(w))
  const Eigen::Index size = k + 1;
  auto column = [size](const ComplexPolynomial& poly) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size);
    for (Eigen::Index m = 0; m < size; ++m) v[m] = poly.coeff(static_cast<int>(m));
    return v;
  };
  const Eigen::VectorXcd qv = column(outer.q);
  const Eigen::VectorXcd pv = column(outer.p);
  Matrix full = qv * qv.adjoint() - pv * pv.adjoint();
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::VectorXcd ri = column(reduced[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::VectorXcd rj = column(reduced[static_cast<std::size_t>(j)]);
      const Complex coef = std::conj(g.gramInverse(i, j)) /
                           (g.oPrimeAtAtom[static_cast<std::size_t>(i)] *
                            std::conj(g.oPrimeAtAtom[static_cast<std::size_t>(j)]));
      const Matrix outerProduct = ri * rj.adjoint();
      full -= coef * outerProduct;
      full.bottomRightCorner(k, k) += coef * outerProduct.topLeftCorner(k, k);
    }
  }
  out.etaFull = full;

  const double scale = full.cwiseAbs().maxCoeff();
  const double dropped = std::max(full.row(0).cwiseAbs().maxCoeff(), full.col(0).cwiseAbs().maxCoeff());
  out.droppedResidual = scale > 0.0 ? dropped / scale : 0.0;
  if (out.droppedResidual > kDroppedTol)
    throw Error(ErrorCode::Internal, "eta(z, 0) does not vanish (relative residual " +
                                         std::to_string(out.droppedResidual) + ")");

  // Entry (m, n) of the kept block is the coefficient of z^m conj(w)^n;
  // <A X(z), X(w)> pairs A(m, n) with z^n conj(w)^m.
  const Matrix a = linalg::hermitize(full.bottomRightCorner(k, k).transpose());
  const linalg::HermitianSpectrum as = linalg::hermitianSpectrum(a);
  if (as.minEigenvalue < -kEtaNotPsdTol * as.norm)
    throw Error(ErrorCode::EtaNotPSD, "eta coefficient matrix is not positive semi-definite");
  const Matrix upper = linalg::psdUpperFactor(a, 1e-10);

  std::vector<ComplexPolynomial> numerators;
  for (Eigen::Index j = 0; j < k; ++j) {
    std::vector<Complex> coeffs(static_cast<std::size_t>(k + 1));
    for (Eigen::Index m = 0; m < k; ++m) coeffs[static_cast<std::size_t>(m + 1)] = upper(j, m);
    numerators.emplace_back(std::move(coeffs));
  }
  out.symbol = RationalSymbol::fromPoles(fr.alphas, std::move(numerators), fr.gamma);
  SymbolBuilder::setEta(out.symbol, a);
  return out;
}

RationalSymbol measureToSymbol(const UnitCircleMeasure& mu) { return measureToSymbolDetailed(mu).symbol; }

std::vector<Complex> discGrid(int n, double radius) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Complex> out;
  for (int j = 0; j < n; ++j) out.push_back(std::polar(radius * (j + 1) / n, golden * j));
  return out;
}

UnitCircleMeasure rotateMeasure(const UnitCircleMeasure& mu, Complex zeta) {
  if (!(std::abs(std::abs(zeta) - 1.0) <= 1e-12)) throw Error(ErrorCode::NotUnimodular, "rotation must be unimodular");
  const double shift = std::arg(zeta);
  std::vector<Atom> atoms;
  for (const Atom& a : mu.atoms()) atoms.push_back({std::remainder(a.theta - shift, 2.0 * std::numbers::pi), a.weight});
  return UnitCircleMeasure(std::move(atoms));
}

ComplexPolynomial AntipodalClosedForm::q() const {
  const Complex roots[] = {Complex{alpha1}, Complex{alpha2}};
  return ComplexPolynomial::fromRoots(roots);
}

Complex AntipodalClosedForm::eta(Complex z, Complex w) const {
  const ComplexPolynomial a = p1();
  const ComplexPolynomial b = p2();
  const ComplexPolynomial den = q();
  return (a(z) * std::conj(a(w)) + b(z) * std::conj(b(w))) / (den(z) * std::conj(den(w)));
}

AntipodalClosedForm closedFormAntipodal(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "antipodal weights must be positive");
  AntipodalClosedForm f;
  f.c1 = c1;
  f.c2 = c2;
  f.cPlus = std::sqrt(c1) + std::sqrt(c2);
  f.cMinus = std::sqrt(c1) - std::sqrt(c2);
  const double rootPlus = std::sqrt(4.0 + f.cPlus * f.cPlus);
  const double rootMinus = std::sqrt(4.0 + f.cMinus * f.cMinus);
  f.gammaFR = (rootPlus - f.cPlus) * (rootPlus - f.cPlus) / 4.0;
  f.alpha1 = (f.cMinus + rootMinus) * (f.cPlus + rootPlus) / 4.0;
  f.alpha2 = (f.cMinus - rootMinus) * (f.cPlus + rootPlus) / 4.0;

  const double a1 = f.alpha1;
  const double a2 = f.alpha2;
  const double prod = a1 * a2;
  const double sum = a1 + a2;

  auto checkedRoot = [&f](double radicand, double scale) {
    if (radicand < -1e-12 * std::max(1.0, scale)) f.radicandsNonnegative = false;
    return std::sqrt(std::max(radicand, 0.0));
  };
  const double r1 = sum * sum + prod * (1.0 - a1 * a1) * (1.0 - a2 * a2) / (prod - 1.0);
  f.gamma1 = checkedRoot(r1, sum * sum);
  // gamma2 conj(gamma1) = -(alpha1 + alpha2)(1 + alpha1 alpha2)
  f.gamma2 = f.gamma1 == 0.0 ? Complex{} : -sum * (1.0 + prod) / std::conj(f.gamma1);
  const double r3 = 1.0 - prod * (3.0 - prod - a1 * a1 - a2 * a2) / (prod - 1.0) - std::norm(f.gamma2);
  f.gamma3 = checkedRoot(r3, 1.0 + std::norm(f.gamma2));
  return f;
}

SingleAtomClosedForm closedFormSingleAtom(double tau, double theta) {
  if (!(tau > 0.0) || !std::isfinite(tau) || !std::isfinite(theta))
    throw Error(ErrorCode::InvalidArgument, "single-atom weight must be positive");
  SingleAtomClosedForm f;
  f.tau = tau;
  f.theta = theta;
  // smaller root of eta^2 - (2 + tau) eta + 1 = 0, written without cancellation
  f.etaValue = 2.0 / ((2.0 + tau) + std::sqrt(tau * (tau + 4.0)));
  const Complex lambdaBar = std::polar(1.0, -theta);
  f.gammaB = std::sqrt(f.etaValue) * std::sqrt(tau) * lambdaBar;
  f.beta = f.etaValue * lambdaBar;
  return f;
}

}  // namespace cdsp::symbolpipe
