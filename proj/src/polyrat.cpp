#include "cdsp/polyrat.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdsp/error.hpp"

namespace cdsp::polyrat {

namespace {

double l1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Parlett-Reinsch balancing with radix 2 (exact in floating point).
void balance(Eigen::MatrixXcd& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += l1(a(j, i));
        r += l1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

Complex polish(const ComplexPolynomial& p, const ComplexPolynomial& dp, Complex z) {
  double residual = std::abs(p(z));
  for (int iter = 0; iter < 4 && residual > 0.0; ++iter) {
    const Complex slope = dp(z);
    if (std::abs(slope) == 0.0) break;
    const Complex candidate = z - p(z) / slope;
    const double next = std::abs(p(candidate));
    if (!(next < residual)) break;
    z = candidate;
    residual = next;
  }
  return z;
}

double argumentKey(Complex z) {
  if (std::abs(z.imag()) <= 1e-12 * std::abs(z)) return z.real() >= 0.0 ? 0.0 : std::numbers::pi;
  return std::arg(z);
}

}  // namespace

ComplexPolynomial::ComplexPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

ComplexPolynomial::ComplexPolynomial(std::initializer_list<Complex> coeffs) : coeffs_(coeffs) { trim(); }

ComplexPolynomial ComplexPolynomial::fromRoots(std::span<const Complex> roots, Complex leading) {
  std::vector<Complex> c{leading};
  for (const Complex root : roots) {
    std::vector<Complex> next(c.size() + 1, Complex{});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= root * c[i];
    }
    c = std::move(next);
  }
  return ComplexPolynomial(std::move(c));
}

void ComplexPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

int ComplexPolynomial::degree() const noexcept {
  return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
}

Complex ComplexPolynomial::coeff(int power) const noexcept {
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return {};
  return coeffs_[static_cast<std::size_t>(power)];
}

Complex ComplexPolynomial::operator()(Complex z) const noexcept {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ComplexPolynomial ComplexPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return ComplexPolynomial(std::move(d));
}

ComplexPolynomial ComplexPolynomial::deflate(Complex root) const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Complex> q(coeffs_.size() - 1);
  Complex carry{};
  for (std::size_t i = coeffs_.size() - 1; i >= 1; --i) {
    carry = carry * root + coeffs_[i];
    q[i - 1] = carry;
  }
  return ComplexPolynomial(std::move(q));
}

ComplexPolynomial ComplexPolynomial::operator+(const ComplexPolynomial& other) const {
  std::vector<Complex> c(std::max(coeffs_.size(), other.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = coeff(static_cast<int>(i)) + other.coeff(static_cast<int>(i));
  }
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::operator-(const ComplexPolynomial& other) const {
  return *this + other * Complex{-1.0};
}

ComplexPolynomial ComplexPolynomial::operator*(const ComplexPolynomial& other) const {
  if (isZero() || other.isZero()) return {};
  std::vector<Complex> c(coeffs_.size() + other.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * other.coeffs_[j];
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::operator*(Complex scale) const {
  std::vector<Complex> c = coeffs_;
  for (auto& x : c) x *= scale;
  return ComplexPolynomial(std::move(c));
}

Complex polyEval(const ComplexPolynomial& p, Complex z) noexcept { return p(z); }

bool argumentLess(Complex a, Complex b) noexcept {
  const double ka = argumentKey(a);
  const double kb = argumentKey(b);
  if (ka != kb) return ka < kb;
  return std::abs(a) < std::abs(b);
}

void sortByArgument(std::vector<Complex>& points) { std::stable_sort(points.begin(), points.end(), argumentLess); }

std::vector<Complex> polyRoots(const ComplexPolynomial& p) {
  const int n = p.degree();
  if (n < 1) throw Error(ErrorCode::DegreeZero, "polyRoots needs degree >= 1");
  const Complex lead = p.coeff(n);
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -p.coeff(n - 1 - j) / lead;
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  balance(companion);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::Internal, "companion eigensolver failed");

  const ComplexPolynomial dp = p.derivative();
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = polish(p, dp, solver.eigenvalues()[i]);
  sortByArgument(roots);
  return roots;
}

std::vector<Complex> nodeProducts(std::span<const Complex> points) {
  std::vector<Complex> out(points.size(), Complex{1.0});
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t t = 0; t < points.size(); ++t)
      if (t != i) out[i] *= points[i] - points[t];
  return out;
}

double minPairwiseGap(std::span<const Complex> points) noexcept {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) gap = std::min(gap, std::abs(points[i] - points[j]));
  return gap;
}

Complex PartialFractionExpansion::operator()(Complex z) const noexcept {
  Complex acc{};
  for (std::size_t i = 0; i < poles.size(); ++i) acc += residues[i] / (z - poles[i]);
  return acc;
}

ComplexPolynomial PartialFractionExpansion::reconstructNumerator() const {
  ComplexPolynomial acc;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    std::vector<Complex> others;
    for (std::size_t t = 0; t < poles.size(); ++t)
      if (t != i) others.push_back(poles[t]);
    acc = acc + ComplexPolynomial::fromRoots(others, residues[i]);
  }
  return acc;
}

PartialFractionExpansion partialFractionsSimple(const ComplexPolynomial& p, std::span<const Complex> poles) {
  if (minPairwiseGap(poles) <= 1e-9) throw Error(ErrorCode::PolesNotDistinct, "poles closer than 1e-9");
  if (!p.isZero() && p.degree() >= static_cast<int>(poles.size()))
    throw Error(ErrorCode::DegreeTooLarge, "numerator degree must be below the number of poles");

  PartialFractionExpansion out;
  out.poles.assign(poles.begin(), poles.end());
  out.denominators = nodeProducts(poles);
  out.residues.resize(poles.size());
  for (std::size_t i = 0; i < poles.size(); ++i) out.residues[i] = p(poles[i]) / out.denominators[i];
  return out;
}

LaurentHermitian::LaurentHermitian(std::vector<Complex> nonnegative) : half_(std::move(nonnegative)) {
  if (!half_.empty()) half_[0] = Complex{half_[0].real(), 0.0};
  while (!half_.empty() && half_.back() == Complex{}) half_.pop_back();
}

LaurentHermitian LaurentHermitian::modulusSquared(Complex root) {
  return LaurentHermitian({Complex{1.0 + std::norm(root)}, -std::conj(root)});
}

LaurentHermitian LaurentHermitian::constant(double c) { return LaurentHermitian({Complex{c}}); }

Complex LaurentHermitian::coeff(int m) const noexcept {
  const int k = bandwidth();
  if (m > k || -m > k) return {};
  return m >= 0 ? half_[static_cast<std::size_t>(m)] : std::conj(half_[static_cast<std::size_t>(-m)]);
}

Complex LaurentHermitian::operator()(Complex z) const noexcept {
  const int k = bandwidth();
  Complex acc{};
  for (int m = -k; m <= k; ++m) acc += coeff(m) * std::pow(z, m);
  return acc;
}

double LaurentHermitian::onCircle(double theta) const noexcept {
  if (half_.empty()) return 0.0;
  double acc = half_[0].real();
  for (std::size_t m = 1; m < half_.size(); ++m)
    acc += 2.0 * (half_[m] * std::polar(1.0, static_cast<double>(m) * theta)).real();
  return acc;
}

ComplexPolynomial LaurentHermitian::shiftedPolynomial() const {
  const int k = bandwidth();
  if (k < 0) return {};
  std::vector<Complex> c(static_cast<std::size_t>(2 * k + 1));
  for (int m = -k; m <= k; ++m) c[static_cast<std::size_t>(m + k)] = coeff(m);
  return ComplexPolynomial(std::move(c));
}

LaurentHermitian LaurentHermitian::operator+(const LaurentHermitian& other) const {
  std::vector<Complex> c(std::max(half_.size(), other.half_.size()));
  for (std::size_t m = 0; m < c.size(); ++m) c[m] = coeff(static_cast<int>(m)) + other.coeff(static_cast<int>(m));
  return LaurentHermitian(std::move(c));
}

LaurentHermitian LaurentHermitian::operator*(const LaurentHermitian& other) const {
  if (isZero() || other.isZero()) return {};
  const int ka = bandwidth();
  const int kb = other.bandwidth();
  std::vector<Complex> c(static_cast<std::size_t>(ka + kb + 1));
  for (int m = 0; m <= ka + kb; ++m) {
    Complex acc{};
    for (int i = -ka; i <= ka; ++i) acc += coeff(i) * other.coeff(m - i);
    c[static_cast<std::size_t>(m)] = acc;
  }
  return LaurentHermitian(std::move(c));
}

LaurentHermitian LaurentHermitian::operator*(double scale) const {
  std::vector<Complex> c = half_;
  for (auto& x : c) x *= scale;
  return LaurentHermitian(std::move(c));
}

FejerRieszFactorization fejerRieszFactor(const LaurentHermitian& r) {
  constexpr int positivitySamples = 4096;
  constexpr int residualSamples = 512;
  constexpr double onCircleTol = 1e-7;
  constexpr double pairTol = 1e-6;

  double maxValue = -std::numeric_limits<double>::infinity();
  double minValue = std::numeric_limits<double>::infinity();
  for (int s = 0; s < positivitySamples; ++s) {
    const double v = r.onCircle(2.0 * std::numbers::pi * s / positivitySamples);
    maxValue = std::max(maxValue, v);
    minValue = std::min(minValue, v);
  }
  if (!(maxValue > 0.0) || !(minValue > 1e-10 * maxValue))
    throw Error(ErrorCode::NotPositiveOnCircle, "trigonometric polynomial is not strictly positive on the circle");

  FejerRieszFactorization out;
  const int k = r.bandwidth();
  if (k == 0) {
    out.gamma = r.coeff(0).real();
    return out;
  }

  const std::vector<Complex> roots = polyRoots(r.shiftedPolynomial());
  std::vector<Complex> outside;
  std::vector<Complex> inside;
  for (const Complex w : roots) {
    const double modulus = std::abs(w);
    if (std::abs(modulus - 1.0) <= onCircleTol)
      throw Error(ErrorCode::RootOnCircle, "factorization root on the unit circle");
    (modulus > 1.0 ? outside : inside).push_back(w);
  }
  if (static_cast<int>(outside.size()) != k || static_cast<int>(inside.size()) != k)
    throw Error(ErrorCode::RootOnCircle, "roots do not split evenly across the circle");

  std::vector<bool> used(inside.size(), false);
  for (const Complex w : outside) {
    const Complex mirror = 1.0 / std::conj(w);
    std::size_t best = inside.size();
    double bestDistance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inside.size(); ++i) {
      const double d = std::abs(inside[i] - mirror);
      if (!used[i] && d < bestDistance) {
        best = i;
        bestDistance = d;
      }
    }
    if (best == inside.size() || bestDistance > pairTol * std::max(1.0, std::abs(mirror)))
      throw Error(ErrorCode::RootOnCircle, "unpaired factorization root");
    used[best] = true;
    out.alphas.push_back(0.5 * (w + 1.0 / std::conj(inside[best])));
  }
  sortByArgument(out.alphas);

  double product = 1.0;
  for (const Complex a : out.alphas) product *= std::norm(1.0 - a);
  out.gamma = r.onCircle(0.0) / product;

  double worst = 0.0;
  for (int s = 0; s < residualSamples; ++s) {
    const double theta = 2.0 * std::numbers::pi * s / residualSamples;
    const Complex z = std::polar(1.0, theta);
    double model = out.gamma;
    for (const Complex a : out.alphas) model *= std::norm(z - a);
    worst = std::max(worst, std::abs(r.onCircle(theta) - model));
  }
  out.relativeResidual = worst / maxValue;
  if (out.relativeResidual > 1e-8)
    throw Error(ErrorCode::RootOnCircle, "factorization residual too large (ill-conditioned input)");
  return out;
}

}  // namespace cdsp::polyrat
