#include <doctest.h>

#include "cdsp/error.hpp"
#include "support.hpp"

using namespace cdsp::symbolpipe;
using cdsp::ErrorCode;
using cdsp::polyrat::Complex;
using cdsp::polyrat::ComplexPolynomial;
using namespace testsupport;

namespace {

// <A X(z), X(w)> with X(z) = (z, ..., z^k)^T
Complex etaViaMatrix(const RationalSymbol& b, Complex z, Complex w) {
  const int k = static_cast<int>(b.etaMatrix().rows());
  Eigen::VectorXcd xz(k), xw(k);
  for (int m = 0; m < k; ++m) {
    xz[m] = std::pow(z, m + 1);
    xw[m] = std::pow(w, m + 1);
  }
  return xw.dot(b.etaMatrix() * xz);
}

void checkSymbolInvariants(const RationalSymbol& b) {
  for (const auto& p : b.numerators()) CHECK(p.coeff(0) == Complex{});
  CHECK(b.boundarySupNormSquared() <= 1.0 + 1e-8);
  const auto& a = b.etaMatrix();
  const auto& c = b.coefficientMatrix();
  CHECK((c.adjoint() * c - a).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff()));
  CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  const auto spec = cdsp::linalg::hermitianSpectrum(a);
  CHECK(spec.minEigenvalue >= -1e-10 * spec.norm);
  for (Eigen::Index i = 1; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < i && j < c.cols(); ++j) CHECK(c(i, j) == Complex{});
  const double diff = maxGridDiff([&](Complex z, Complex w) { return b.eta(z, w) * b.q()(z) * std::conj(b.q()(w)); },
                                  [&](Complex z, Complex w) { return etaViaMatrix(b, z, w); });
  CHECK(diff <= 1e-9);
}

}  // namespace

TEST_CASE("measure construction") {
  const UnitCircleMeasure mu({{0.0, 1.0}, {1.0, 0.0}, {2.0, 0.5}});
  CHECK(mu.size() == 2);
  CHECK(mu.totalMass() == doctest::Approx(1.5));
  CHECK(UnitCircleMeasure().empty());
  CHECK(codeOf([] { UnitCircleMeasure({{0.0, -1.0}}); }) == ErrorCode::InvalidArgument);
  CHECK(codeOf([] { UnitCircleMeasure({{0.0, 1.0}, {2.0 * std::numbers::pi, 1.0}}); }) == ErrorCode::AtomsNotDistinct);
  CHECK(codeOf([] { UnitCircleMeasure({{0.0, 1.0}, {1e-10, 1.0}}); }) == ErrorCode::AtomsNotDistinct);
}

TEST_CASE("boundary polynomial examples") {
  auto r = boundaryPolynomial(singleAtom(1.0));
  REQUIRE(r.bandwidth() == 1);
  CHECK(std::abs(r.coeff(0) - 3.0) < 1e-15);
  CHECK(std::abs(r.coeff(1) + 1.0) < 1e-15);
  CHECK(std::abs(r.coeff(-1) + 1.0) < 1e-15);

  r = boundaryPolynomial(antipodal(1.0, 1.0));
  REQUIRE(r.bandwidth() == 2);
  CHECK(std::abs(r.coeff(0) - 6.0) < 1e-14);
  CHECK(std::abs(r.coeff(1)) < 1e-14);
  CHECK(std::abs(r.coeff(2) + 1.0) < 1e-14);

  // direct evaluation of the defining product and sum
  std::mt19937 rng(5);
  const UnitCircleMeasure mu = randomMeasure(rng, 3);
  r = boundaryPolynomial(mu);
  const auto zetas = mu.zetas();
  const auto c = mu.weights();
  for (const Complex z : circleSamples(32)) {
    double value = 1.0;
    for (const Complex s : zetas) value *= std::norm(z - s);
    for (std::size_t j = 0; j < zetas.size(); ++j) {
      double term = c[j];
      for (std::size_t l = 0; l < zetas.size(); ++l)
        if (l != j) term *= std::norm(z - zetas[l]);
      value += term;
    }
    CHECK(std::abs(r(z).real() - value) < 1e-12 * value);
  }
  CHECK(codeOf([] { boundaryPolynomial(UnitCircleMeasure()); }) == ErrorCode::EmptyMeasure);
}

TEST_CASE("single atom pipeline") {
  const double eta = (3.0 - std::sqrt(5.0)) / 2.0;
  const RationalSymbol b = measureToSymbol(singleAtom(1.0));
  REQUIRE(b.poleCount() == 1);
  CHECK(std::abs(b.alphas()[0] - 2.618034) < 1e-6);
  CHECK(std::abs(b.alphas()[0] - 1.0 / eta) < 1e-12);
  CHECK(std::abs(std::abs(b.numerators()[0].coeff(1)) - 1.0 / std::sqrt(eta)) < 1e-12);
  CHECK(std::abs(std::abs(b.numerators()[0].coeff(1)) - 1.618034) < 1e-6);
  auto closed = [eta](Complex z, Complex w) {
    const Complex bz = std::sqrt(eta) * z / (1.0 - eta * z);
    const Complex bw = std::sqrt(eta) * w / (1.0 - eta * w);
    return bz * std::conj(bw);
  };
  CHECK(maxGridDiff([&](Complex z, Complex w) { return b.eta(z, w); }, closed) <= 1e-9);
  checkSymbolInvariants(b);

  for (const double tau : {0.1, 1.0, 10.0}) {
    for (const double theta : {0.0, 1.3, -2.9}) {
      const RationalSymbol s = measureToSymbol(singleAtom(tau, theta));
      const SingleAtomClosedForm cf = closedFormSingleAtom(tau, theta);
      CHECK(std::abs(cf.etaValue + 1.0 / cf.etaValue - (2.0 + tau)) < 1e-12);
      CHECK(std::abs(s.alphas()[0] - cf.pole()) < 1e-10);
      CHECK(maxGridDiff([&](Complex z, Complex w) { return s.eta(z, w); },
                        [&](Complex z, Complex w) { return cf.eta(z, w); }) <= 1e-9);
    }
  }
}

TEST_CASE("antipodal pipeline with equal weights") {
  const SymbolConstruction sc = measureToSymbolDetailed(antipodal(1.0, 1.0));
  const RationalSymbol& b = sc.symbol;
  REQUIRE(b.poleCount() == 2);
  const double s = 1.0 + std::sqrt(2.0);
  CHECK(std::abs(b.alphas()[0] - s) < 1e-10);
  CHECK(std::abs(b.alphas()[1] + s) < 1e-10);
  CHECK(std::abs(*b.gammaFR() - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-10);
  // gamma_2 = 0: A is diagonal, p_1 = gamma_1 z, p_2 = gamma_3 z^2
  const auto& a = b.etaMatrix();
  CHECK(std::abs(a(0, 1)) < 1e-12);
  CHECK(std::abs(b.coefficientMatrix()(0, 1)) < 1e-12);
  const AntipodalClosedForm cf = closedFormAntipodal(1.0, 1.0);
  CHECK(std::abs(cf.gamma2) < 1e-14);
  CHECK(std::abs(a(0, 0).real() - std::norm(cf.gamma1)) < 1e-9);
  CHECK(std::abs(a(1, 1).real() - std::norm(cf.gamma3)) < 1e-9);
  checkSymbolInvariants(b);
  CHECK(sc.droppedResidual <= 1e-9);
}

TEST_CASE("antipodal closed forms") {
  const AntipodalClosedForm f = closedFormAntipodal(1.0, 1.0);
  CHECK(f.gammaFR == doctest::Approx(0.171573).epsilon(1e-6));
  CHECK(std::abs(f.gammaFR - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-14);
  CHECK(std::abs(f.alpha1 - (1.0 + std::sqrt(2.0))) < 1e-14);
  CHECK(std::abs(f.alpha2 + (1.0 + std::sqrt(2.0))) < 1e-14);
  CHECK(std::abs(f.gamma2) == 0.0);

  for (const double c : {0.2, 1.0, 7.0}) {
    const AntipodalClosedForm g = closedFormAntipodal(c, c);
    CHECK(std::abs(g.alpha1 + g.alpha2) < 1e-13 * g.alpha1);
  }

  const AntipodalClosedForm h = closedFormAntipodal(4.0, 1.0);
  CHECK(h.cPlus == 3.0);
  CHECK(h.cMinus == 1.0);
  CHECK(std::abs(h.gammaFR - std::pow(std::sqrt(13.0) - 3.0, 2) / 4.0) < 1e-15);
  CHECK(h.gammaFR == doctest::Approx(0.0916731).epsilon(1e-6));
  CHECK(std::abs(h.gammaFR + 1.0 / (h.alpha1 * h.alpha2)) < 1e-12);

  CHECK(codeOf([] { closedFormAntipodal(0.0, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("antipodal pipeline matches the closed form") {
  for (const auto& [c1, c2] : {std::pair{1.0, 1.0}, {4.0, 1.0}, {0.5, 2.0}, {0.1, 9.0}}) {
    CAPTURE(c1);
    CAPTURE(c2);
    const RationalSymbol b = measureToSymbol(antipodal(c1, c2));
    const AntipodalClosedForm cf = closedFormAntipodal(c1, c2);
    CHECK(cf.radicandsNonnegative);
    CHECK(cf.alpha1 > 1.0);
    CHECK(cf.alpha2 < -1.0);
    CHECK(std::abs(cf.gammaFR + 1.0 / (cf.alpha1 * cf.alpha2)) < 1e-12);
    CHECK(std::abs(*b.gammaFR() - cf.gammaFR) < 1e-10);
    CHECK(std::abs(b.alphas()[0] - cf.alpha1) < 1e-10);
    CHECK(std::abs(b.alphas()[1] - cf.alpha2) < 1e-10);
    CHECK(maxGridDiff([&](Complex z, Complex w) { return b.eta(z, w); },
                      [&](Complex z, Complex w) { return cf.eta(z, w); }) <= 1e-8);
    checkSymbolInvariants(b);
  }
}

TEST_CASE("antipodal radicands stay nonnegative on a sweep") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> w(0.1, 10.0);
  for (int i = 0; i < 200; ++i) CHECK(closedFormAntipodal(w(rng), w(rng)).radicandsNonnegative);
}

TEST_CASE("pipeline intermediates") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const UnitCircleMeasure mu = randomMeasure(rng, 2 + trial % 3);
    const SymbolConstruction sc = measureToSymbolDetailed(mu);
    const OuterData& o = sc.outer;
    CHECK((o.q == ComplexPolynomial::fromRoots(o.alphas)));
    const Complex o0 = o(0.0);
    CHECK(o0.real() > 0.0);
    CHECK(std::abs(o0.imag()) <= 1e-12 * std::abs(o0));
    const auto zetas = mu.zetas();
    for (const Complex z : circleSamples(64)) {
      double target = 1.0;
      for (const Complex s : zetas) target *= std::norm(z - s);
      double got = std::norm(o(z)) * o.gammaFR;
      for (const Complex a : o.alphas) got *= std::norm(z - a);
      CHECK(std::abs(got - target) <= 1e-8 * std::max(1.0, target));
    }
    const auto& g = sc.gram;
    CHECK((g.gram - g.gram.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cdsp::linalg::hermitianSpectrum(g.gram).minEigenvalue > 0.0);
    const auto k = g.gram.rows();
    CHECK((g.gram * g.gramInverse - cdsp::linalg::Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(sc.droppedResidual <= 1e-9);
    checkSymbolInvariants(sc.symbol);
  }
}

TEST_CASE("Gram diagonal and off-diagonal agree with kernel inner products") {
  // f_j = O / (O'(zeta_j)(z - zeta_j)) has f_j(zeta_j) = 1 and the off-diagonal
  // entries are <f_i, f_j> in H^2 plus the atom terms; check the off-diagonal
  // closed form against a direct boundary integral of f_i conj(f_j)
  std::mt19937 rng(23);
  const UnitCircleMeasure mu = randomMeasure(rng, 3, 0.3);
  const SymbolConstruction sc = measureToSymbolDetailed(mu);
  const auto zetas = mu.zetas();
  const auto c = mu.weights();
  auto f = [&](std::size_t j, Complex z) {
    return sc.outer(z) / (sc.gram.oPrimeAtAtom[j] * (z - zetas[j]));
  };
  const int n = 1 << 14;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      // D(mu) inner product: H^2 part + sum_l c_l D_{zeta_l}(f_i, f_j); at an atom zeta_l, f_i
      // vanishes unless l = i, and D_zeta(f, g) = <(f - f(zeta))/(z - zeta), ...>_{H^2}
      Complex h2{};
      for (int s = 0; s < n; ++s) {
        const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * (s + 0.5) / n);
        h2 += f(i, z) * std::conj(f(j, z));
      }
      h2 /= static_cast<double>(n);
      Complex local{};
      for (std::size_t l = 0; l < 3; ++l) {
        const Complex fi = l == i ? Complex{1.0} : Complex{};
        const Complex fj = l == j ? Complex{1.0} : Complex{};
        Complex acc{};
        for (int s = 0; s < n; ++s) {
          const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * (s + 0.5) / n);
          acc += (f(i, z) - fi) / (z - zetas[l]) * std::conj((f(j, z) - fj) / (z - zetas[l]));
        }
        local += c[l] * acc / static_cast<double>(n);
      }
      CHECK(std::abs(h2 + local - sc.gram.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) < 1e-6);
    }
  }
}

TEST_CASE("kernel of the produced symbol reproduces monomials in D(mu)") {
  // <z^n, kappa_w> = w^n with <z^m, z^n> = delta + sum_j c_j min(m, n) zeta_j^{m-n}
  std::mt19937 rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const UnitCircleMeasure mu = trial == 0 ? antipodal(4.0, 1.0) : randomMeasure(rng, 1 + trial % 3);
    const RationalSymbol b = measureToSymbol(mu);
    const int big = 160;
    const auto kt = cdsp::kernels::kernelCoeffs(cdsp::kernels::symbolTaylor(b, big));
    const auto zetas = mu.zetas();
    const auto c = mu.weights();
    auto gram = [&](int m, int n) {
      Complex acc = m == n ? Complex{1.0} : Complex{};
      for (std::size_t j = 0; j < zetas.size(); ++j) acc += c[j] * std::min(m, n) * std::pow(zetas[j], m - n);
      return acc;
    };
    for (const Complex w : {Complex{0.3, 0.2}, Complex{-0.5, 0.1}, Complex{0.0, 0.6}}) {
      std::vector<Complex> kw(static_cast<std::size_t>(big + 1));
      for (int m = 0; m <= big; ++m) {
        Complex acc{};
        for (int l = 0; l <= big; ++l) acc += kt.K(m, l) * std::pow(std::conj(w), l);
        kw[static_cast<std::size_t>(m)] = acc;
      }
      for (int n = 0; n <= 5; ++n) {
        CAPTURE(trial);
        CAPTURE(n);
        Complex inner{};
        for (int m = 0; m <= big; ++m) inner += gram(n, m) * std::conj(kw[static_cast<std::size_t>(m)]);
        CHECK(std::abs(inner - std::pow(w, n)) < 1e-9);
      }
    }
  }
}

TEST_CASE("Gram is positive definite on random measures") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const SymbolConstruction sc = measureToSymbolDetailed(randomMeasure(rng, 2 + trial % 2));
    CHECK(cdsp::linalg::hermitianSpectrum(sc.gram.gram).minEigenvalue > 0.0);
  }
}

TEST_CASE("empty measure gives the zero symbol") {
  const RationalSymbol b = measureToSymbol(UnitCircleMeasure());
  CHECK(b.poleCount() == 0);
  CHECK(b.isZero());
  CHECK(b.eta(0.3, 0.2) == Complex{});
}

TEST_CASE("rotation of measures") {
  const UnitCircleMeasure mu({{0.4, 1.0}, {2.0, 3.0}});
  const UnitCircleMeasure same = rotateMeasure(mu, 1.0);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    CHECK(std::abs(same.zetas()[j] - mu.zetas()[j]) < 1e-15);
    CHECK(same.weights()[j] == mu.weights()[j]);
  }
  const UnitCircleMeasure di({{std::numbers::pi / 2, 2.0}});
  const UnitCircleMeasure d1 = rotateMeasure(di, Complex{0.0, 1.0});
  CHECK(std::abs(d1.zetas()[0] - 1.0) < 1e-15);
  CHECK(d1.weights()[0] == 2.0);
  CHECK(codeOf([&] { rotateMeasure(mu, 1.01); }) == ErrorCode::NotUnimodular);
}

TEST_CASE("rotation covariance of eta") {
  std::mt19937 rng(37);
  const Complex zeta = std::polar(1.0, std::numbers::pi / 7);
  for (int trial = 0; trial < 8; ++trial) {
    const UnitCircleMeasure mu = trial == 0 ? antipodal(1.0, 1.0) : randomMeasure(rng, 1 + trial % 3);
    const RationalSymbol b = measureToSymbol(mu);
    const RationalSymbol br = measureToSymbol(rotateMeasure(mu, zeta));
    CHECK(maxGridDiff([&](Complex z, Complex w) { return br.eta(z, w); },
                      [&](Complex z, Complex w) { return b.eta(zeta * z, zeta * w); }) <= 1e-9);
  }
}

TEST_CASE("symbol validation") {
  const ComplexPolynomial z({0.0, 1.0});
  CHECK(codeOf([&] { RationalSymbol::fromPoles({0.5}, {z}); }) == ErrorCode::InvalidArgument);
  CHECK(codeOf([&] { RationalSymbol::fromPoles({2.0, 2.0}, {z}); }) == ErrorCode::PolesNotDistinct);
  CHECK(codeOf([&] { RationalSymbol::fromPoles({2.0}, {ComplexPolynomial({0.0, 0.0, 1.0})}); }) ==
        ErrorCode::DegreeTooLarge);
  CHECK(codeOf([&] { RationalSymbol::fromPoles({2.0}, {ComplexPolynomial({0.1, 1.0})}); }) ==
        ErrorCode::InvalidArgument);
  // |3z / (z - 2)| = 3 at z = 1
  CHECK(codeOf([&] { RationalSymbol::fromPoles({2.0}, {ComplexPolynomial({0.0, 3.0})}); }) == ErrorCode::NotSchur);
  const RationalSymbol ok = RationalSymbol::fromPoles({2.0}, {z});
  CHECK(std::abs(ok.component(0, 0.5) - 0.5 / (0.5 - 2.0)) < 1e-15);
}

TEST_CASE("disc grid stays inside the radius") {
  const auto g = discGrid(10);
  CHECK(g.size() == 10);
  for (const Complex z : g) CHECK(std::abs(z) <= 0.9 + 1e-15);
  CHECK(std::abs(std::abs(g.back()) - 0.9) < 1e-15);
}
