#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cdsp/error.hpp"
#include "cdsp/kernels.hpp"
#include "cdsp/symbolpipe.hpp"

namespace testsupport {

using cdsp::polyrat::Complex;
using cdsp::polyrat::ComplexPolynomial;
using cdsp::symbolpipe::RationalSymbol;
using cdsp::symbolpipe::UnitCircleMeasure;

/// Code of the cdsp::Error thrown by f; Internal when nothing is thrown.
template <class F>
cdsp::ErrorCode codeOf(F&& f) {
  try {
    f();
  } catch (const cdsp::Error& e) {
    return e.code();
  }
  return cdsp::ErrorCode::Internal;
}

inline UnitCircleMeasure antipodal(double c1, double c2) {
  return UnitCircleMeasure({{0.0, c1}, {std::numbers::pi, c2}});
}

inline UnitCircleMeasure singleAtom(double tau, double theta = 0.0) { return UnitCircleMeasure({{theta, tau}}); }

/// b(z) = gamma z / (1 - beta z) written with the pole 1 / beta.
inline RationalSymbol rank1Symbol(Complex gamma, Complex beta) {
  return RationalSymbol::fromPoles({1.0 / beta}, {ComplexPolynomial({Complex{}, -gamma / beta})});
}

/// k = 2 poles {2, -3i}, single numerator p = z: cross products 6i and -6i.
inline RationalSymbol syntheticRefuter() {
  return RationalSymbol::fromPoles({Complex{2.0, 0.0}, Complex{0.0, -3.0}}, {ComplexPolynomial({Complex{}, Complex{1.0}})});
}

/// Random measure with `count` atoms whose pairwise chordal gaps exceed minGap.
inline UnitCircleMeasure randomMeasure(std::mt19937& rng, int count, double minGap = 0.05) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> logWeight(std::log(0.1), std::log(10.0));
  for (;;) {
    std::vector<cdsp::symbolpipe::Atom> atoms;
    std::vector<Complex> points;
    for (int i = 0; i < count; ++i) {
      atoms.push_back({angle(rng), std::exp(logWeight(rng))});
      points.push_back(std::polar(1.0, atoms.back().theta));
    }
    if (cdsp::polyrat::minPairwiseGap(points) >= minGap) return UnitCircleMeasure(std::move(atoms));
  }
}

template <class F, class G>
double maxGridDiff(F&& f, G&& g, int n = 10) {
  const std::vector<Complex> grid = cdsp::symbolpipe::discGrid(n);
  double worst = 0.0;
  for (const Complex z : grid)
    for (const Complex w : grid) worst = std::max(worst, std::abs(f(z, w) - g(z, w)));
  return worst;
}

inline std::vector<Complex> circleSamples(int n) {
  std::vector<Complex> out;
  for (int s = 0; s < n; ++s) out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * s / n));
  return out;
}

}  // namespace testsupport
