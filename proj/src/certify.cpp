#include "cdsp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cdsp/error.hpp"

namespace cdsp::certify {

namespace {

constexpr double kProductTol = 1e-9;
constexpr double kSegmentTol = 1e-8;
constexpr double kRefuteFactor = 10.0;

double distanceToUnitSegment(Complex x) {
  const double t = std::clamp(x.real(), 0.0, 1.0);
  return std::abs(x - Complex{t, 0.0});
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

LevelEigen levelEigen(int level, const Matrix& m) {
  const linalg::HermitianSpectrum s = linalg::hermitianSpectrum(m);
  return {level, s.minEigenvalue, s.norm};
}

}  // namespace

void CertificateConfig::validate() const {
  if (levels < 1) throw Error(ErrorCode::InvalidArgument, "levels must be >= 1");
  if (trunc < 2) throw Error(ErrorCode::InvalidArgument, "trunc must be >= 2");
  if (!(tolPSD > 0.0) || !std::isfinite(tolPSD)) throw Error(ErrorCode::InvalidArgument, "tol-psd must be positive");
  if (!(tolOrth > 0.0) || !std::isfinite(tolOrth)) throw Error(ErrorCode::InvalidArgument, "tol-orth must be positive");
}

Matrix crossGram(const symbolpipe::RationalSymbol& b) {
  const int k = b.poleCount();
  const std::vector<Complex>& alphas = b.alphas();
  const std::vector<Complex> a = polyrat::nodeProducts(alphas);
  // values(j, r) = p_j(alpha_r) / a_r
  Matrix values(b.numeratorCount(), k);
  for (int j = 0; j < b.numeratorCount(); ++j)
    for (int r = 0; r < k; ++r)
      values(j, r) = b.numerators()[static_cast<std::size_t>(j)](alphas[static_cast<std::size_t>(r)]) /
                     a[static_cast<std::size_t>(r)];
  return linalg::hermitize(values.transpose() * values.conjugate());
}

OrthogonalityResult orthogonalityTest(const symbolpipe::RationalSymbol& b, const CertificateConfig& cfg) {
  OrthogonalityResult out;
  const int k = b.poleCount();
  Matrix values(b.numeratorCount(), k);
  for (int j = 0; j < b.numeratorCount(); ++j)
    for (int r = 0; r < k; ++r)
      values(j, r) = b.numerators()[static_cast<std::size_t>(j)](b.alphas()[static_cast<std::size_t>(r)]);
  // g(r, t) = sum_j p_j(alpha_r) conj(p_j(alpha_t))
  const Matrix g = values.transpose() * values.conjugate();
  double diag = 0.0;
  double off = 0.0;
  for (int r = 0; r < k; ++r) {
    diag = std::max(diag, g(r, r).real());
    for (int t = 0; t < k; ++t)
      if (t != r) off = std::max(off, std::abs(g(r, t)));
  }
  out.residual = diag > 0.0 ? off / diag : 0.0;
  out.pass = out.residual <= cfg.tolOrth;
  return out;
}

Matrix aglerPoleMatrix(const symbolpipe::RationalSymbol& b, const Matrix& c, int level, int N) {
  const int k = b.poleCount();
  if (k == 0) return Matrix::Zero(N, N);
  const std::vector<Complex>& alphas = b.alphas();
  Matrix v(N, k);
  for (int r = 0; r < k; ++r) {
    const Complex inv = 1.0 / alphas[static_cast<std::size_t>(r)];
    Complex power = inv * inv;
    for (int m = 0; m < N; ++m) {
      v(m, r) = power;
      power *= inv;
    }
  }
  Matrix d(k, k);
  for (int r = 0; r < k; ++r)
    for (int t = 0; t < k; ++t) {
      const Complex x = 1.0 / (alphas[static_cast<std::size_t>(r)] * std::conj(alphas[static_cast<std::size_t>(t)]));
      d(r, t) = c(r, t) * std::pow(1.0 - x, level);
    }
  return linalg::hermitize(v * d * v.adjoint());
}

Matrix aglerTaylorMatrix(const kernels::TaylorTable& t, int level, int N) {
  if (t.N < N + level) throw Error(ErrorCode::InsufficientRows, "Taylor table needs at least N + l rows");
  Matrix m = Matrix::Zero(N, N);
  for (int j = 0; j <= level; ++j) {
    const double coef = (j % 2 == 0 ? 1.0 : -1.0) * kernels::binomial(level, j);
    // rows B_{1+j} .. B_{N+j}
    const auto block = t.rows.middleRows(j, N);
    m += coef * (block * block.adjoint());
  }
  return linalg::hermitize(m);
}

std::vector<LevelEigen> aglerPoleTest(const symbolpipe::RationalSymbol& b, const Matrix& c,
                                      const CertificateConfig& cfg) {
  std::vector<LevelEigen> out;
  for (int l = 1; l <= cfg.levels; ++l) out.push_back(levelEigen(l, aglerPoleMatrix(b, c, l, cfg.trunc)));
  return out;
}

std::vector<LevelEigen> aglerTaylorTest(const kernels::TaylorTable& t, const CertificateConfig& cfg) {
  std::vector<LevelEigen> out;
  for (int l = 1; l <= cfg.levels; ++l) out.push_back(levelEigen(l, aglerTaylorMatrix(t, l, cfg.trunc)));
  return out;
}

NecessaryResult necessaryMeasureTest(const symbolpipe::RationalSymbol& b, const Matrix& c,
                                     const CertificateConfig& cfg) {
  NecessaryResult out;
  const auto k = static_cast<std::size_t>(b.poleCount());
  const std::vector<Complex>& alphas = b.alphas();

  std::vector<Complex> products(k * k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t t = 0; t < k; ++t) products[r * k + t] = alphas[r] * std::conj(alphas[t]);

  DisjointSets classes(k * k);
  for (std::size_t i = 0; i < products.size(); ++i)
    for (std::size_t j = i + 1; j < products.size(); ++j)
      if (std::abs(products[i] - products[j]) <= kProductTol) classes.unite(i, j);

  std::vector<MeasureAtom> merged;
  std::vector<std::size_t> rootOf;
  for (std::size_t i = 0; i < products.size(); ++i) {
    const std::size_t r = i / k;
    const std::size_t t = i % k;
    const Complex weight = c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) /
                           (alphas[r] * alphas[r] * std::conj(alphas[t]) * std::conj(alphas[t]));
    if (r == t) out.measure.scale += weight.real();
    const std::size_t root = classes.find(i);
    const auto it = std::find(rootOf.begin(), rootOf.end(), root);
    if (it == rootOf.end()) {
      rootOf.push_back(root);
      merged.push_back({1.0 / products[root], weight});
    } else {
      merged[static_cast<std::size_t>(it - rootOf.begin())].weight += weight;
    }
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const MeasureAtom& x, const MeasureAtom& y) { return polyrat::argumentLess(x.location, y.location); });

  const double scale = out.measure.scale > 0.0 ? out.measure.scale : 1.0;
  for (const MeasureAtom& atom : merged) {
    double violation = 0.0;
    if (distanceToUnitSegment(atom.location) > kSegmentTol) {
      violation = std::abs(atom.weight);
    } else {
      violation = std::max(-atom.weight.real(), std::abs(atom.weight.imag()));
    }
    violation /= scale;
    if (violation > out.worstViolation) {
      out.worstViolation = violation;
      out.worstAtom = atom;
    }
  }
  out.measure.atoms = std::move(merged);
  out.pass = out.worstViolation <= cfg.tolPSD;
  return out;
}

MonotoneResult completelyMonotoneTest(std::span<const double> gamma, int count, int levels, double tol) {
  if (count < 1 || levels < 0) throw Error(ErrorCode::InvalidArgument, "count must be positive and levels nonnegative");
  if (static_cast<int>(gamma.size()) < count + levels)
    throw Error(ErrorCode::InsufficientLength, "sequence shorter than count + levels");
  MonotoneResult out;
  double scale = 0.0;
  for (const double g : gamma) scale = std::max(scale, std::abs(g));
  if (scale == 0.0) return out;

  // diff holds (-1)^l Delta^l gamma
  std::vector<long double> diff(gamma.begin(), gamma.begin() + count + levels);
  out.worst = std::numeric_limits<double>::infinity();
  for (int l = 0; l <= levels; ++l) {
    for (int m = 0; m < count; ++m) {
      const double value = static_cast<double>(diff[static_cast<std::size_t>(m)]) / scale;
      if (value < out.worst) {
        out.worst = value;
        out.worstLevel = l;
        out.worstIndex = m;
      }
    }
    for (std::size_t m = 0; m + 1 < diff.size(); ++m) diff[m] = diff[m] - diff[m + 1];
    diff.pop_back();
  }
  out.pass = out.worst >= -tol;
  return out;
}

std::vector<double> momentSequence(const symbolpipe::RationalSymbol& b, const Matrix& c, int length) {
  const Matrix m0 = aglerPoleMatrix(b, c, 0, length);
  std::vector<double> out(static_cast<std::size_t>(length));
  for (int m = 0; m < length; ++m) out[static_cast<std::size_t>(m)] = m0(m, m).real();
  return out;
}

RepresentingMeasureCheck rank1RepresentingMeasure(const kernels::Rank1Model& model, int N, int quadPoints) {
  if (N < 0 || quadPoints < 1) throw Error(ErrorCode::InvalidArgument, "N and quadPoints must be positive");
  RepresentingMeasureCheck out;
  out.atomMass = model.nu;
  out.atomLocation = model.beta;

  const kernels::KernelTable kt =
      kernels::kernelCoeffs(kernels::rank1Taylor(model.gammaB, model.beta, std::max(N, 1)));

  // Fourier coefficients of the density: moment(d) = (1/Q) sum f(theta_q) e^{i d theta_q}
  std::vector<double> density(static_cast<std::size_t>(quadPoints));
  out.minDensity = std::numeric_limits<double>::infinity();
  double mass = 0.0;
  for (int q = 0; q < quadPoints; ++q) {
    const double theta = 2.0 * std::numbers::pi * q / quadPoints;
    const Complex poisson = 1.0 / (1.0 - std::polar(1.0, -theta) * model.beta);
    const double f = 1.0 - model.nu * (2.0 * poisson.real() - 1.0);
    density[static_cast<std::size_t>(q)] = f;
    out.minDensity = std::min(out.minDensity, f);
    mass += f;
  }
  out.totalMass = mass / quadPoints + model.nu;

  std::vector<Complex> fourier(static_cast<std::size_t>(2 * N + 1));
  for (int d = -N; d <= N; ++d) {
    Complex acc{};
    for (int q = 0; q < quadPoints; ++q)
      acc += density[static_cast<std::size_t>(q)] * std::polar(1.0, 2.0 * std::numbers::pi * q * d / quadPoints);
    fourier[static_cast<std::size_t>(d + N)] = acc / static_cast<double>(quadPoints);
  }

  std::vector<Complex> betaPow(static_cast<std::size_t>(N + 1), Complex{1.0});
  for (int m = 1; m <= N; ++m) betaPow[static_cast<std::size_t>(m)] = betaPow[static_cast<std::size_t>(m - 1)] * model.beta;

  for (int m = 0; m <= N; ++m) {
    for (int n = 0; n <= N; ++n) {
      const Complex moment = fourier[static_cast<std::size_t>(m - n + N)] +
                             model.nu * betaPow[static_cast<std::size_t>(m)] *
                                 std::conj(betaPow[static_cast<std::size_t>(n)]);
      out.maxResidual = std::max(out.maxResidual, std::abs(moment - kt.K(m, n)));
    }
  }
  return out;
}

const char* verdictName(Verdict v) noexcept {
  switch (v) {
    case Verdict::CertifiedSubnormal: return "CertifiedSubnormal";
    case Verdict::RefutedAtLevel: return "RefutedAtLevel";
    case Verdict::InconclusiveAtTruncation: return "InconclusiveAtTruncation";
  }
  return "Unknown";
}

CertificateReport runCertificates(const symbolpipe::RationalSymbol& b, const CertificateConfig& cfg) {
  cfg.validate();
  CertificateReport rep;
  rep.config = cfg;

  const Matrix c = crossGram(b);
  rep.orthogonality = orthogonalityTest(b, cfg);
  rep.necessary = necessaryMeasureTest(b, c, cfg);

  const kernels::TaylorTable taylor = kernels::symbolTaylor(b, cfg.trunc + cfg.levels);
  rep.taylorCrossCheck = taylor.crossCheckResidual;
  for (int l = 1; l <= cfg.levels; ++l) {
    const Matrix pole = aglerPoleMatrix(b, c, l, cfg.trunc);
    const Matrix tay = aglerTaylorMatrix(taylor, l, cfg.trunc);
    rep.poleEigen.push_back(levelEigen(l, pole));
    rep.taylorEigen.push_back(levelEigen(l, tay));
    rep.engineDiscrepancy = std::max(rep.engineDiscrepancy, (pole - tay).cwiseAbs().maxCoeff());
  }

  const std::vector<double> gamma = momentSequence(b, c, cfg.trunc + cfg.levels);
  rep.monotone = completelyMonotoneTest(gamma, cfg.trunc, cfg.levels, cfg.tolPSD);

  const auto k = static_cast<std::size_t>(b.poleCount());
  std::vector<Complex> cross;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t t = 0; t < k; ++t)
      if (r != t) cross.push_back(b.alphas()[r] * std::conj(b.alphas()[t]));
  rep.equivalenceApplies = k >= 2 && polyrat::minPairwiseGap(cross) > kProductTol &&
                           std::all_of(cross.begin(), cross.end(), [](Complex x) {
                             return !(std::abs(x.imag()) <= kProductTol && x.real() >= 1.0 - kProductTol);
                           });

  if (rep.orthogonality.pass) {
    rep.verdict = Verdict::CertifiedSubnormal;
    rep.reason = "orthogonality";
    rep.exact = true;
    return rep;
  }
  if (!rep.necessary.pass) {
    rep.verdict = Verdict::RefutedAtLevel;
    rep.refutedLevel = 0;
    rep.reason = "necessary-measure";
    rep.exact = true;
    return rep;
  }
  for (const LevelEigen& e : rep.poleEigen) {
    if (e.minEig < -kRefuteFactor * cfg.tolPSD * e.norm) {
      rep.verdict = Verdict::RefutedAtLevel;
      rep.refutedLevel = e.level;
      rep.refutedMinEig = e.minEig;
      rep.reason = "agler-level";
      return rep;
    }
  }
  if (rep.equivalenceApplies) {
    rep.verdict = Verdict::RefutedAtLevel;
    rep.refutedLevel = 0;
    rep.reason = "orthogonality-equivalence";
    rep.exact = true;
    return rep;
  }
  rep.verdict = Verdict::InconclusiveAtTruncation;
  rep.reason = "truncation";
  return rep;
}

}  // namespace cdsp::certify
