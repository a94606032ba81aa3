#include "cdsp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdsp/error.hpp"

namespace cdsp::kernels {

namespace {

using LongComplex = std::complex<long double>;

constexpr double kDualTol = 1e-10;
constexpr double kSchurTol = 1e-8;
constexpr double kInnerTol = 1e-8;
constexpr double kTangentGap = 1e-14;

Complex rowProduct(const Matrix& rows, Eigen::Index m, Eigen::Index n) {
  return rows.row(n).dot(rows.row(m));
}

}  // namespace

Complex TaylorTable::product(int m, int n) const {
  if (m < 1 || n < 1 || m > N || n > N) return {};
  return rowProduct(rows, m - 1, n - 1);
}

TaylorTable symbolTaylor(const symbolpipe::RationalSymbol& b, int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "Taylor table needs N >= 1");
  const int d = b.numeratorCount();
  const int k = b.poleCount();
  TaylorTable t;
  t.N = N;
  t.rows = Matrix::Zero(N, d);
  if (k == 0 || b.isZero()) return t;

  const std::vector<Complex>& alphas = b.alphas();
  const std::vector<Complex> a = polyrat::nodeProducts(alphas);

  // pole expansion
  for (int j = 0; j < d; ++j) {
    const auto& p = b.numerators()[static_cast<std::size_t>(j)];
    for (int i = 0; i < k; ++i) {
      const Complex alpha = alphas[static_cast<std::size_t>(i)];
      const Complex inv = 1.0 / alpha;
      const Complex lead = -p(alpha) / (alpha * a[static_cast<std::size_t>(i)]);
      Complex power = inv;
      for (int m = 1; m <= N; ++m) {
        t.rows(m - 1, j) += lead * power;
        power *= inv;
      }
    }
  }

  // power-series division p / q
  const auto& q = b.q();
  const Complex q0 = q.coeff(0);
  double diff = 0.0;
  double scale = 1.0;
  for (int j = 0; j < d; ++j) {
    const auto& p = b.numerators()[static_cast<std::size_t>(j)];
    std::vector<Complex> series(static_cast<std::size_t>(N + 1));
    for (int m = 1; m <= N; ++m) {
      Complex acc = p.coeff(m);
      for (int n = 1; n <= std::min(m, k); ++n) acc -= q.coeff(n) * series[static_cast<std::size_t>(m - n)];
      series[static_cast<std::size_t>(m)] = acc / q0;
      diff = std::max(diff, std::abs(series[static_cast<std::size_t>(m)] - t.rows(m - 1, j)));
      scale = std::max(scale, std::abs(t.rows(m - 1, j)));
    }
  }
  t.crossCheckResidual = diff / scale;
  return t;
}

TaylorTable rank1Taylor(Complex gamma, Complex beta, int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "Taylor table needs N >= 1");
  TaylorTable t;
  t.N = N;
  t.rows = Matrix::Zero(N, 1);
  Complex value = gamma;
  for (int m = 1; m <= N; ++m) {
    t.rows(m - 1, 0) = value;
    value *= beta;
  }
  return t;
}

KernelTable kernelCoeffs(const TaylorTable& t) {
  KernelTable kt;
  kt.N = t.N;
  const Eigen::Index size = t.N + 1;
  kt.K = Matrix::Zero(size, size);
  for (int m = 0; m <= t.N; ++m) {
    for (int n = 0; n <= m; ++n) {
      Complex acc = m == n ? Complex{1.0} : Complex{};
      for (int s = 1; s <= n; ++s) acc -= t.product(m - n + s, s);
      kt.K(m, n) = acc;
      kt.K(n, m) = std::conj(acc);
    }
    kt.K(m, m).imag(0.0);
  }
  return kt;
}

double binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return std::round(out);
}

Complex aglerSum(const KernelTable& kt, int k, int m, int n) {
  if (k < 0 || m < 0 || n < 0 || m + k > kt.N || n + k > kt.N)
    throw Error(ErrorCode::InvalidArgument, "Agler sum index outside the kernel table");
  LongComplex acc{};
  for (int j = 0; j <= k; ++j) {
    const long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
    const Complex entry = kt.K(m + j, n + j);
    acc += sign * static_cast<long double>(binomial(k, j)) * LongComplex(entry.real(), entry.imag());
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

Complex aglerSumClosedForm(const TaylorTable& t, int k, int m, int n) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "closed-form Agler sum needs k >= 1");
  if (m + k > t.N || n + k > t.N) throw Error(ErrorCode::InsufficientRows, "Taylor table too short for Agler sum");
  Complex acc{};
  for (int j = 0; j < k; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(k - 1, j) * t.product(m + 1 + j, n + 1 + j);
  }
  return acc;
}

double Rank1Model::mateResidual(int samples) const {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * s / samples);
    worst = std::max(worst, std::abs(std::norm(a(z)) + std::norm(b(z)) - 1.0));
  }
  return worst;
}

Rank1Model mateRank1(Complex gammaB, Complex beta, int phiTerms) {
  const double absBeta = std::abs(beta);
  if (!(absBeta < 1.0)) throw Error(ErrorCode::InvalidArgument, "rank-one model needs |beta| < 1");
  if (phiTerms < 1) throw Error(ErrorCode::InvalidArgument, "phiTerms must be positive");
  const double g2 = std::norm(gammaB);
  // sup |b| = |gamma| / (1 - |beta|) and max (1 - |b|^2) = 1 - |gamma|^2 / (1 + |beta|)^2
  if (std::abs(gammaB) > (1.0 + kSchurTol) * (1.0 - absBeta))
    throw Error(ErrorCode::NotSchur, "sup |b| exceeds 1 on the circle");
  if (1.0 - g2 / ((1.0 + absBeta) * (1.0 + absBeta)) <= kInnerTol)
    throw Error(ErrorCode::ExtremePoint, "b is inner; no outer mate exists");

  Rank1Model m;
  m.gammaB = gammaB;
  m.beta = beta;
  // |rho - sigma z|^2 = |1 - beta z|^2 - |gamma|^2 on the circle:
  // rho sigma = beta and rho^2 + |beta|^2 / rho^2 = s. The larger root keeps
  // the zero rho / sigma outside the disc.
  // The discriminant s^2 - 4|beta|^2 factors through 1 - |beta| - |gamma|, which
  // vanishes whenever sup |b| = 1 (every single-atom symbol). There the root is
  // double and the square root amplifies roundoff, so a gap at roundoff level
  // is snapped to zero.
  const double absGamma = std::abs(gammaB);
  const double s = 1.0 + absBeta * absBeta - g2;
  const double gap = 1.0 - absBeta - absGamma;
  const double disc = gap <= kTangentGap ? 0.0
                                         : gap * (1.0 - absBeta + absGamma) * (1.0 + absBeta - absGamma) *
                                               (1.0 + absBeta + absGamma);
  const double rho2 = 0.5 * (s + std::sqrt(disc));
  m.rho = std::sqrt(rho2);
  m.sigma = beta / m.rho;
  m.nu = g2 / (1.0 - absBeta * absBeta);

  m.phiCoeffs.assign(static_cast<std::size_t>(phiTerms + 1), Complex{});
  const Complex ratio = m.sigma / m.rho;
  Complex value = gammaB / m.rho;
  for (int k = 1; k <= phiTerms; ++k) {
    m.phiCoeffs[static_cast<std::size_t>(k)] = value;
    value *= ratio;
  }
  return m;
}

Rank1Model rank1FromSymbol(const symbolpipe::RationalSymbol& b, int phiTerms) {
  if (b.poleCount() != 1) throw Error(ErrorCode::InvalidArgument, "rank-one model needs exactly one pole");
  const Complex alpha = b.alphas().front();
  // c z / (z - alpha) = (-c / alpha) z / (1 - z / alpha)
  Complex c;
  if (b.numeratorCount() == 1) {
    c = b.numerators().front().coeff(1);
  } else {
    double n2 = 0.0;
    for (const auto& p : b.numerators()) n2 += std::norm(p.coeff(1));
    c = std::sqrt(n2);
  }
  return mateRank1(-c / alpha, 1.0 / alpha, phiTerms);
}

Matrix gramMonomialsRank1(const Rank1Model& model, int N) {
  if (N < 0) throw Error(ErrorCode::InvalidArgument, "Gram size must be nonnegative");
  if (static_cast<int>(model.phiCoeffs.size()) <= N)
    throw Error(ErrorCode::InsufficientLength, "not enough phi coefficients for the Gram matrix");
  const auto& c = model.phiCoeffs;
  Matrix g(N + 1, N + 1);
  for (int m = 0; m <= N; ++m) {
    for (int n = 0; n <= m; ++n) {
      Complex acc = m == n ? Complex{1.0} : Complex{};
      for (int k = 0; k <= n; ++k)
        acc += std::conj(c[static_cast<std::size_t>(m - n + k)]) * c[static_cast<std::size_t>(k)];
      g(m, n) = acc;
      g(n, m) = std::conj(acc);
    }
    g(m, m).imag(0.0);
  }
  return g;
}

Matrix cauchyDualKernelRank1(const Rank1Model& model, std::span<const Complex> gridZ,
                             std::span<const Complex> gridW) {
  auto inside = [](std::span<const Complex> grid) {
    return std::all_of(grid.begin(), grid.end(), [](Complex z) { return std::abs(z) < 1.0; });
  };
  if (!inside(gridZ) || !inside(gridW)) throw Error(ErrorCode::GridOutsideDisc, "grid points must lie in the open disc");

  const double g2 = std::norm(model.gammaB);
  Matrix out(static_cast<Eigen::Index>(gridZ.size()), static_cast<Eigen::Index>(gridW.size()));
  double worst = 0.0;
  for (std::size_t i = 0; i < gridZ.size(); ++i) {
    const Complex z = gridZ[i];
    const Complex phiZ = model.phi(z);
    for (std::size_t j = 0; j < gridW.size(); ++j) {
      const Complex w = gridW[j];
      const Complex szego = 1.0 / (1.0 - z * std::conj(w));
      const Complex viaPhi = (1.0 + phiZ * std::conj(model.phi(w))) * szego;
      const Complex closed =
          (1.0 + g2 * z * std::conj(w) / ((model.rho - model.sigma * z) * std::conj(model.rho - model.sigma * w))) *
          szego;
      worst = std::max(worst, std::abs(viaPhi - closed) / std::max(1.0, std::abs(closed)));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = closed;
    }
  }
  if (worst > kDualTol)
    throw Error(ErrorCode::Internal, "Cauchy-dual kernel formulas disagree (" + std::to_string(worst) + ")");
  return out;
}

}  // namespace cdsp::kernels
