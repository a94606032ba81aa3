#pragma once

// Subnormality certificates for the Cauchy dual of the shift on H(B):
// orthogonality of the pole data, truncated Agler matrices in pole and Taylor
// form, the atomic necessary measure, complete monotonicity and the rank-one
// representing measure.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdsp/kernels.hpp"
#include "cdsp/symbolpipe.hpp"

namespace cdsp::certify {

using linalg::Matrix;
using polyrat::Complex;

struct CertificateConfig {
  int levels = 12;  // L
  int trunc = 40;   // N
  double tolPSD = 1e-8;
  double tolOrth = 1e-9;

  /// Throws InvalidArgument unless L >= 1, N >= 2 and both tolerances are
  /// positive and finite.
  void validate() const;
};

/// C(r, t) = sum_j p_j(alpha_r) conj(p_j(alpha_t)) / (a_r conj(a_t)).
Matrix crossGram(const symbolpipe::RationalSymbol& b);

struct OrthogonalityResult {
  double residual = 0.0;
  bool pass = true;
};

/// max_{r != t} |sum_j p_j(alpha_r) conj(p_j(alpha_t))| / max_r sum_j |p_j(alpha_r)|^2
OrthogonalityResult orthogonalityTest(const symbolpipe::RationalSymbol& b, const CertificateConfig& cfg);

struct LevelEigen {
  int level = 0;
  double minEig = 0.0;
  double norm = 0.0;
};

/// N x N matrix sum_{r,t} C(r,t) (1 - 1/(alpha_r conj alpha_t))^l alpha_r^{-(m+2)} conj(alpha_t)^{-(n+2)}.
Matrix aglerPoleMatrix(const symbolpipe::RationalSymbol& b, const Matrix& c, int level, int N);
/// N x N matrix sum_j (-1)^j C(l, j) B_{m+1+j} B_{n+1+j}^*. Throws InsufficientRows
/// unless the table has at least N + l rows.
Matrix aglerTaylorMatrix(const kernels::TaylorTable& t, int level, int N);

std::vector<LevelEigen> aglerPoleTest(const symbolpipe::RationalSymbol& b, const Matrix& c,
                                      const CertificateConfig& cfg);
std::vector<LevelEigen> aglerTaylorTest(const kernels::TaylorTable& t, const CertificateConfig& cfg);

struct MeasureAtom {
  Complex location;
  Complex weight;
};

struct NecessaryMeasure {
  std::vector<MeasureAtom> atoms;  // sorted by location
  /// total diagonal mass sum_r C(r,r) / |alpha_r|^4
  double scale = 0.0;
};

struct NecessaryResult {
  NecessaryMeasure measure;
  bool pass = true;
  /// largest violation divided by scale (0 when nothing violates)
  double worstViolation = 0.0;
  std::optional<MeasureAtom> worstAtom;
};

/// Weights C(r,t) / (alpha_r^2 conj(alpha_t)^2) at 1 / (alpha_r conj(alpha_t)),
/// merged over coincident products; the measure must be positive on [0, 1].
NecessaryResult necessaryMeasureTest(const symbolpipe::RationalSymbol& b, const Matrix& c,
                                     const CertificateConfig& cfg);

struct MonotoneResult {
  bool pass = true;
  /// min over l, m of (-1)^l (Delta^l gamma)_m relative to max |gamma|
  double worst = 0.0;
  int worstLevel = 0;
  int worstIndex = 0;
};

/// Checks (-1)^l (Delta^l gamma)_m >= -tol * max|gamma| for l <= levels and
/// m < count. Throws InsufficientLength unless the sequence has count + levels terms.
MonotoneResult completelyMonotoneTest(std::span<const double> gamma, int count, int levels, double tol);

/// gamma_m = ||B_{m+1}||^2 = sum_{r,t} C(r,t) (alpha_r conj alpha_t)^{-(m+2)}, m < length.
std::vector<double> momentSequence(const symbolpipe::RationalSymbol& b, const Matrix& c, int length);

struct RepresentingMeasureCheck {
  double totalMass = 0.0;
  double atomMass = 0.0;  // nu
  Complex atomLocation;   // beta
  /// max_{m,n <= N} |int z^m conj(z)^n dmu - K(m, n)|
  double maxResidual = 0.0;
  double minDensity = 0.0;
};

/// Density 1 - nu (2 Re 1/(1 - e^{-i theta} beta) - 1) against d theta / 2 pi,
/// trapezoidal with quadPoints nodes, plus nu delta_beta.
RepresentingMeasureCheck rank1RepresentingMeasure(const kernels::Rank1Model& model, int N, int quadPoints);

enum class Verdict { CertifiedSubnormal, RefutedAtLevel, InconclusiveAtTruncation };

const char* verdictName(Verdict v) noexcept;

struct CertificateReport {
  Verdict verdict = Verdict::InconclusiveAtTruncation;
  /// level of the refutation witness; 0 for the necessary-measure and
  /// orthogonality-equivalence routes
  int refutedLevel = -1;
  double refutedMinEig = 0.0;
  /// short machine-readable tag for the deciding test
  std::string reason;
  /// exact certificates (orthogonality or the equivalence criterion) versus
  /// pass/fail at the configured truncation only
  bool exact = false;

  CertificateConfig config;
  OrthogonalityResult orthogonality;
  NecessaryResult necessary;
  MonotoneResult monotone;
  std::vector<LevelEigen> poleEigen;
  std::vector<LevelEigen> taylorEigen;
  /// max entrywise |pole matrix - Taylor matrix| over all levels
  double engineDiscrepancy = 0.0;
  /// products alpha_r conj(alpha_t), r != t, are pairwise distinct and avoid [1, inf)
  bool equivalenceApplies = false;
  double taylorCrossCheck = 0.0;
};

CertificateReport runCertificates(const symbolpipe::RationalSymbol& b, const CertificateConfig& cfg);

}  // namespace cdsp::certify
