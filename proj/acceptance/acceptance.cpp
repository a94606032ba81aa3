// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cdsp/certify.hpp"
#include "cdsp/error.hpp"
#include "cdsp/kernels.hpp"
#include "cdsp/report.hpp"
#include "cdsp/symbolpipe.hpp"

namespace sp = cdsp::symbolpipe;
namespace kn = cdsp::kernels;
namespace ct = cdsp::certify;
using cdsp::linalg::Matrix;
using cdsp::polyrat::Complex;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

sp::UnitCircleMeasure antipodal(double c1, double c2) { return sp::UnitCircleMeasure({{0.0, c1}, {std::numbers::pi, c2}}); }

template <class F, class G>
double gridDiff(F&& f, G&& g) {
  const auto grid = sp::discGrid(10);
  double worst = 0.0;
  for (const Complex z : grid)
    for (const Complex w : grid) worst = std::max(worst, std::abs(f(z, w) - g(z, w)));
  return worst;
}

sp::UnitCircleMeasure randomMeasure(std::mt19937& rng, int count) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> logWeight(std::log(0.1), std::log(10.0));
  for (;;) {
    std::vector<sp::Atom> atoms;
    std::vector<Complex> points;
    for (int i = 0; i < count; ++i) {
      atoms.push_back({angle(rng), std::exp(logWeight(rng))});
      points.push_back(std::polar(1.0, atoms.back().theta));
    }
    if (cdsp::polyrat::minPairwiseGap(points) >= 0.05) return sp::UnitCircleMeasure(std::move(atoms));
  }
}

// poles {2, -3i}, p = z: the cross products 6i and -6i are distinct and off [1, inf)
sp::RationalSymbol refuter() {
  return sp::RationalSymbol::fromPoles({Complex{2.0}, Complex{0.0, -3.0}},
                                       {cdsp::polyrat::ComplexPolynomial({Complex{}, Complex{1.0}})});
}

std::vector<sp::RationalSymbol> fixtureSymbols() {
  return {sp::measureToSymbol(antipodal(1.0, 1.0)), sp::measureToSymbol(antipodal(4.0, 1.0)),
          sp::measureToSymbol(sp::UnitCircleMeasure({{0.0, 1.0}})), refuter()};
}

std::vector<std::pair<const char*, kn::Rank1Model>> rank1Set() {
  const auto cf = sp::closedFormSingleAtom(1.0, 0.0);
  return {{"(0.5, 0)", kn::mateRank1(0.5, 0.0)},
          {"(0.4, 0.3+0.2i)", kn::mateRank1(0.4, Complex{0.3, 0.2})},
          {"single atom tau=1", kn::mateRank1(cf.gammaB, cf.beta)}};
}

Outcome antipodalGoldens() {
  const Timer timer;
  const sp::SymbolConstruction sc = sp::measureToSymbolDetailed(antipodal(1.0, 1.0));
  const auto rep = ct::runCertificates(sc.symbol, {});
  const double elapsed = timer.seconds();

  // closed form with c+ = 2, c- = 0
  const double cPlus = 2.0, cMinus = 0.0;
  const double gamma = std::pow(std::sqrt(4.0 + cPlus * cPlus) - cPlus, 2) / 4.0;
  const double a1 = (cMinus + std::sqrt(4.0 + cMinus * cMinus)) * (cPlus + std::sqrt(4.0 + cPlus * cPlus)) / 4.0;
  const double a2 = (cMinus - std::sqrt(4.0 + cMinus * cMinus)) * (cPlus + std::sqrt(4.0 + cPlus * cPlus)) / 4.0;

  const double g = sc.symbol.gammaFR().value_or(0.0);
  const auto& al = sc.symbol.alphas();
  const double gDiff = std::abs(g - gamma);
  const double aDiff = al.size() == 2 ? std::max(std::abs(al[0] - a1), std::abs(al[1] - a2)) : 1.0;
  const double printed = std::max({std::abs(g - 0.17157287525381), std::abs(al[0].real() - 2.41421356237309),
                                   std::abs(al[1].real() + 2.41421356237309)});
  const double identity = al.size() == 2 ? std::abs(g + 1.0 / (al[0] * al[1]).real()) : 1.0;
  const double identityClosed = std::abs(gamma + 1.0 / (a1 * a2));

  Outcome o;
  o.pass = gDiff <= 1e-10 && aDiff <= 1e-10 && printed <= 1e-13 && identity <= 1e-12 && identityClosed <= 1e-12 &&
           elapsed < 1.0 && rep.verdict == ct::Verdict::CertifiedSubnormal;
  o.detail = fmt("gamma_FR=%.14f alpha=(%.14f, %.14f) |dgamma|=%.1e |dalpha|=%.1e identity=%.1e t=%.3fs", g,
                 al[0].real(), al[1].real(), gDiff, aDiff, std::max(identity, identityClosed), elapsed);
  return o;
}

Outcome closedFormEtaConsistency() {
  double worst = 0.0;
  for (const auto& [c1, c2] : {std::pair{1.0, 1.0}, {4.0, 1.0}, {0.5, 2.0}}) {
    const auto b = sp::measureToSymbol(antipodal(c1, c2));
    const auto cf = sp::closedFormAntipodal(c1, c2);
    worst = std::max(worst, gridDiff([&](Complex z, Complex w) { return b.eta(z, w); },
                                     [&](Complex z, Complex w) { return cf.eta(z, w); }));
  }
  return {worst <= 1e-8, fmt("max |eta - closed form| on 10x10 grid = %.2e (3 weight pairs)", worst)};
}

Outcome orthogonalityIdentity() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> weight(0.1, 10.0);
  double worst = 0.0;
  int certified = 0;
  for (int i = 0; i < 50; ++i) {
    const auto b = sp::measureToSymbol(antipodal(weight(rng), weight(rng)));
    const auto rep = ct::runCertificates(b, {});
    worst = std::max(worst, rep.orthogonality.residual);
    certified += rep.verdict == ct::Verdict::CertifiedSubnormal ? 1 : 0;
  }
  return {worst <= 1e-9 && certified == 50,
          fmt("max relative residual %.2e, %d/50 CertifiedSubnormal", worst, certified)};
}

Outcome singleAtomCertification() {
  double worst = 0.0;
  int certified = 0;
  for (const double tau : {0.1, 1.0, 10.0}) {
    const auto b = sp::measureToSymbol(sp::UnitCircleMeasure({{0.0, tau}}));
    const auto cf = sp::closedFormSingleAtom(tau, 0.0);
    worst = std::max(worst, gridDiff([&](Complex z, Complex w) { return b.eta(z, w); },
                                     [&](Complex z, Complex w) { return cf.eta(z, w); }));
    certified += ct::runCertificates(b, {}).verdict == ct::Verdict::CertifiedSubnormal ? 1 : 0;
  }
  return {worst <= 1e-9 && certified == 3, fmt("max |eta - b closed form| = %.2e, %d/3 certified", worst, certified)};
}

Outcome engineEquivalence() {
  const Timer timer;
  std::vector<sp::RationalSymbol> symbols = fixtureSymbols();
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) symbols.push_back(sp::measureToSymbol(randomMeasure(rng, 2 + i % 2)));
  double worst = 0.0;
  for (const auto& b : symbols) {
    const Matrix c = ct::crossGram(b);
    const kn::TaylorTable t = kn::symbolTaylor(b, 52);
    for (int l = 1; l <= 12; ++l)
      worst = std::max(worst, (ct::aglerPoleMatrix(b, c, l, 40) - ct::aglerTaylorMatrix(t, l, 40)).cwiseAbs().maxCoeff());
  }
  const double elapsed = timer.seconds();
  return {worst <= 1e-10 && elapsed < 30.0,
          fmt("max entrywise |pole - Taylor| = %.2e over %zu symbols, l<=12, N=40, t=%.2fs", worst, symbols.size(),
              elapsed)};
}

Outcome recursionInvariants() {
  const std::vector<kn::TaylorTable> tables{
      kn::rank1Taylor(Complex{0.4, 0.1}, Complex{0.3, 0.2}, 50), kn::rank1Taylor(0.5, 0.0, 50),
      kn::symbolTaylor(sp::measureToSymbol(antipodal(1.0, 1.0)), 50),
      kn::symbolTaylor(sp::measureToSymbol(antipodal(4.0, 1.0)), 50)};
  double step = 0.0, closed = 0.0;
  for (const auto& t : tables) {
    const kn::KernelTable kt = kn::kernelCoeffs(t);
    for (int k = 0; k <= 12; ++k)
      for (int m = 0; m <= 30; ++m)
        for (int n = 0; n <= 30; ++n) {
          if (m + k + 2 <= kt.N && n + k + 2 <= kt.N)
            step = std::max(step, std::abs(kn::aglerSum(kt, k + 1, m, n) -
                                            (kn::aglerSum(kt, k, m, n) - kn::aglerSum(kt, k, m + 1, n + 1))));
          if (k >= 1) closed = std::max(closed, std::abs(kn::aglerSum(kt, k, m, n) - kn::aglerSumClosedForm(t, k, m, n)));
        }
  }
  return {step <= 1e-12 && closed <= 1e-10, fmt("step recursion %.2e, closed form %.2e (m,n<=30, k<=12)", step, closed)};
}

Outcome representingMeasure() {
  double worst = 0.0, mass = 0.0;
  for (const auto& [name, model] : rank1Set()) {
    const auto check = ct::rank1RepresentingMeasure(model, 20, 4096);
    worst = std::max(worst, check.maxResidual);
    mass = std::max(mass, std::abs(check.totalMass - 1.0));
  }
  return {worst <= 1e-7, fmt("max moment residual %.2e (m,n<=20, 4096 nodes), |mass-1| %.1e", worst, mass)};
}

Outcome mateIdentity() {
  double mate = 0.0, dual = 0.0;
  const auto grid = sp::discGrid(10);
  for (const auto& [name, model] : rank1Set()) {
    mate = std::max(mate, model.mateResidual(512));
    const Matrix k = kn::cauchyDualKernelRank1(model, grid, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const Complex z = grid[i], w = grid[j];
        const Complex viaPhi = (1.0 + model.phi(z) * std::conj(model.phi(w))) / (1.0 - z * std::conj(w));
        const Complex value = k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        dual = std::max(dual, std::abs(viaPhi - value) / std::max(1.0, std::abs(value)));
      }
  }
  return {mate <= 1e-10 && dual <= 1e-10, fmt("| |a|^2+|b|^2-1 | = %.2e on 512 samples, dual formulas %.2e", mate, dual)};
}

Outcome rotationCovariance() {
  const Complex zeta = std::polar(1.0, std::numbers::pi / 7.0);
  std::mt19937 rng(11);
  std::vector<sp::UnitCircleMeasure> measures{antipodal(1.0, 1.0), antipodal(4.0, 1.0),
                                              sp::UnitCircleMeasure({{0.0, 1.0}}), randomMeasure(rng, 2),
                                              randomMeasure(rng, 3)};
  double eig = 0.0, eta = 0.0;
  bool verdicts = true;
  for (const auto& mu : measures) {
    const auto b = sp::measureToSymbol(mu);
    const auto br = sp::measureToSymbol(sp::rotateMeasure(mu, zeta));
    const auto r = ct::runCertificates(b, {});
    const auto rr = ct::runCertificates(br, {});
    verdicts = verdicts && r.verdict == rr.verdict && r.refutedLevel == rr.refutedLevel;
    for (std::size_t l = 0; l < r.poleEigen.size(); ++l) {
      eig = std::max(eig, std::abs(r.poleEigen[l].minEig - rr.poleEigen[l].minEig));
      eig = std::max(eig, std::abs(r.taylorEigen[l].minEig - rr.taylorEigen[l].minEig));
    }
    eta = std::max(eta, gridDiff([&](Complex z, Complex w) { return br.eta(z, w); },
                                 [&](Complex z, Complex w) { return b.eta(zeta * z, zeta * w); }));
  }
  return {verdicts && eig <= 1e-10 && eta <= 1e-9,
          fmt("verdicts %s, eigenvalue lists %.2e, eta_zeta(z,w) - eta(zeta z, zeta w) %.2e",
              verdicts ? "agree" : "DIFFER", eig, eta)};
}

int cliExitCode(const char* inputJson) {
#ifdef CDSP_CLI_PATH
  char path[] = "/tmp/cdsp-acceptance-XXXXXX";
  const int fd = ::mkstemp(path);
  if (fd < 0) return -1;
  std::FILE* f = ::fdopen(fd, "w");
  std::fputs(inputJson, f);
  std::fclose(f);
  const std::string cmd = std::string("\"") + CDSP_CLI_PATH + "\" --input " + path + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  std::remove(path);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  (void)inputJson;
  return -1;
#endif
}

Outcome refutationPath() {
  const auto b = refuter();
  const auto rep = ct::runCertificates(b, {});
  const char* input = R"({"symbol": {"alphas": [[2, 0], [0, -3]], "numerators": [[[0, 0], [1, 0]]]}})";
  cdsp::report::RunOptions options;
  options.timestamp = "acceptance";
  const int runnerCode = cdsp::report::runInput(cdsp::report::parseInput(input), options).exitCode;
  const int cliCode = cliExitCode(input);
  const bool pass = rep.verdict == ct::Verdict::RefutedAtLevel && !rep.necessary.pass && rep.equivalenceApplies &&
                    rep.reason == "necessary-measure" && runnerCode == 1 && cliCode == 1;
  return {pass, fmt("verdict %s via %s (worst violation %.3f), equivalence %s, exit code %d (cli %d)",
                    ct::verdictName(rep.verdict), rep.reason.c_str(), rep.necessary.worstViolation,
                    rep.equivalenceApplies ? "applies" : "does not apply", runnerCode, cliCode)};
}

Outcome truncationMonotonicity() {
  int violations = 0, checks = 0;
  double worstIncrease = 0.0;
  for (const auto& b : fixtureSymbols()) {
    const Matrix c = ct::crossGram(b);
    for (int l = 1; l <= 12; ++l) {
      double previous = std::numeric_limits<double>::infinity();
      for (const int n : {10, 20, 40}) {
        const auto s = cdsp::linalg::hermitianSpectrum(ct::aglerPoleMatrix(b, c, l, n));
        const double increase = s.minEigenvalue - previous;
        // exact interlacing; the slack only absorbs eigensolver roundoff
        if (increase > 1e-12 * std::max(1.0, s.norm)) ++violations;
        if (std::isfinite(increase)) worstIncrease = std::max(worstIncrease, increase);
        previous = s.minEigenvalue;
        ++checks;
      }
    }
  }
  return {violations == 0, fmt("%d violations in %d (fixture, l, N) checks, largest increase %.2e", violations, checks,
                               worstIncrease)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"antipodal goldens c1=c2=1", antipodalGoldens},
      {"closed-form eta consistency", closedFormEtaConsistency},
      {"antipodal orthogonality identity", orthogonalityIdentity},
      {"single-atom certification", singleAtomCertification},
      {"pole/Taylor engine equivalence", engineEquivalence},
      {"Agler recursion invariants", recursionInvariants},
      {"rank-one representing measure", representingMeasure},
      {"mate identity and Cauchy-dual kernel", mateIdentity},
      {"rotation covariance", rotationCovariance},
      {"refutation path", refutationPath},
      {"truncation monotonicity", truncationMonotonicity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
