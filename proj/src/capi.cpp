#include "cdsp/cdsp.h"

#include <exception>
#include <new>
#include <string>

#include "cdsp/certify.hpp"
#include "cdsp/error.hpp"
#include "cdsp/report.hpp"
#include "cdsp/symbolpipe.hpp"

struct cdsp_measure {
  cdsp::symbolpipe::UnitCircleMeasure value;
};

struct cdsp_symbol {
  cdsp::symbolpipe::RationalSymbol value;
};

struct cdsp_report {
  cdsp::certify::CertificateReport value;
};

struct cdsp_run {
  cdsp::report::RunResult value;
};

namespace {

using cdsp::polyrat::Complex;

thread_local std::string lastError;

cdsp_status fail(cdsp_status status, const std::string& message) {
  lastError = message;
  return status;
}

template <class F>
cdsp_status guarded(F&& f) {
  try {
    f();
    lastError.clear();
    return CDSP_OK;
  } catch (const cdsp::Error& e) {
    return fail(static_cast<cdsp_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CDSP_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CDSP_INTERNAL, e.what());
  }
}

Complex toComplex(cdsp_complex z) { return {z.re, z.im}; }
cdsp_complex fromComplex(Complex z) { return {z.real(), z.imag()}; }

cdsp::certify::CertificateConfig toConfig(const cdsp_config* config) {
  const cdsp_config c = config ? *config : cdsp_config_default();
  cdsp::certify::CertificateConfig out;
  out.levels = c.levels;
  out.trunc = c.trunc;
  out.tolPSD = c.tol_psd;
  out.tolOrth = c.tol_orth;
  return out;
}

}  // namespace

extern "C" {

const char* cdsp_version(void) { return cdsp::report::kToolVersion; }

const char* cdsp_status_name(cdsp_status status) {
  if (status == CDSP_OK) return "Ok";
  return cdsp::errorName(static_cast<cdsp::ErrorCode>(status));
}

const char* cdsp_last_error(void) { return lastError.c_str(); }

cdsp_config cdsp_config_default(void) {
  const cdsp::certify::CertificateConfig c;
  return {c.levels, c.trunc, c.tolPSD, c.tolOrth, 4096, 0};
}

cdsp_status cdsp_measure_create(const double* thetas, const double* weights, size_t count, cdsp_measure** out) {
  if (!out || (count > 0 && (!thetas || !weights))) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<cdsp::symbolpipe::Atom> atoms;
    for (size_t i = 0; i < count; ++i) atoms.push_back({thetas[i], weights[i]});
    *out = new cdsp_measure{cdsp::symbolpipe::UnitCircleMeasure(std::move(atoms))};
  });
}

void cdsp_measure_destroy(cdsp_measure* mu) { delete mu; }

size_t cdsp_measure_size(const cdsp_measure* mu) { return mu ? mu->value.size() : 0; }

cdsp_status cdsp_measure_rotate(const cdsp_measure* mu, cdsp_complex zeta, cdsp_measure** out) {
  if (!mu || !out) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cdsp_measure{cdsp::symbolpipe::rotateMeasure(mu->value, toComplex(zeta))}; });
}

cdsp_status cdsp_symbol_from_measure(const cdsp_measure* mu, cdsp_symbol** out) {
  if (!mu || !out) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cdsp_symbol{cdsp::symbolpipe::measureToSymbol(mu->value)}; });
}

cdsp_status cdsp_symbol_create(const cdsp_complex* alphas, size_t pole_count, const cdsp_complex* numerator_coeffs,
                               size_t numerator_count, size_t coeffs_per_numerator, cdsp_symbol** out) {
  if (!out || (pole_count > 0 && !alphas) ||
      (numerator_count > 0 && coeffs_per_numerator > 0 && !numerator_coeffs))
    return fail(CDSP_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<Complex> poles;
    for (size_t i = 0; i < pole_count; ++i) poles.push_back(toComplex(alphas[i]));
    std::vector<cdsp::polyrat::ComplexPolynomial> numerators;
    for (size_t j = 0; j < numerator_count; ++j) {
      std::vector<Complex> coeffs;
      for (size_t m = 0; m < coeffs_per_numerator; ++m)
        coeffs.push_back(toComplex(numerator_coeffs[j * coeffs_per_numerator + m]));
      numerators.emplace_back(std::move(coeffs));
    }
    *out = new cdsp_symbol{cdsp::symbolpipe::RationalSymbol::fromPoles(std::move(poles), std::move(numerators))};
  });
}

void cdsp_symbol_destroy(cdsp_symbol* b) { delete b; }

size_t cdsp_symbol_pole_count(const cdsp_symbol* b) { return b ? static_cast<size_t>(b->value.poleCount()) : 0; }

size_t cdsp_symbol_numerator_count(const cdsp_symbol* b) {
  return b ? static_cast<size_t>(b->value.numeratorCount()) : 0;
}

cdsp_status cdsp_symbol_alphas(const cdsp_symbol* b, cdsp_complex* out, size_t capacity) {
  if (!b || (capacity > 0 && !out)) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  const auto& alphas = b->value.alphas();
  for (size_t i = 0; i < capacity && i < alphas.size(); ++i) out[i] = fromComplex(alphas[i]);
  lastError.clear();
  return CDSP_OK;
}

cdsp_status cdsp_symbol_gamma_fr(const cdsp_symbol* b, double* out) {
  if (!b || !out) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  if (!b->value.gammaFR()) return fail(CDSP_INVALID_ARGUMENT, "symbol has no factorization constant");
  *out = *b->value.gammaFR();
  lastError.clear();
  return CDSP_OK;
}

cdsp_status cdsp_symbol_eta(const cdsp_symbol* b, cdsp_complex z, cdsp_complex w, cdsp_complex* out) {
  if (!b || !out) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = fromComplex(b->value.eta(toComplex(z), toComplex(w))); });
}

cdsp_status cdsp_certify(const cdsp_symbol* b, const cdsp_config* config, cdsp_report** out) {
  if (!b || !out) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cdsp_report{cdsp::certify::runCertificates(b->value, toConfig(config))}; });
}

void cdsp_report_destroy(cdsp_report* r) { delete r; }

cdsp_verdict cdsp_report_verdict(const cdsp_report* r) {
  if (!r) return CDSP_INCONCLUSIVE_AT_TRUNCATION;
  return static_cast<cdsp_verdict>(cdsp::report::exitCodeFor(r->value.verdict));
}

int cdsp_report_refuted_level(const cdsp_report* r) { return r ? r->value.refutedLevel : -1; }

double cdsp_report_orthogonality_residual(const cdsp_report* r) { return r ? r->value.orthogonality.residual : 0.0; }

int cdsp_report_is_exact(const cdsp_report* r) { return r && r->value.exact ? 1 : 0; }

size_t cdsp_report_level_count(const cdsp_report* r) { return r ? r->value.poleEigen.size() : 0; }

cdsp_status cdsp_report_level(const cdsp_report* r, size_t i, int* level, double* min_eig, double* norm) {
  if (!r) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  if (i >= r->value.poleEigen.size()) return fail(CDSP_INVALID_ARGUMENT, "level index out of range");
  const auto& e = r->value.poleEigen[i];
  if (level) *level = e.level;
  if (min_eig) *min_eig = e.minEig;
  if (norm) *norm = e.norm;
  lastError.clear();
  return CDSP_OK;
}

int cdsp_report_exit_code(const cdsp_report* r) { return r ? cdsp::report::exitCodeFor(r->value.verdict) : 3; }

cdsp_status cdsp_run_json(const char* input_json, const cdsp_config* config, const char* timestamp, cdsp_run** out) {
  if (!input_json || !out) return fail(CDSP_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const cdsp_config c = config ? *config : cdsp_config_default();
    cdsp::report::RunOptions options;
    options.cert = toConfig(&c);
    options.quadPoints = c.quad_points;
    options.dumpTables = c.dump_tables != 0;
    if (timestamp) options.timestamp = timestamp;
    const cdsp::report::InputSpec spec = cdsp::report::parseInput(input_json);
    *out = new cdsp_run{cdsp::report::runInput(spec, options)};
  });
}

void cdsp_run_destroy(cdsp_run* run) { delete run; }

const char* cdsp_run_report_json(const cdsp_run* run) { return run ? run->value.text.c_str() : ""; }

int cdsp_run_exit_code(const cdsp_run* run) { return run ? run->value.exitCode : 3; }

}  // extern "C"
