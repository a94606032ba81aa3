#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cdsp/cdsp.h"

namespace {

struct MeasureDeleter {
  void operator()(cdsp_measure* p) const { cdsp_measure_destroy(p); }
};
struct SymbolDeleter {
  void operator()(cdsp_symbol* p) const { cdsp_symbol_destroy(p); }
};
struct ReportDeleter {
  void operator()(cdsp_report* p) const { cdsp_report_destroy(p); }
};
struct RunDeleter {
  void operator()(cdsp_run* p) const { cdsp_run_destroy(p); }
};
using MeasurePtr = std::unique_ptr<cdsp_measure, MeasureDeleter>;
using SymbolPtr = std::unique_ptr<cdsp_symbol, SymbolDeleter>;
using ReportPtr = std::unique_ptr<cdsp_report, ReportDeleter>;
using RunPtr = std::unique_ptr<cdsp_run, RunDeleter>;

MeasurePtr makeMeasure(const std::vector<double>& thetas, const std::vector<double>& weights) {
  cdsp_measure* raw = nullptr;
  REQUIRE(cdsp_measure_create(thetas.data(), weights.data(), thetas.size(), &raw) == CDSP_OK);
  return MeasurePtr(raw);
}

SymbolPtr symbolOf(const cdsp_measure* mu) {
  cdsp_symbol* raw = nullptr;
  REQUIRE(cdsp_symbol_from_measure(mu, &raw) == CDSP_OK);
  return SymbolPtr(raw);
}

std::complex<double> eta(const cdsp_symbol* b, std::complex<double> z, std::complex<double> w) {
  cdsp_complex out{};
  REQUIRE(cdsp_symbol_eta(b, {z.real(), z.imag()}, {w.real(), w.imag()}, &out) == CDSP_OK);
  return {out.re, out.im};
}

}  // namespace

TEST_CASE("version and names") {
  CHECK(std::string(cdsp_version()) == "1.0.0");
  CHECK(std::string(cdsp_status_name(CDSP_OK)) == "Ok");
  CHECK(std::string(cdsp_status_name(CDSP_INPUT_SCHEMA)) == "InputSchema");
  CHECK(std::string(cdsp_status_name(static_cast<cdsp_status>(99))) == "Unknown");
  const cdsp_config c = cdsp_config_default();
  CHECK(c.levels == 12);
  CHECK(c.trunc == 40);
  CHECK(c.tol_psd == 1e-8);
  CHECK(c.tol_orth == 1e-9);
  CHECK(c.quad_points == 4096);
  CHECK(c.dump_tables == 0);
}

TEST_CASE("measure handles") {
  const auto mu = makeMeasure({0.0, 1.0, 2.0}, {1.0, 0.0, 2.0});
  CHECK(cdsp_measure_size(mu.get()) == 2);

  cdsp_measure* raw = nullptr;
  const double thetas[] = {0.0, 0.0};
  const double weights[] = {1.0, 1.0};
  CHECK(cdsp_measure_create(thetas, weights, 2, &raw) == CDSP_ATOMS_NOT_DISTINCT);
  CHECK(raw == nullptr);
  CHECK(std::string(cdsp_last_error()).find("AtomsNotDistinct") != std::string::npos);
  const double negative[] = {-1.0};
  CHECK(cdsp_measure_create(thetas, negative, 1, &raw) == CDSP_INVALID_ARGUMENT);
  CHECK(cdsp_measure_create(nullptr, nullptr, 0, &raw) == CDSP_OK);
  CHECK(cdsp_measure_size(raw) == 0);
  cdsp_measure_destroy(raw);
  CHECK(cdsp_measure_create(thetas, weights, 1, nullptr) == CDSP_INVALID_ARGUMENT);

  CHECK(cdsp_measure_rotate(mu.get(), {2.0, 0.0}, &raw) == CDSP_NOT_UNIMODULAR);
  cdsp_measure_destroy(nullptr);
}

TEST_CASE("antipodal symbol through the C interface") {
  const auto mu = makeMeasure({0.0, std::numbers::pi}, {1.0, 1.0});
  const auto b = symbolOf(mu.get());
  CHECK(cdsp_symbol_pole_count(b.get()) == 2);
  CHECK(cdsp_symbol_numerator_count(b.get()) == 2);
  double gamma = 0.0;
  REQUIRE(cdsp_symbol_gamma_fr(b.get(), &gamma) == CDSP_OK);
  CHECK(std::abs(gamma - (3.0 - 2.0 * std::numbers::sqrt2)) <= 1e-12);
  cdsp_complex alphas[2];
  REQUIRE(cdsp_symbol_alphas(b.get(), alphas, 2) == CDSP_OK);
  CHECK(std::abs(alphas[0].re - (1.0 + std::numbers::sqrt2)) <= 1e-12);
  CHECK(std::abs(alphas[1].re + (1.0 + std::numbers::sqrt2)) <= 1e-12);

  // eta(z, z) < 1 inside and symmetric: eta(w, z) = conj eta(z, w)
  const std::complex<double> z{0.3, 0.2}, w{-0.5, 0.4};
  CHECK(std::abs(eta(b.get(), z, w) - std::conj(eta(b.get(), w, z))) <= 1e-15);
  CHECK(eta(b.get(), z, z).real() < 1.0);

  cdsp_report* raw = nullptr;
  REQUIRE(cdsp_certify(b.get(), nullptr, &raw) == CDSP_OK);
  const ReportPtr rep(raw);
  CHECK(cdsp_report_verdict(rep.get()) == CDSP_CERTIFIED_SUBNORMAL);
  CHECK(cdsp_report_exit_code(rep.get()) == 0);
  CHECK(cdsp_report_is_exact(rep.get()) == 1);
  CHECK(cdsp_report_refuted_level(rep.get()) == -1);
  CHECK(cdsp_report_orthogonality_residual(rep.get()) <= 1e-9);
  REQUIRE(cdsp_report_level_count(rep.get()) == 12);
  for (size_t i = 0; i < 12; ++i) {
    int level = 0;
    double minEig = 0.0, norm = 0.0;
    REQUIRE(cdsp_report_level(rep.get(), i, &level, &minEig, &norm) == CDSP_OK);
    CHECK(level == static_cast<int>(i) + 1);
    CHECK(minEig >= -1e-10 * norm);
  }
  CHECK(cdsp_report_level(rep.get(), 12, nullptr, nullptr, nullptr) == CDSP_INVALID_ARGUMENT);
}

TEST_CASE("symbol construction and refutation") {
  const cdsp_complex alphas[] = {{2.0, 0.0}, {0.0, -3.0}};
  const cdsp_complex coeffs[] = {{0.0, 0.0}, {1.0, 0.0}};
  cdsp_symbol* raw = nullptr;
  REQUIRE(cdsp_symbol_create(alphas, 2, coeffs, 1, 2, &raw) == CDSP_OK);
  const SymbolPtr b(raw);
  double gamma = 0.0;
  CHECK(cdsp_symbol_gamma_fr(b.get(), &gamma) == CDSP_INVALID_ARGUMENT);

  cdsp_report* rr = nullptr;
  REQUIRE(cdsp_certify(b.get(), nullptr, &rr) == CDSP_OK);
  const ReportPtr rep(rr);
  CHECK(cdsp_report_verdict(rep.get()) == CDSP_REFUTED_AT_LEVEL);
  CHECK(cdsp_report_refuted_level(rep.get()) == 0);
  CHECK(cdsp_report_exit_code(rep.get()) == 1);

  // a pole inside the disc and a non-Schur numerator are rejected
  const cdsp_complex inside[] = {{0.5, 0.0}};
  CHECK(cdsp_symbol_create(inside, 1, coeffs, 1, 2, &raw) != CDSP_OK);
  const cdsp_complex big[] = {{0.0, 0.0}, {3.0, 0.0}};
  CHECK(cdsp_symbol_create(alphas, 1, big, 1, 2, &raw) == CDSP_NOT_SCHUR);
  const cdsp_complex repeated[] = {{2.0, 0.0}, {2.0, 0.0}};
  CHECK(cdsp_symbol_create(repeated, 2, coeffs, 1, 2, &raw) == CDSP_POLES_NOT_DISTINCT);
}

TEST_CASE("invalid configuration") {
  const auto b = symbolOf(makeMeasure({0.0}, {1.0}).get());
  cdsp_config c = cdsp_config_default();
  c.levels = 0;
  cdsp_report* raw = nullptr;
  CHECK(cdsp_certify(b.get(), &c, &raw) == CDSP_INVALID_ARGUMENT);
  CHECK(raw == nullptr);
}

TEST_CASE("rotation covariance through handles") {
  const auto mu = makeMeasure({0.4, 2.0, -2.2}, {1.0, 0.5, 2.0});
  const std::complex<double> zeta = std::polar(1.0, std::numbers::pi / 7.0);
  cdsp_measure* raw = nullptr;
  REQUIRE(cdsp_measure_rotate(mu.get(), {zeta.real(), zeta.imag()}, &raw) == CDSP_OK);
  const MeasurePtr rotated(raw);
  const auto b = symbolOf(mu.get());
  const auto br = symbolOf(rotated.get());
  const std::vector<std::complex<double>> grid{{0.1, 0.2}, {-0.6, 0.3}, {0.0, -0.8}, {0.5, 0.5}};
  for (const auto z : grid)
    for (const auto w : grid) CHECK(std::abs(eta(br.get(), z, w) - eta(b.get(), zeta * z, zeta * w)) <= 1e-9);
}

TEST_CASE("JSON runs") {
  cdsp_run* raw = nullptr;
  REQUIRE(cdsp_run_json(R"({"single_atom": {"tau": 1, "theta_radians": 0}})", nullptr, "T0", &raw) == CDSP_OK);
  const RunPtr run(raw);
  CHECK(cdsp_run_exit_code(run.get()) == 0);
  const auto doc = nlohmann::json::parse(cdsp_run_report_json(run.get()));
  CHECK(doc["timestamp"] == "T0");
  CHECK(doc["verdict"] == "CertifiedSubnormal");

  CHECK(cdsp_run_json(R"({"antipodal": {"c1": 1}})", nullptr, nullptr, &raw) == CDSP_INPUT_SCHEMA);
  CHECK(raw == nullptr);
  CHECK(std::string(cdsp_last_error()).find("antipodal.c2") != std::string::npos);

  // a successful call clears the message
  REQUIRE(cdsp_run_json(R"({"measure": {"atoms": []}})", nullptr, "T0", &raw) == CDSP_OK);
  CHECK(std::string(cdsp_last_error()).empty());
  cdsp_run_destroy(raw);
}

TEST_CASE("error messages are per thread") {
  cdsp_run* raw = nullptr;
  CHECK(cdsp_run_json("{", nullptr, nullptr, &raw) == CDSP_INPUT_SCHEMA);
  std::string other;
  std::thread t([&] { other = cdsp_last_error(); });
  t.join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(cdsp_last_error()).empty());
}

TEST_CASE("concurrent runs agree") {
  const char* input = R"({"antipodal": {"c1": 4, "c2": 1}})";
  std::vector<std::string> texts(4);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < texts.size(); ++i)
    threads.emplace_back([&, i] {
      cdsp_run* raw = nullptr;
      if (cdsp_run_json(input, nullptr, "T", &raw) == CDSP_OK) texts[i] = cdsp_run_report_json(raw);
      cdsp_run_destroy(raw);
    });
  for (auto& t : threads) t.join();
  for (const auto& s : texts) {
    CHECK_FALSE(s.empty());
    CHECK(s == texts.front());
  }
}
