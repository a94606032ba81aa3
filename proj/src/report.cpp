#include "cdsp/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <initializer_list>
#include <numbers>

#include "cdsp/error.hpp"
#include "cdsp/kernels.hpp"

namespace cdsp::report {

using polyrat::Complex;
using polyrat::ComplexPolynomial;

namespace {

[[noreturn]] void schemaError(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::InputSchema, path + ": " + what);
}

void allowOnly(const Json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  if (!obj.is_object()) schemaError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) schemaError(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) schemaError(path + "." + key, "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schemaError(path, "must be finite");
  return v;
}

double positive(const Json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) schemaError(path, "must be positive");
  return v;
}

Complex complexValue(const Json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) schemaError(path, "expected a complex number [re, im]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

const Json& arrayField(const Json& obj, const char* key, const std::string& path) {
  const Json& a = field(obj, key, path);
  if (!a.is_array()) schemaError(path + "." + key, "expected an array");
  return a;
}

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

template <class F>
auto withContext(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InputSchema) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

symbolpipe::UnitCircleMeasure parseMeasure(const Json& m) {
  allowOnly(m, {"atoms"}, "measure");
  const Json& atoms = arrayField(m, "atoms", "measure");
  std::vector<symbolpipe::Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string path = indexed("measure.atoms", i);
    allowOnly(atoms[i], {"theta_radians", "weight"}, path);
    const double theta = number(field(atoms[i], "theta_radians", path), path + ".theta_radians");
    const double weight = number(field(atoms[i], "weight", path), path + ".weight");
    if (weight < 0.0) schemaError(path + ".weight", "must be nonnegative");
    out.push_back({theta, weight});
  }
  return withContext("measure.atoms", [&] { return symbolpipe::UnitCircleMeasure(std::move(out)); });
}

symbolpipe::RationalSymbol parseSymbol(const Json& s) {
  allowOnly(s, {"alphas", "numerators", "gamma_fr"}, "symbol");
  const Json& alphasJson = arrayField(s, "alphas", "symbol");
  std::vector<Complex> alphas;
  for (std::size_t i = 0; i < alphasJson.size(); ++i) {
    const std::string path = indexed("symbol.alphas", i);
    const Complex a = complexValue(alphasJson[i], path);
    if (!(std::abs(a) > 1.0)) schemaError(path, "pole must satisfy |alpha| > 1");
    alphas.push_back(a);
  }
  const Json& numsJson = arrayField(s, "numerators", "symbol");
  std::vector<ComplexPolynomial> numerators;
  for (std::size_t j = 0; j < numsJson.size(); ++j) {
    const std::string path = indexed("symbol.numerators", j);
    if (!numsJson[j].is_array()) schemaError(path, "expected an array of coefficients");
    std::vector<Complex> coeffs;
    for (std::size_t m = 0; m < numsJson[j].size(); ++m) coeffs.push_back(complexValue(numsJson[j][m], indexed(path, m)));
    numerators.emplace_back(std::move(coeffs));
    if (!numerators.back().isZero() && numerators.back().degree() > static_cast<int>(alphas.size()))
      schemaError(path, "degree exceeds the number of poles");
  }
  std::optional<double> gammaFR;
  if (const auto it = s.find("gamma_fr"); it != s.end() && !it->is_null())
    gammaFR = positive(*it, "symbol.gamma_fr");
  return withContext("symbol", [&] {
    return symbolpipe::RationalSymbol::fromPoles(std::move(alphas), std::move(numerators), gammaFR);
  });
}

std::string utcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json complexArray(std::span<const Complex> values) {
  Json out = Json::array();
  for (const Complex z : values) out.push_back(complexJson(z));
  return out;
}

Json matrixJson(const linalg::Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complexJson(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json levelsJson(const std::vector<certify::LevelEigen>& levels) {
  Json out = Json::array();
  for (const auto& e : levels) out.push_back({{"level", e.level}, {"min_eig", e.minEig}, {"norm", e.norm}});
  return out;
}

Json symbolInputJson(const symbolpipe::RationalSymbol& b) {
  Json numerators = Json::array();
  for (const auto& p : b.numerators()) {
    std::vector<Complex> coeffs(static_cast<std::size_t>(b.poleCount() + 1));
    for (int m = 0; m <= b.poleCount(); ++m) coeffs[static_cast<std::size_t>(m)] = p.coeff(m);
    numerators.push_back(complexArray(coeffs));
  }
  Json out = {{"alphas", complexArray(b.alphas())}, {"numerators", std::move(numerators)}};
  if (b.gammaFR()) out["gamma_fr"] = *b.gammaFR();
  return out;
}

double etaGridDiscrepancy(const symbolpipe::RationalSymbol& b, auto&& reference) {
  const std::vector<Complex> grid = symbolpipe::discGrid(10);
  double worst = 0.0;
  for (const Complex z : grid)
    for (const Complex w : grid) worst = std::max(worst, std::abs(b.eta(z, w) - reference(z, w)));
  return worst;
}

Json certificateJson(const certify::CertificateReport& rep) {
  Json necessaryAtoms = Json::array();
  for (const auto& a : rep.necessary.measure.atoms)
    necessaryAtoms.push_back({{"location", complexJson(a.location)}, {"weight", complexJson(a.weight)}});
  Json necessary = {{"pass", rep.necessary.pass},
                    {"worst_violation", rep.necessary.worstViolation},
                    {"scale", rep.necessary.measure.scale},
                    {"atoms", std::move(necessaryAtoms)}};
  if (rep.necessary.worstAtom)
    necessary["worst_location"] = complexJson(rep.necessary.worstAtom->location);

  Json out = {{"verdict", certify::verdictName(rep.verdict)},
              {"reason", rep.reason},
              {"exact", rep.exact},
              {"truncation_level_certificate", !rep.exact},
              {"refuted_level", rep.refutedLevel >= 0 ? Json(rep.refutedLevel) : Json(nullptr)},
              {"refuted_min_eig", rep.reason == "agler-level" ? Json(rep.refutedMinEig) : Json(nullptr)},
              {"orthogonality", {{"residual", rep.orthogonality.residual}, {"pass", rep.orthogonality.pass}}},
              {"necessary_measure", std::move(necessary)},
              {"completely_monotone",
               {{"pass", rep.monotone.pass},
                {"worst", rep.monotone.worst},
                {"worst_level", rep.monotone.worstLevel},
                {"worst_index", rep.monotone.worstIndex}}},
              {"equivalence_applies", rep.equivalenceApplies},
              {"agler_pole", levelsJson(rep.poleEigen)},
              {"agler_taylor", levelsJson(rep.taylorEigen)},
              {"engine_discrepancy", rep.engineDiscrepancy},
              {"taylor_cross_check", rep.taylorCrossCheck}};
  return out;
}

Json rank1Json(const symbolpipe::RationalSymbol& b, const RunOptions& options) {
  try {
    const kernels::Rank1Model model = kernels::rank1FromSymbol(b);
    const certify::RepresentingMeasureCheck rm =
        certify::rank1RepresentingMeasure(model, options.cert.trunc, options.quadPoints);
    const Complex half[] = {Complex{0.5}};
    const linalg::Matrix dual = kernels::cauchyDualKernelRank1(model, half, half);
    return {{"gamma_b", complexJson(model.gammaB)},
            {"beta", complexJson(model.beta)},
            {"rho", model.rho},
            {"sigma", complexJson(model.sigma)},
            {"nu", model.nu},
            {"mate_residual", model.mateResidual()},
            {"phi_coeffs", complexArray(std::span(model.phiCoeffs).first(9))},
            {"cauchy_dual_at_half", complexJson(dual(0, 0))},
            {"representing_measure",
             {{"total_mass", rm.totalMass},
              {"atom_mass", rm.atomMass},
              {"atom_location", complexJson(rm.atomLocation)},
              {"min_density", rm.minDensity},
              {"moment_order", options.cert.trunc},
              {"max_residual", rm.maxResidual}}}};
  } catch (const Error& e) {
    return {{"error", e.what()}};
  }
}

}  // namespace

const char* inputKindName(InputKind kind) noexcept {
  switch (kind) {
    case InputKind::Measure: return "measure";
    case InputKind::Symbol: return "symbol";
    case InputKind::Antipodal: return "antipodal";
    case InputKind::SingleAtom: return "single_atom";
  }
  return "unknown";
}

InputSpec parseInput(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InputSchema, std::string("input: malformed JSON (") + e.what() + ")");
  }
  if (!root.is_object()) schemaError("input", "expected a JSON object");
  allowOnly(root, {"measure", "symbol", "antipodal", "single_atom"}, "");
  if (root.size() != 1)
    schemaError("input", root.empty() ? "one of measure, symbol, antipodal, single_atom is required"
                                      : "exactly one of measure, symbol, antipodal, single_atom is allowed");

  InputSpec spec;
  spec.echo = root;
  if (const auto it = root.find("measure"); it != root.end()) {
    spec.kind = InputKind::Measure;
    spec.measure = parseMeasure(*it);
  } else if (const auto it2 = root.find("symbol"); it2 != root.end()) {
    spec.kind = InputKind::Symbol;
    spec.symbol = parseSymbol(*it2);
  } else if (const auto it3 = root.find("antipodal"); it3 != root.end()) {
    spec.kind = InputKind::Antipodal;
    allowOnly(*it3, {"c1", "c2"}, "antipodal");
    spec.c1 = positive(field(*it3, "c1", "antipodal"), "antipodal.c1");
    spec.c2 = positive(field(*it3, "c2", "antipodal"), "antipodal.c2");
    spec.measure = symbolpipe::UnitCircleMeasure({{0.0, spec.c1}, {std::numbers::pi, spec.c2}});
  } else {
    const Json& s = root.at("single_atom");
    spec.kind = InputKind::SingleAtom;
    allowOnly(s, {"tau", "theta_radians"}, "single_atom");
    spec.tau = positive(field(s, "tau", "single_atom"), "single_atom.tau");
    spec.theta = number(field(s, "theta_radians", "single_atom"), "single_atom.theta_radians");
    spec.measure = symbolpipe::UnitCircleMeasure({{spec.theta, spec.tau}});
  }
  return spec;
}

int exitCodeFor(certify::Verdict v) noexcept {
  switch (v) {
    case certify::Verdict::CertifiedSubnormal: return 0;
    case certify::Verdict::RefutedAtLevel: return 1;
    case certify::Verdict::InconclusiveAtTruncation: return 2;
  }
  return 2;
}

RunResult runInput(const InputSpec& spec, const RunOptions& options) {
  options.cert.validate();
  if (options.quadPoints < 1) throw Error(ErrorCode::InvalidArgument, "quad-points must be positive");

  Json doc;
  doc["tool"] = {{"name", "cdsp"}, {"version", kToolVersion}};
  doc["timestamp"] = options.timestamp.empty() ? utcNow() : options.timestamp;
  doc["config"] = {{"levels", options.cert.levels},
                   {"trunc", options.cert.trunc},
                   {"tol_psd", options.cert.tolPSD},
                   {"tol_orth", options.cert.tolOrth},
                   {"quad_points", options.quadPoints},
                   {"dump_tables", options.dumpTables}};
  doc["input"] = {{"kind", inputKindName(spec.kind)}, {"spec", spec.echo}};

  symbolpipe::RationalSymbol symbol;
  if (spec.kind == InputKind::Symbol) {
    symbol = spec.symbol;
  } else if (spec.measure.empty()) {
    doc["pipeline"] = {{"atoms", 0}, {"note", "empty measure: zero symbol"}};
  } else {
    const symbolpipe::SymbolConstruction sc = symbolpipe::measureToSymbolDetailed(spec.measure);
    const linalg::HermitianSpectrum gs = linalg::hermitianSpectrum(sc.gram.gram);
    doc["pipeline"] = {{"atoms", spec.measure.size()},
                       {"boundary_coeffs", complexArray(sc.boundary.nonnegativeCoeffs())},
                       {"gamma_fr", sc.outer.gammaFR},
                       {"theta0", sc.outer.theta0},
                       {"outer_at_zero", complexJson(sc.outer(0.0))},
                       {"gram_min_eig", gs.minEigenvalue},
                       {"gram_max_eig", gs.maxEigenvalue},
                       {"dropped_residual", sc.droppedResidual}};
    symbol = sc.symbol;
  }

  doc["symbol"] = {{"pole_count", symbol.poleCount()},
                   {"numerator_count", symbol.numeratorCount()},
                   {"gamma_fr", symbol.gammaFR() ? Json(*symbol.gammaFR()) : Json(nullptr)},
                   {"alphas", complexArray(symbol.alphas())},
                   {"eta_matrix", matrixJson(symbol.etaMatrix())},
                   {"boundary_sup_norm_squared", symbol.boundarySupNormSquared()}};
  doc["symbol_input"] = {{"symbol", symbolInputJson(symbol)}};

  const kernels::TaylorTable taylor = kernels::symbolTaylor(symbol, options.cert.trunc);
  Json rowNorms = Json::array();
  for (Eigen::Index m = 0; m < taylor.rows.rows(); ++m) rowNorms.push_back(taylor.rows.row(m).norm());
  doc["taylor"] = {{"rows", taylor.N}, {"cross_check_residual", taylor.crossCheckResidual}, {"row_norms", rowNorms}};

  if (spec.kind == InputKind::Antipodal) {
    const symbolpipe::AntipodalClosedForm cf = symbolpipe::closedFormAntipodal(spec.c1, spec.c2);
    const double alphaDiff = symbol.poleCount() == 2
                                 ? std::max(std::abs(symbol.alphas()[0] - cf.alpha1), std::abs(symbol.alphas()[1] - cf.alpha2))
                                 : std::numeric_limits<double>::quiet_NaN();
    doc["closed_form"] = {
        {"kind", "antipodal"},
        {"c_plus", cf.cPlus},
        {"c_minus", cf.cMinus},
        {"gamma_fr", cf.gammaFR},
        {"alpha1", cf.alpha1},
        {"alpha2", cf.alpha2},
        {"gamma1", complexJson(cf.gamma1)},
        {"gamma2", complexJson(cf.gamma2)},
        {"gamma3", complexJson(cf.gamma3)},
        {"radicands_nonnegative", cf.radicandsNonnegative},
        {"product_identity_residual", std::abs(cf.gammaFR + 1.0 / (cf.alpha1 * cf.alpha2))},
        {"gamma_fr_diff", std::abs(cf.gammaFR - symbol.gammaFR().value_or(0.0))},
        {"alpha_diff", alphaDiff},
        {"eta_grid_diff", etaGridDiscrepancy(symbol, [&cf](Complex z, Complex w) { return cf.eta(z, w); })}};
  } else if (spec.kind == InputKind::SingleAtom) {
    const symbolpipe::SingleAtomClosedForm cf = symbolpipe::closedFormSingleAtom(spec.tau, spec.theta);
    doc["closed_form"] = {
        {"kind", "single_atom"},
        {"eta", cf.etaValue},
        {"gamma_b", complexJson(cf.gammaB)},
        {"beta", complexJson(cf.beta)},
        {"pole", complexJson(cf.pole())},
        {"pole_diff", std::abs(symbol.alphas().front() - cf.pole())},
        {"eta_grid_diff", etaGridDiscrepancy(symbol, [&cf](Complex z, Complex w) { return cf.eta(z, w); })}};
  }

  if (symbol.poleCount() == 1) doc["rank1"] = rank1Json(symbol, options);

  const certify::CertificateReport rep = certify::runCertificates(symbol, options.cert);
  doc["certificate"] = certificateJson(rep);

  RunResult result;
  result.verdict = rep.verdict;
  result.exitCode = exitCodeFor(rep.verdict);
  doc["verdict"] = certify::verdictName(rep.verdict);
  doc["exit_code"] = result.exitCode;

  if (options.dumpTables) {
    const kernels::KernelTable kt = kernels::kernelCoeffs(taylor);
    doc["tables"] = {{"K", matrixJson(kt.K)}, {"B_rows", matrixJson(taylor.rows)}};
  }

  result.document = std::move(doc);
  result.text = formatJson(result.document);
  return result;
}

}  // namespace cdsp::report
