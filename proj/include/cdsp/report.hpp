#pragma once

// JSON input documents, one end-to-end run (pipeline + certificates) and
// the report document.

#include <string>
#include <string_view>

#include <json.hpp>

#include "cdsp/certify.hpp"
#include "cdsp/symbolpipe.hpp"

namespace cdsp::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

enum class InputKind { Measure, Symbol, Antipodal, SingleAtom };

const char* inputKindName(InputKind kind) noexcept;

struct InputSpec {
  InputKind kind = InputKind::Measure;
  symbolpipe::UnitCircleMeasure measure;  // Measure, Antipodal, SingleAtom
  symbolpipe::RationalSymbol symbol;      // Symbol
  double c1 = 0.0, c2 = 0.0;              // Antipodal
  double tau = 0.0, theta = 0.0;          // SingleAtom
  Json echo;
};

/// Exactly one of "measure", "symbol", "antipodal", "single_atom". Throws
/// InputSchema with the offending field path in the message; semantic
/// failures (for instance NotSchur) keep their own code.
InputSpec parseInput(std::string_view text);

struct RunOptions {
  certify::CertificateConfig cert;
  int quadPoints = 4096;
  bool dumpTables = false;
  /// UTC timestamp written to the report; empty means now.
  std::string timestamp;
};

struct RunResult {
  Json document;
  std::string text;  // formatted document
  certify::Verdict verdict = certify::Verdict::InconclusiveAtTruncation;
  int exitCode = 2;
};

int exitCodeFor(certify::Verdict v) noexcept;

RunResult runInput(const InputSpec& spec, const RunOptions& options);

/// Pretty printer with every float written as %.17g and non-finite values as null.
std::string formatJson(const Json& j);

/// Complex as [re, im].
Json complexJson(polyrat::Complex z);

}  // namespace cdsp::report
