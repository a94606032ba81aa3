// cdsp-cli: run the pipeline and certificate suite on a JSON input file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "cdsp/cdsp.h"

namespace {

constexpr int kInputError = 3;

bool writeAtomically(const std::filesystem::path& target, const std::string& text) {
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << text;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      return false;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  cdsp_config config = cdsp_config_default();
  std::string inputPath;
  std::string reportPath;
  bool dumpTables = false;

  CLI::App app{"Cauchy-dual subnormality certificates for Dirichlet-type spaces"};
  app.set_version_flag("--version", std::string(cdsp_version()));
  app.add_option("--input", inputPath, "JSON input: measure, symbol, antipodal or single_atom")->required();
  app.add_option("--levels", config.levels, "maximum Agler level L")->capture_default_str();
  app.add_option("--trunc", config.trunc, "matrix truncation N")->capture_default_str();
  app.add_option("--tol-psd", config.tol_psd, "relative PSD tolerance")->capture_default_str();
  app.add_option("--tol-orth", config.tol_orth, "relative orthogonality tolerance")->capture_default_str();
  app.add_option("--report", reportPath, "write the JSON report here (default: standard output)");
  app.add_flag("--dump-tables", dumpTables, "include the K and B_rows tables in the report");
  app.add_option("--quad-points", config.quad_points, "quadrature nodes for the rank-one measure")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }
  config.dump_tables = dumpTables ? 1 : 0;

  std::ifstream in(inputPath, std::ios::binary);
  if (!in) {
    std::cerr << "error: input: cannot open " << inputPath << '\n';
    return kInputError;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  cdsp_run* run = nullptr;
  const cdsp_status status = cdsp_run_json(buffer.str().c_str(), &config, nullptr, &run);
  if (status != CDSP_OK) {
    std::cerr << "error: " << cdsp_last_error() << '\n';
    return kInputError;
  }

  const std::string text = cdsp_run_report_json(run);
  const int exitCode = cdsp_run_exit_code(run);
  cdsp_run_destroy(run);

  if (reportPath.empty()) {
    std::cout << text;
  } else if (!writeAtomically(reportPath, text)) {
    std::cerr << "error: report: cannot write " << reportPath << '\n';
    return kInputError;
  }
  return exitCode;
}
