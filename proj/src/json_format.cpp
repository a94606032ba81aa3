#include <cmath>
#include <cstdio>

#include "cdsp/report.hpp"

namespace cdsp::report {

namespace {

bool isLeaf(const Json& j) { return !j.is_array() && !j.is_object(); }

// Arrays of scalars, or of arrays of scalars, stay on one line.
bool inlineArray(const Json& j) {
  for (const auto& e : j) {
    if (e.is_object()) return false;
    if (e.is_array())
      for (const auto& inner : e)
        if (!isLeaf(inner)) return false;
  }
  return true;
}

void writeScalar(const Json& j, std::string& out) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    // keep the value a float on re-read
    const std::string_view s(buf);
    if (s.find_first_of(".eEn") == std::string_view::npos) out += ".0";
    return;
  }
  out += j.dump();
}

void writeCompact(const Json& j, std::string& out) {
  if (!j.is_array()) {
    writeScalar(j, out);
    return;
  }
  out += '[';
  bool first = true;
  for (const auto& e : j) {
    if (!first) out += ", ";
    first = false;
    writeCompact(e, out);
  }
  out += ']';
}

void write(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string closePad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      out += Json(key).dump();
      out += ": ";
      write(value, indent + 2, out);
    }
    out += '\n';
    out += closePad;
    out += '}';
  } else if (j.is_array()) {
    if (j.empty() || inlineArray(j)) {
      writeCompact(j, out);
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      write(e, indent + 2, out);
    }
    out += '\n';
    out += closePad;
    out += ']';
  } else {
    writeScalar(j, out);
  }
}

}  // namespace

std::string formatJson(const Json& j) {
  std::string out;
  write(j, 0, out);
  out += '\n';
  return out;
}

Json complexJson(polyrat::Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace cdsp::report
