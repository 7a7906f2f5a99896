#include "finsler/metric_io.h"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace finsler {

namespace {

std::string Trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool ParseNumberList(const std::string& value, std::vector<double>* out,
                     std::string* error) {
  out->clear();
  std::string cleaned = value;
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(cleaned);
  std::string tok;
  while (is >> tok) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || errno == ERANGE) {
      if (error) *error = "malformed number '" + tok + "'";
      return false;
    }
    out->push_back(v);
  }
  if (out->empty()) {
    if (error) *error = "empty value";
    return false;
  }
  return true;
}

bool ParseVec3(const std::string& value, Vec3* out, std::string* error) {
  std::vector<double> vals;
  if (!ParseNumberList(value, &vals, error)) return false;
  if (vals.size() != 3) {
    if (error) *error = "expected 3 components, got " + std::to_string(vals.size());
    return false;
  }
  *out = Vec3(vals[0], vals[1], vals[2]);
  return true;
}

}  // namespace

bool ParseMetricSpecText(const std::string& text, MetricSpec* spec,
                         std::string* error) {
  MetricSpec out;
  bool have_family = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (error) {
        *error = "line " + std::to_string(lineno) + ": expected key = value";
      }
      return false;
    }
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    std::string err;
    if (key == "family") {
      if (!ParseFamilyName(value, &out.family)) {
        if (error) {
          *error = "line " + std::to_string(lineno) + ": unknown family '" +
                   value + "'";
        }
        return false;
      }
      have_family = true;
    } else if (key == "phi") {
      if (!ParsePhiName(value, &out.phi)) {
        if (error) {
          *error = "line " + std::to_string(lineno) + ": unknown phi family '" +
                   value + "'";
        }
        return false;
      }
    } else if (key == "phi_coeffs") {
      if (!ParseNumberList(value, &out.phi_coeffs, &err)) {
        if (error) *error = "line " + std::to_string(lineno) + ": " + err;
        return false;
      }
    } else if (key == "b") {
      if (!ParseVec3(value, &out.b, &err)) {
        if (error) *error = "line " + std::to_string(lineno) + ": " + err;
        return false;
      }
    } else if (key == "drift_amp") {
      if (!ParseVec3(value, &out.drift_amp, &err)) {
        if (error) *error = "line " + std::to_string(lineno) + ": " + err;
        return false;
      }
    } else if (key == "drift_freq") {
      if (!ParseVec3(value, &out.drift_freq, &err)) {
        if (error) *error = "line " + std::to_string(lineno) + ": " + err;
        return false;
      }
    } else if (key == "epsilon") {
      std::vector<double> vals;
      if (!ParseNumberList(value, &vals, &err) || vals.size() != 1) {
        if (error) {
          *error = "line " + std::to_string(lineno) + ": epsilon expects 1 real";
        }
        return false;
      }
      if (!(vals[0] > 0.0)) {
        if (error) {
          *error = "line " + std::to_string(lineno) + ": epsilon must be > 0";
        }
        return false;
      }
      out.epsilon = vals[0];
    } else if (key == "m") {
      std::vector<double> vals;
      if (!ParseNumberList(value, &vals, &err) || vals.size() != 1 ||
          vals[0] != static_cast<int>(vals[0]) || vals[0] < 1) {
        if (error) {
          *error =
              "line " + std::to_string(lineno) + ": m expects a positive integer";
        }
        return false;
      }
      out.m = static_cast<int>(vals[0]);
    } else {
      if (error) {
        *error = "line " + std::to_string(lineno) + ": unknown key '" + key + "'";
      }
      return false;
    }
  }
  if (!have_family) {
    if (error) *error = "missing required key 'family'";
    return false;
  }
  *spec = out;
  return true;
}

bool ParseMetricSpecFile(const std::string& path, MetricSpec* spec,
                         std::string* error) {
  std::ifstream in(path);
  if (!in) {
    if (error) *error = "cannot open metric spec file '" + path + "'";
    return false;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!ParseMetricSpecText(buf.str(), spec, error)) {
    if (error) *error = path + ": " + *error;
    return false;
  }
  return true;
}

}  // namespace finsler
