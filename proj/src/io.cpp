#include "wgm/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "wgm/errors.hpp"

namespace wgm {

using nlohmann::json;

namespace {

double require_number(const json& node, const std::string& key, const char* where) {
  if (!node.contains(key)) {
    std::ostringstream msg;
    msg << where << ": missing key '" << key << "'";
    throw ParameterError(msg.str());
  }
  if (!node[key].is_number()) {
    std::ostringstream msg;
    msg << where << ": key '" << key << "' must be a number";
    throw ParameterError(msg.str());
  }
  return node[key].get<double>();
}

ModeParams parse_mode(const json& node, const char* label, double rate_to_angular) {
  if (!node.is_object())
    throw ParameterError(std::string("device: '") + label + "' must be an object");
  ModeParams mode;
  mode.omega0 = wavelength_to_omega(require_number(node, "wavelength_nm", label) * 1e-9);

  if (node.contains("gamma0_hz")) {
    mode.gamma0 = require_number(node, "gamma0_hz", label) * rate_to_angular;
    mode.gamma_e = require_number(node, "gamma_e_hz", label) * rate_to_angular;
  } else {
    mode.gamma0 = rate_from_quality(mode.omega0, require_number(node, "q0", label));
    mode.gamma_e = rate_from_quality(mode.omega0, require_number(node, "qe", label));
  }
  // splitting is 2*beta
  mode.beta = 0.5 * require_number(node, "splitting_hz", label) * rate_to_angular;
  mode.phi_beta = node.value("phi_beta_rad", 0.0);
  validate(mode, label);
  return mode;
}

}  // namespace

DeviceParams parse_device_json(const std::string& text,
                               const std::string& rate_unit_override) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("device: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParameterError("device: top level must be an object");

  std::string rate_unit = rate_unit_override.empty()
                              ? root.value("rate_unit", std::string("hz"))
                              : rate_unit_override;
  double rate_to_angular;
  if (rate_unit == "hz") {
    rate_to_angular = constants::two_pi;
  } else if (rate_unit == "rad_per_s") {
    rate_to_angular = 1.0;
  } else {
    throw ParameterError("device: rate_unit must be 'hz' or 'rad_per_s', got '" +
                         rate_unit + "'");
  }

  DeviceParams device;
  if (!root.contains("pump")) throw ParameterError("device: missing key 'pump'");
  if (!root.contains("signal")) throw ParameterError("device: missing key 'signal'");
  if (!root.contains("idler")) throw ParameterError("device: missing key 'idler'");
  device.pump = parse_mode(root["pump"], "pump", rate_to_angular);
  device.signal = parse_mode(root["signal"], "signal", rate_to_angular);
  device.idler = parse_mode(root["idler"], "idler", rate_to_angular);
  device.g = require_number(root, "g_hz", "device") * rate_to_angular;
  if (!(device.g >= 0.0)) throw ParameterError("device: g_hz must be non-negative");
  return device;
}

DeviceParams load_device_json(const std::string& path,
                              const std::string& rate_unit_override) {
  std::ifstream in(path);
  if (!in) throw ParameterError("device: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_device_json(buffer.str(), rate_unit_override);
}

DetectorModel load_detector_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("detector: cannot open '" + path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("detector: invalid JSON: ") + e.what());
  }
  DetectorModel det;
  det.jitter_sigma = root.value("jitter_sigma_s", 0.0);
  det.efficiency = root.value("efficiency", 1.0);
  det.bin_width = require_number(root, "bin_width_s", "detector");
  det.acquisition_time = require_number(root, "acquisition_time_s", "detector");
  det.background_rate = root.value("background_rate_per_bin_per_s", 0.0);
  validate(det);
  return det;
}

DeviceParams paper_device() {
  const char* text = R"json({
  "rate_unit": "hz",
  "g_hz": 306.8,
  "pump":   {"wavelength_nm": 1550.6, "q0": 1.27e6, "qe": 3.175e5,
             "splitting_hz": 1.04e9, "phi_beta_rad": 0.74, "splitting_assumed": true},
  "signal": {"wavelength_nm": 1532.5, "q0": 1.32e6, "qe": 3.30e5,
             "splitting_hz": 1.11e9, "phi_beta_rad": 0.0},
  "idler":  {"wavelength_nm": 1569.2, "q0": 1.15e6, "qe": 2.875e5,
             "splitting_hz": 0.97e9, "phi_beta_rad": 0.0}
})json";
  return parse_device_json(text);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open '" + path + "' for hashing");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return fnv1a64(buffer.str());
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw ParameterError("cannot open '" + path + "' for writing");
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
  out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::comment(const std::string& key, double value) {
  out_ << "# " << key << "=" << format_double(value) << "\n";
}

void CsvWriter::comment(const std::string& key, std::uint64_t value) {
  out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i)
    out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used == 0) numeric = false;
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header row
      throw ParameterError("csv: non-numeric data row in '" + path + "'");
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw ParameterError("csv: ragged rows in '" + path + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParameterError("csv: no data rows in '" + path + "'");
  return rows;
}

}  // namespace wgm
