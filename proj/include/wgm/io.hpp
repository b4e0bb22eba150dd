#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "wgm/detection.hpp"
#include "wgm/model.hpp"

namespace wgm {

inline constexpr const char* kToolName = "wgmsim";
inline constexpr const char* kToolVersion = "0.1.0";

/// Device file loader. Per-mode keys: wavelength_nm, q0/qe (or gamma0_hz,
/// gamma_e_hz), splitting_hz (the full doublet splitting 2*beta),
/// phi_beta_rad. A top-level rate_unit of "hz" (default) or "rad_per_s"
/// declares the convention of all rate-valued entries; hz values are
/// multiplied by 2*pi on load.
DeviceParams load_device_json(const std::string& path,
                              const std::string& rate_unit_override = "");
DeviceParams parse_device_json(const std::string& text,
                               const std::string& rate_unit_override = "");

/// Detector file loader: jitter_sigma_s, efficiency, bin_width_s,
/// acquisition_time_s, background_rate_per_bin_per_s.
DetectorModel load_detector_json(const std::string& path);

/// The device used throughout: measured resonance wavelengths, intrinsic Qs
/// and signal/idler splittings, pump splitting assumed as the mean of the
/// other two, external coupling set to the strongly loaded configuration
/// (qe = q0/5), g from silicon-like material parameters.
DeviceParams paper_device();

/// FNV-1a 64-bit over a file's bytes, for output provenance headers.
std::uint64_t fnv1a64_file(const std::string& path);
std::uint64_t fnv1a64(const std::string& bytes);

/// CSV writer with '#' metadata comments and %.17g numeric formatting so
/// identical inputs give byte-identical artifacts.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void comment(const std::string& key, const std::string& value);
  void comment(const std::string& key, double value);
  void comment(const std::string& key, std::uint64_t value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
};

/// Numeric CSV reader: skips '#' comments and a single non-numeric header
/// row, returns row-major values. Throws on ragged rows.
std::vector<std::vector<double>> read_csv(const std::string& path);

std::string format_double(double value);

}  // namespace wgm
