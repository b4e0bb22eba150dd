#include "wgm/model.hpp"

#include <cmath>
#include <sstream>

#include "wgm/errors.hpp"

namespace wgm {

void validate(const ModeParams& mode, const char* label) {
  std::ostringstream err;
  if (!(mode.omega0 > 0.0)) {
    err << label << ": omega0 must be positive, got " << mode.omega0;
    throw ParameterError(err.str());
  }
  if (mode.gamma0 < 0.0 || mode.gamma_e < 0.0) {
    err << label << ": decay rates must be non-negative";
    throw ParameterError(err.str());
  }
  if (mode.beta < 0.0) {
    err << label << ": beta is a magnitude, must be non-negative";
    throw ParameterError(err.str());
  }
  if (!(mode.gamma_t() > 0.0)) {
    err << label << ": total decay rate gamma0 + gamma_e must be positive";
    throw ParameterError(err.str());
  }
}

void validate(const PumpDrive& drive) {
  if (std::abs(drive.amp_f) == 0.0 && std::abs(drive.amp_b) == 0.0)
    throw ParameterError("drive: at least one input pump amplitude must be nonzero");
}

void validate(const MaterialParams& material) {
  if (!(material.n2 > 0.0)) throw ParameterError("material: n2 must be positive");
  if (!(material.eta > 0.0) || material.eta > 1.0)
    throw ParameterError("material: eta must lie in (0, 1]");
  if (!(material.n_s > 0.0) || !(material.n_i > 0.0))
    throw ParameterError("material: refractive indices must be positive");
  if (!(material.v_bar > 0.0))
    throw ParameterError("material: mode volume must be positive");
}

double compute_g(const MaterialParams& material, double omega_p, double omega_s,
                 double omega_i) {
  validate(material);
  if (!(omega_p > 0.0) || !(omega_s > 0.0) || !(omega_i > 0.0))
    throw ParameterError("compute_g: mode frequencies must be positive");
  return constants::speed_of_light * material.eta * material.n2 * constants::hbar *
         omega_p * std::sqrt(omega_s * omega_i) /
         (material.n_s * material.n_i * material.v_bar);
}

double power_to_flux(double power_w, double omega) {
  if (power_w < 0.0) throw ParameterError("power_to_flux: power must be non-negative");
  if (!(omega > 0.0)) throw ParameterError("power_to_flux: omega must be positive");
  return power_w / (constants::hbar * omega);
}

double rate_from_quality(double omega0, double q) {
  if (!(q > 0.0)) throw ParameterError("rate_from_quality: Q must be positive");
  return omega0 / q;
}

double wavelength_to_omega(double wavelength_m) {
  if (!(wavelength_m > 0.0))
    throw ParameterError("wavelength_to_omega: wavelength must be positive");
  return constants::two_pi * constants::speed_of_light / wavelength_m;
}

std::optional<std::string> check_frequency_matching(const DeviceParams& device,
                                                    double tol_rad_per_s) {
  const double mismatch =
      device.signal.omega0 + device.idler.omega0 - 2.0 * device.pump.omega0;
  if (std::abs(mismatch) <= tol_rad_per_s) return std::nullopt;
  std::ostringstream msg;
  msg << "frequency matching violated: omega_s + omega_i - 2*omega_p = "
      << rad_to_hz(mismatch) << " Hz exceeds tolerance " << rad_to_hz(tol_rad_per_s)
      << " Hz";
  return msg.str();
}

}  // namespace wgm
