#pragma once

#include <complex>
#include <optional>
#include <string>

#include "wgm/constants.hpp"

namespace wgm {

using complexd = std::complex<double>;

/// One doublet resonance: a degenerate pair of counter-propagating
/// traveling-wave modes coupled at rate beta. All rates and frequencies are
/// angular (rad/s); quoted ordinary-frequency values (Hz) are converted by
/// the loaders.
struct ModeParams {
  double omega0 = 0.0;    // resonance frequency
  double gamma0 = 0.0;    // intrinsic photon decay rate
  double gamma_e = 0.0;   // external (waveguide) coupling rate
  double beta = 0.0;      // modal coupling magnitude, half the doublet splitting
  double phi_beta = 0.0;  // spatial phase of the coupling (rad)

  double gamma_t() const { return gamma0 + gamma_e; }
};

/// The three interacting resonances plus the vacuum SFWM rate g.
struct DeviceParams {
  ModeParams pump;
  ModeParams signal;
  ModeParams idler;
  double g = 0.0;  // rad/s

  // phi_beta of the pair-creation interference: 2*phi_bp - phi_bs - phi_bi.
  double phi_beta_combined() const {
    return 2.0 * pump.phi_beta - signal.phi_beta - idler.phi_beta;
  }
};

/// External drive: detuning of the laser from the pump resonance plus the
/// two input wave amplitudes in sqrt(photons/s).
struct PumpDrive {
  double detuning = 0.0;  // omega_L - omega_0p, rad/s
  complexd amp_f = 0.0;   // forward input pump amplitude
  complexd amp_b = 0.0;   // backward input pump amplitude
};

/// Material and modal quantities entering the vacuum SFWM rate.
struct MaterialParams {
  double n2 = 0.0;     // Kerr coefficient, m^2/W
  double eta = 0.0;    // modal overlap fraction, 0..1
  double n_s = 0.0;    // refractive index at the signal wavelength
  double n_i = 0.0;    // refractive index at the idler wavelength
  double v_bar = 0.0;  // effective mode volume, m^3
};

void validate(const ModeParams& mode, const char* label = "mode");
void validate(const PumpDrive& drive);
void validate(const MaterialParams& material);

/// Vacuum SFWM coupling rate g = c*eta*n2*hbar*w_p*sqrt(w_s*w_i)/(n_s*n_i*V).
double compute_g(const MaterialParams& material, double omega_p, double omega_s,
                 double omega_i);

/// Photon flux (photons/s) carried by an optical power at angular frequency omega.
double power_to_flux(double power_w, double omega);

/// Decay rate from a quality factor, same angular convention as omega0.
double rate_from_quality(double omega0, double q);

/// Angular frequency of a vacuum wavelength.
double wavelength_to_omega(double wavelength_m);

inline double hz_to_rad(double f_hz) { return constants::two_pi * f_hz; }
inline double rad_to_hz(double w) { return w / constants::two_pi; }

/// Energy conservation check: omega_s + omega_i vs 2*omega_p. Returns a
/// warning string when the mismatch exceeds the tolerance (default 20 GHz
/// ordinary frequency, generous enough for wavelengths quoted to 0.1 nm).
std::optional<std::string> check_frequency_matching(
    const DeviceParams& device, double tol_rad_per_s = hz_to_rad(20e9));

}  // namespace wgm
