#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wgm/model.hpp"
#include "wgm/pump.hpp"

namespace wgm {

/// Which waveguide direction each photon of a pair exits: signal then idler.
enum class PathConfig { FF = 0, FB = 1, BF = 2, BB = 3 };

inline constexpr std::array<PathConfig, 4> kAllConfigs{PathConfig::FF, PathConfig::FB,
                                                       PathConfig::BF, PathConfig::BB};
const char* to_string(PathConfig config);

/// Rate-polynomial constants entering the closed-form pair correlations,
/// together with the rates they were built from. Gamma_t = Gamma_ts + Gamma_ti.
struct DeviceConstants {
  double n_scale = 0.0;  // overall scale N
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double gamma_t = 0.0;
  double gamma_ts = 0.0;
  double gamma_ti = 0.0;
  double beta_s = 0.0;
  double beta_i = 0.0;
};

DeviceConstants device_constants(const DeviceParams& device);

/// Oscillation coefficients of one path configuration on one delay branch:
/// p(tau) = N exp(-gamma|tau|) |zeta cos(beta tau) + eta sin(beta tau)|^2.
struct OscCoeffs {
  complexd zeta = 0.0;
  complexd eta = 0.0;
  double beta = 0.0;   // branch modal coupling rate (signal for tau>=0, idler otherwise)
  double gamma = 0.0;  // branch decay rate
};

OscCoeffs osc_coeffs(const DeviceConstants& constants, const PumpSteadyState& pump,
                     PathConfig config, bool tau_non_negative);

/// Closed-form pair correlation density at a signed delay (signal minus idler
/// emission time). Absolute units, 1/s^2 scale set by N.
double pair_correlation(const DeviceParams& device, const PumpSteadyState& pump,
                        PathConfig config, double tau);

/// Per-configuration correlations on a delay grid; envelope is the pointwise
/// four-configuration sum.
struct CorrelationTrace {
  std::vector<double> tau;
  std::array<std::vector<double>, 4> values;  // indexed by PathConfig
  std::vector<double> envelope;

  /// Rescale all traces so the envelope peak is 1 (plot-friendly units).
  CorrelationTrace normalized_to_envelope_peak() const;
};

CorrelationTrace correlation_trace(const DeviceParams& device,
                                   const PumpSteadyState& pump,
                                   const std::vector<double>& tau_grid);

/// Same, but requires exactly balanced pump energies (f = b); in that case
/// FF == BB and FB == BF identically.
CorrelationTrace equal_pump_traces(const DeviceParams& device,
                                   const PumpSteadyState& pump,
                                   const std::vector<double>& tau_grid);

/// Uniform symmetric delay grid spanning +-span/Gamma_t.
std::vector<double> symmetric_tau_grid(const DeviceParams& device, double span,
                                       size_t points);

/// Warn when the pump-induced nonlinear rate leaves the weak-interaction
/// regime the closed forms assume (g*energy above 1% of Gamma_tp).
std::optional<std::string> weak_limit_warning(const DeviceParams& device,
                                              const PumpSteadyState& pump);

}  // namespace wgm
