#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wgm/correlations.hpp"
#include "wgm/model.hpp"
#include "wgm/pump.hpp"

namespace wgm {

/// Uniform symmetric frequency grid for the spectral engine. The kernel tails
/// fall off as 1/omega^2, so the default span is generous to keep the
/// truncation error of the inverse transform well below the closed-form
/// agreement tolerance.
struct SpectralGrid {
  std::vector<double> omega;

  /// span_factor * max(Gamma_t, beta) on each side, spacing
  /// min(rates)/points_per_rate.
  static SpectralGrid for_device(const DeviceParams& device,
                                 double span_factor = 600.0,
                                 double points_per_rate = 20.0);
  static SpectralGrid uniform(double omega_max, size_t points);

  double spacing() const;
  /// Throws when the grid violates the minimum coverage or resolution the
  /// inverse transform needs (span >= 20 max rate, spacing <= min rate / 20).
  void validate_for(const DeviceParams& device) const;
};

/// Frequency-domain coefficient matrix M of the intracavity field equations
/// at one offset omega from the signal/idler frame.
Eigen::Matrix4cd build_matrix(const DeviceParams& device, const PumpSteadyState& pump,
                              double omega);

/// T = -M^{-1}.
Eigen::Matrix4cd t_matrix(const DeviceParams& device, const PumpSteadyState& pump,
                          double omega);

/// Two-photon spectral kernel for one path configuration.
complexd kernel(const DeviceParams& device, const PumpSteadyState& pump,
                PathConfig config, double omega);
complexd kernel_from_t(const Eigen::Matrix4cd& t, PathConfig config, double gamma_ts);

/// Pair correlation by numerical inverse Fourier transform of the kernel:
/// p = Gamma_es * Gamma_ei * |(1/2pi) integral K(w) e^{-iw tau} dw|^2.
/// Uses trapezoid quadrature with a raised-cosine taper over the outer 5%
/// of the grid.
std::vector<double> correlation_numeric(const DeviceParams& device,
                                        const PumpSteadyState& pump, PathConfig config,
                                        const std::vector<double>& tau_grid,
                                        const SpectralGrid& grid);

/// All four configurations at once (shares the per-omega matrix work).
CorrelationTrace correlation_trace_numeric(const DeviceParams& device,
                                           const PumpSteadyState& pump,
                                           const std::vector<double>& tau_grid,
                                           const SpectralGrid& grid);

/// Relative L2 distance between two sampled traces, ||a-b|| / ||a||.
double relative_l2(const std::vector<double>& reference, const std::vector<double>& other);

/// Smallest |det M| over the grid; a zero signals an invalid linearization.
double min_abs_det(const DeviceParams& device, const PumpSteadyState& pump,
                   const SpectralGrid& grid);

}  // namespace wgm
