#pragma once

#include <vector>

#include "wgm/model.hpp"

namespace wgm {

/// Steady-state intracavity pump fields for a given drive. f and b are the
/// stored optical energies (photon numbers) in the forward and backward
/// modes; phi is the phase controlling the pair-creation interference,
/// wrapped to (-pi, pi]. It equals the conventional 2*phi_p + phi_beta with
/// the backward field's spatial phase factor counted in phi_beta.
struct PumpSteadyState {
  complexd a_pf = 0.0;   // sqrt(photons)
  complexd a_pb = 0.0;
  double f = 0.0;        // |a_pf|^2
  double b = 0.0;        // |a_pb|^2
  double phi = 0.0;      // 2*(arg a_pf - arg a_pb) - phi_beta_s - phi_beta_i
  double detuning = 0.0; // drive detuning this state was computed at (rad/s)

  /// Synthetic state with prescribed energies and relative phase. Used for
  /// split-pump studies where f and b are set directly rather than derived
  /// from a drive.
  static PumpSteadyState from_energies(double f_energy, double b_energy, double phi,
                                       double detuning = 0.0);
};

/// Closed-form solution of the coupled steady-state pump equations. Works for
/// dual drives; with amp_b = 0 it reduces to the single forward-pump form.
PumpSteadyState steady_state(const DeviceParams& device, const PumpDrive& drive);

/// Power transmission past the forward pump port, |1 + i*sqrt(Ge)*a_pf/b_pf|^2.
double transmission(const DeviceParams& device, const PumpDrive& drive);
/// Same, for a unit forward-only drive (transmission is drive-amplitude invariant).
double transmission(const DeviceParams& device, double detuning);

/// One row of a pump detuning sweep.
struct PumpSweepPoint {
  double detuning = 0.0;
  double transmission = 0.0;
  double f = 0.0;
  double b = 0.0;
  double phi = 0.0;            // wrapped to (-pi, pi]
  double phi_unwrapped = 0.0;  // nearest-branch continuation along the sweep
};

/// Steady state, transmission and relative phase across a detuning grid,
/// forward-only unit drive.
std::vector<PumpSweepPoint> sweep_pump(const DeviceParams& device,
                                       const std::vector<double>& detuning_grid);

/// phi(detuning) across a grid; .first wrapped, .second unwrapped.
std::pair<std::vector<double>, std::vector<double>> phase_sweep(
    const DeviceParams& device, const std::vector<double>& detuning_grid);

/// Wrap an angle to (-pi, pi].
double wrap_angle(double angle);
/// Nearest-branch unwrap of a phase sequence (in place semantics on a copy).
std::vector<double> unwrap_phases(const std::vector<double>& wrapped);

}  // namespace wgm
