#include "wgm/pump.hpp"

#include <cmath>

#include "wgm/errors.hpp"

namespace wgm {

namespace {
const complexd kImag(0.0, 1.0);
}

double wrap_angle(double angle) {
  double w = std::remainder(angle, constants::two_pi);
  if (w <= -constants::pi) w += constants::two_pi;  // remainder returns [-pi, pi]
  return w;
}

std::vector<double> unwrap_phases(const std::vector<double>& wrapped) {
  std::vector<double> out(wrapped.size());
  if (wrapped.empty()) return out;
  out[0] = wrapped[0];
  for (size_t i = 1; i < wrapped.size(); ++i) {
    const double step = std::remainder(wrapped[i] - wrapped[i - 1], constants::two_pi);
    out[i] = out[i - 1] + step;
  }
  return out;
}

PumpSteadyState PumpSteadyState::from_energies(double f_energy, double b_energy,
                                               double phi, double detuning) {
  if (f_energy < 0.0 || b_energy < 0.0)
    throw ParameterError("pump energies must be non-negative");
  PumpSteadyState ss;
  // Carry the full phase on the forward amplitude: phi = 2*phi_p when the
  // spatial coupling phases vanish, so arg(a_pf) = phi/2 reproduces it.
  ss.a_pf = std::polar(std::sqrt(f_energy), phi / 2.0);
  ss.a_pb = std::sqrt(b_energy);
  ss.f = f_energy;
  ss.b = b_energy;
  ss.phi = wrap_angle(phi);
  ss.detuning = detuning;
  return ss;
}

PumpSteadyState steady_state(const DeviceParams& device, const PumpDrive& drive) {
  const ModeParams& p = device.pump;
  if (p.gamma0 < 0.0 || p.gamma_e < 0.0 || p.beta < 0.0)
    throw ParameterError("steady_state: pump rates must be non-negative");
  const double beta = p.beta;
  const complexd d(-p.gamma_t() / 2.0, drive.detuning);  // i*Delta - Gamma_tp/2
  const complexd det = d * d + beta * beta;
  if (std::abs(det) == 0.0)
    throw NumericalError("steady_state: singular drive, undamped resonance at Delta = +-beta");

  const complexd coupling_fb = kImag * beta * std::polar(1.0, p.phi_beta);
  const complexd coupling_bf = kImag * beta * std::polar(1.0, -p.phi_beta);
  const complexd pre = -kImag * std::sqrt(p.gamma_e) / det;

  PumpSteadyState ss;
  ss.a_pf = pre * (d * drive.amp_f - coupling_fb * drive.amp_b);
  ss.a_pb = pre * (-coupling_bf * drive.amp_f + d * drive.amp_b);
  ss.f = std::norm(ss.a_pf);
  ss.b = std::norm(ss.a_pb);
  ss.detuning = drive.detuning;
  // phi is only meaningful when both modes carry energy. The backward field
  // already carries the pump's spatial coupling phase, so phi reduces to
  // 2*(arg a_pf - arg a_pb) - phi_beta_s - phi_beta_i; attributing the
  // e^{-i phi_beta_p} factor of a_pb to phi_beta instead recovers the
  // conventional 2*phi_p + phi_beta split.
  if (ss.f > 0.0 && ss.b > 0.0) {
    const double phi_p = std::arg(ss.a_pf) - std::arg(ss.a_pb);
    ss.phi =
        wrap_angle(2.0 * phi_p - device.signal.phi_beta - device.idler.phi_beta);
  }
  return ss;
}

double transmission(const DeviceParams& device, const PumpDrive& drive) {
  if (std::abs(drive.amp_f) == 0.0)
    throw ParameterError("transmission: undefined without a forward input wave");
  const PumpSteadyState ss = steady_state(device, drive);
  const complexd t = 1.0 + kImag * std::sqrt(device.pump.gamma_e) * ss.a_pf / drive.amp_f;
  return std::norm(t);
}

double transmission(const DeviceParams& device, double detuning) {
  return transmission(device, PumpDrive{detuning, 1.0, 0.0});
}

std::vector<PumpSweepPoint> sweep_pump(const DeviceParams& device,
                                       const std::vector<double>& detuning_grid) {
  if (detuning_grid.empty()) throw ParameterError("sweep_pump: empty detuning grid");
  std::vector<PumpSweepPoint> out(detuning_grid.size());
  for (size_t i = 0; i < detuning_grid.size(); ++i) {
    const PumpDrive drive{detuning_grid[i], 1.0, 0.0};
    const PumpSteadyState ss = steady_state(device, drive);
    out[i].detuning = detuning_grid[i];
    out[i].transmission = transmission(device, drive);
    out[i].f = ss.f;
    out[i].b = ss.b;
    out[i].phi = ss.phi;
  }
  std::vector<double> wrapped(out.size());
  for (size_t i = 0; i < out.size(); ++i) wrapped[i] = out[i].phi;
  const std::vector<double> unwrapped = unwrap_phases(wrapped);
  for (size_t i = 0; i < out.size(); ++i) out[i].phi_unwrapped = unwrapped[i];
  return out;
}

std::pair<std::vector<double>, std::vector<double>> phase_sweep(
    const DeviceParams& device, const std::vector<double>& detuning_grid) {
  const std::vector<PumpSweepPoint> points = sweep_pump(device, detuning_grid);
  std::vector<double> wrapped(points.size()), unwrapped(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    wrapped[i] = points[i].phi;
    unwrapped[i] = points[i].phi_unwrapped;
  }
  return {wrapped, unwrapped};
}

}  // namespace wgm
