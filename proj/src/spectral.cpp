#include "wgm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wgm/errors.hpp"

namespace wgm {

namespace {
const complexd kImag(0.0, 1.0);

double max_rate(const DeviceParams& device) {
  return std::max({device.signal.gamma_t() + device.idler.gamma_t(),
                   device.signal.beta, device.idler.beta});
}

double min_rate(const DeviceParams& device) {
  double m = device.signal.gamma_t() + device.idler.gamma_t();
  if (device.signal.beta > 0.0) m = std::min(m, device.signal.beta);
  if (device.idler.beta > 0.0) m = std::min(m, device.idler.beta);
  return m;
}
}  // namespace

SpectralGrid SpectralGrid::uniform(double omega_max, size_t points) {
  if (points < 3 || !(omega_max > 0.0))
    throw ParameterError("SpectralGrid: need omega_max > 0 and at least 3 points");
  SpectralGrid grid;
  grid.omega.resize(points);
  for (size_t i = 0; i < points; ++i)
    grid.omega[i] = -omega_max + 2.0 * omega_max * static_cast<double>(i) / (points - 1);
  return grid;
}

SpectralGrid SpectralGrid::for_device(const DeviceParams& device, double span_factor,
                                      double points_per_rate) {
  const double omega_max = span_factor * max_rate(device);
  const double spacing = min_rate(device) / points_per_rate;
  const size_t points = static_cast<size_t>(std::ceil(2.0 * omega_max / spacing)) + 1;
  return uniform(omega_max, points);
}

double SpectralGrid::spacing() const {
  if (omega.size() < 2) throw ParameterError("SpectralGrid: too few points");
  return (omega.back() - omega.front()) / (omega.size() - 1);
}

void SpectralGrid::validate_for(const DeviceParams& device) const {
  const double span = std::max(std::abs(omega.front()), std::abs(omega.back()));
  const double need_span = 20.0 * max_rate(device);
  const double need_spacing = min_rate(device) / 20.0;
  if (span < need_span || spacing() > need_spacing) {
    std::ostringstream msg;
    msg << "spectral grid insufficient: need span >= " << need_span
        << " rad/s (have " << span << ") and spacing <= " << need_spacing
        << " rad/s (have " << spacing() << ")";
    throw NumericalError(msg.str());
  }
}

Eigen::Matrix4cd build_matrix(const DeviceParams& device, const PumpSteadyState& pump,
                              double omega) {
  const double delta = pump.detuning;
  const complexd ds = kImag * (omega + delta) - device.signal.gamma_t() / 2.0;
  const complexd di = kImag * (omega + delta) - device.idler.gamma_t() / 2.0;
  const complexd bs = kImag * device.signal.beta * std::polar(1.0, device.signal.phi_beta);
  const complexd bi = kImag * device.idler.beta * std::polar(1.0, device.idler.phi_beta);
  const complexd pf2 = pump.a_pf * pump.a_pf;
  const complexd pb2 = pump.a_pb * pump.a_pb;
  const double g = device.g;

  // Rows: a_sf(w), a_sb(w), a_if^dag(-w), a_ib^dag(-w). The idler rows carry
  // the conjugated coupling pattern.
  Eigen::Matrix4cd m;
  m << ds, bs, -kImag * g * pf2, complexd(0.0),
       -std::conj(bs), ds, complexd(0.0), -kImag * g * pb2,
       kImag * g * std::conj(pf2), complexd(0.0), di, std::conj(bi),
       complexd(0.0), kImag * g * std::conj(pb2), -bi, di;
  return m;
}

Eigen::Matrix4cd t_matrix(const DeviceParams& device, const PumpSteadyState& pump,
                          double omega) {
  return (-build_matrix(device, pump, omega)).inverse().eval();
}

complexd kernel_from_t(const Eigen::Matrix4cd& t, PathConfig config, double gamma_ts) {
  switch (config) {
    case PathConfig::FF:
      return std::conj(t(2, 0)) * (gamma_ts * t(0, 0) - 1.0) +
             gamma_ts * t(0, 1) * std::conj(t(2, 1));
    case PathConfig::FB:
      return std::conj(t(3, 0)) * (gamma_ts * t(0, 0) - 1.0) +
             gamma_ts * t(0, 1) * std::conj(t(3, 1));
    case PathConfig::BF:
      return std::conj(t(2, 1)) * (gamma_ts * t(1, 1) - 1.0) +
             gamma_ts * t(1, 0) * std::conj(t(2, 0));
    case PathConfig::BB:
      return std::conj(t(3, 1)) * (gamma_ts * t(1, 1) - 1.0) +
             gamma_ts * t(1, 0) * std::conj(t(3, 0));
  }
  return 0.0;
}

complexd kernel(const DeviceParams& device, const PumpSteadyState& pump,
                PathConfig config, double omega) {
  return kernel_from_t(t_matrix(device, pump, omega), config, device.signal.gamma_t());
}

namespace {

// Raised-cosine taper over the outer `fraction` of the grid on each side.
double taper_weight(double position, double fraction) {
  // position in [0, 1] across the grid
  const double edge = std::min(position, 1.0 - position);
  if (edge >= fraction) return 1.0;
  return 0.5 * (1.0 - std::cos(constants::pi * edge / fraction));
}

// F(tau_k) = (dw/2pi) sum_j w_j K_j e^{-i w_j tau_k}, evaluated for all tau
// with a per-sample phase rotator instead of exp() in the inner loop.
std::vector<complexd> windowed_inverse_transform(const std::vector<double>& omega,
                                                 const std::vector<complexd>& k_values,
                                                 const std::vector<double>& tau_grid) {
  const size_t n_w = omega.size();
  const size_t n_t = tau_grid.size();
  const double dw = (omega.back() - omega.front()) / (n_w - 1);
  const double dtau = n_t > 1 ? tau_grid[1] - tau_grid[0] : 0.0;
  bool uniform_tau = true;
  for (size_t k = 1; k + 1 < n_t && uniform_tau; ++k)
    uniform_tau = std::abs((tau_grid[k + 1] - tau_grid[k]) - dtau) < 1e-9 * std::abs(dtau);

  std::vector<complexd> result(n_t, complexd(0.0, 0.0));
  const double scale = dw / constants::two_pi;

  if (uniform_tau && n_t > 1) {
    std::vector<complexd> carry(n_w), rot(n_w);
    for (size_t j = 0; j < n_w; ++j) {
      double w = taper_weight(static_cast<double>(j) / (n_w - 1), 0.05);
      if (j == 0 || j + 1 == n_w) w *= 0.5;  // trapezoid ends
      carry[j] = k_values[j] * w * std::exp(-kImag * omega[j] * tau_grid[0]);
      rot[j] = std::exp(-kImag * omega[j] * dtau);
    }
    for (size_t k = 0; k < n_t; ++k) {
      complexd acc(0.0, 0.0);
      for (size_t j = 0; j < n_w; ++j) acc += carry[j];
      result[k] = acc * scale;
      if (k + 1 < n_t)
        for (size_t j = 0; j < n_w; ++j) carry[j] *= rot[j];
    }
  } else {
    for (size_t k = 0; k < n_t; ++k) {
      complexd acc(0.0, 0.0);
      for (size_t j = 0; j < n_w; ++j) {
        double w = taper_weight(static_cast<double>(j) / (n_w - 1), 0.05);
        if (j == 0 || j + 1 == n_w) w *= 0.5;
        acc += k_values[j] * w * std::exp(-kImag * omega[j] * tau_grid[k]);
      }
      result[k] = acc * scale;
    }
  }
  return result;
}

}  // namespace

std::vector<double> correlation_numeric(const DeviceParams& device,
                                        const PumpSteadyState& pump, PathConfig config,
                                        const std::vector<double>& tau_grid,
                                        const SpectralGrid& grid) {
  if (tau_grid.empty()) throw ParameterError("correlation_numeric: empty tau grid");
  grid.validate_for(device);

  std::vector<complexd> k_values(grid.omega.size());
  for (size_t j = 0; j < grid.omega.size(); ++j)
    k_values[j] = kernel(device, pump, config, grid.omega[j]);

  const std::vector<complexd> transform =
      windowed_inverse_transform(grid.omega, k_values, tau_grid);
  const double scale = device.signal.gamma_e * device.idler.gamma_e;
  std::vector<double> out(tau_grid.size());
  for (size_t k = 0; k < tau_grid.size(); ++k) out[k] = scale * std::norm(transform[k]);
  return out;
}

CorrelationTrace correlation_trace_numeric(const DeviceParams& device,
                                           const PumpSteadyState& pump,
                                           const std::vector<double>& tau_grid,
                                           const SpectralGrid& grid) {
  if (tau_grid.empty()) throw ParameterError("correlation_trace_numeric: empty tau grid");
  grid.validate_for(device);

  // One pass over omega fills all four kernels; the matrix inversion
  // dominates, so share it.
  std::array<std::vector<complexd>, 4> k_values;
  for (auto& kv : k_values) kv.resize(grid.omega.size());
  const double gamma_ts = device.signal.gamma_t();
  for (size_t j = 0; j < grid.omega.size(); ++j) {
    const Eigen::Matrix4cd t = t_matrix(device, pump, grid.omega[j]);
    for (PathConfig config : kAllConfigs)
      k_values[static_cast<size_t>(config)][j] = kernel_from_t(t, config, gamma_ts);
  }

  CorrelationTrace trace;
  trace.tau = tau_grid;
  trace.envelope.assign(tau_grid.size(), 0.0);
  const double scale = device.signal.gamma_e * device.idler.gamma_e;
  for (PathConfig config : kAllConfigs) {
    const size_t ci = static_cast<size_t>(config);
    const std::vector<complexd> transform =
        windowed_inverse_transform(grid.omega, k_values[ci], tau_grid);
    trace.values[ci].resize(tau_grid.size());
    for (size_t k = 0; k < tau_grid.size(); ++k) {
      trace.values[ci][k] = scale * std::norm(transform[k]);
      trace.envelope[k] += trace.values[ci][k];
    }
  }
  return trace;
}

double relative_l2(const std::vector<double>& reference,
                   const std::vector<double>& other) {
  if (reference.size() != other.size())
    throw ParameterError("relative_l2: size mismatch");
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    num += (reference[i] - other[i]) * (reference[i] - other[i]);
    den += reference[i] * reference[i];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

double min_abs_det(const DeviceParams& device, const PumpSteadyState& pump,
                   const SpectralGrid& grid) {
  double best = std::numeric_limits<double>::infinity();
  for (double w : grid.omega)
    best = std::min(best, std::abs(build_matrix(device, pump, w).determinant()));
  return best;
}

}  // namespace wgm
