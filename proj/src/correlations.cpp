#include "wgm/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wgm/errors.hpp"

namespace wgm {

const char* to_string(PathConfig config) {
  switch (config) {
    case PathConfig::FF: return "ff";
    case PathConfig::FB: return "fb";
    case PathConfig::BF: return "bf";
    case PathConfig::BB: return "bb";
  }
  return "?";
}

DeviceConstants device_constants(const DeviceParams& device) {
  validate(device.signal, "signal");
  validate(device.idler, "idler");
  DeviceConstants k;
  k.gamma_ts = device.signal.gamma_t();
  k.gamma_ti = device.idler.gamma_t();
  k.gamma_t = k.gamma_ts + k.gamma_ti;
  k.beta_s = device.signal.beta;
  k.beta_i = device.idler.beta;

  const double bs = k.beta_s, bi = k.beta_i, gt = k.gamma_t;
  k.c0 = (4.0 * bs * bs + 4.0 * bi * bi + gt * gt) * gt;
  k.c1 = 8.0 * bs * bi * gt;
  k.c2 = 8.0 * bi * bi * bi - 8.0 * bs * bs * bi + 2.0 * bi * gt * gt;
  k.c3 = 8.0 * bs * bs * bs - 8.0 * bs * bi * bi + 2.0 * bs * gt * gt;

  const double denom = (k.c0 - k.c1) * (k.c0 + k.c1);
  if (denom == 0.0)
    throw NumericalError("device_constants: degenerate device, (c0-c1)(c0+c1) = 0");
  const double gt4 = gt * gt * gt * gt;
  k.n_scale = 4.0 * device.signal.gamma_e * device.idler.gamma_e * gt4 * device.g *
              device.g / (denom * denom);
  return k;
}

OscCoeffs osc_coeffs(const DeviceConstants& k, const PumpSteadyState& pump,
                     PathConfig config, bool tau_non_negative) {
  // F carries the pump interference phase; b enters with a real coefficient.
  const complexd F = pump.f * std::polar(1.0, -pump.phi);
  const double b = pump.b;

  OscCoeffs osc;
  if (tau_non_negative) {
    osc.beta = k.beta_s;
    osc.gamma = k.gamma_ts;
    switch (config) {
      case PathConfig::FF:
        osc.zeta = k.c0 * F - k.c1 * b;
        osc.eta = -(k.c3 * F + k.c2 * b);
        break;
      case PathConfig::FB:
        osc.zeta = k.c2 * F + k.c3 * b;
        osc.eta = -(k.c1 * F - k.c0 * b);
        break;
      case PathConfig::BF:
        osc.zeta = k.c3 * F + k.c2 * b;
        osc.eta = k.c0 * F - k.c1 * b;
        break;
      case PathConfig::BB:
        osc.zeta = -k.c1 * F + k.c0 * b;
        osc.eta = -(k.c2 * F + k.c3 * b);
        break;
    }
  } else {
    osc.beta = k.beta_i;
    osc.gamma = k.gamma_ti;
    switch (config) {
      case PathConfig::FF:
        osc.zeta = k.c0 * F - k.c1 * b;
        osc.eta = k.c2 * F + k.c3 * b;
        break;
      case PathConfig::FB:
        osc.zeta = k.c2 * F + k.c3 * b;
        osc.eta = -(k.c0 * F - k.c1 * b);
        break;
      case PathConfig::BF:
        osc.zeta = k.c3 * F + k.c2 * b;
        osc.eta = k.c1 * F - k.c0 * b;
        break;
      case PathConfig::BB:
        osc.zeta = -k.c1 * F + k.c0 * b;
        osc.eta = k.c3 * F + k.c2 * b;
        break;
    }
  }
  return osc;
}

namespace {

double eval_correlation(const DeviceConstants& k, const PumpSteadyState& pump,
                        PathConfig config, double tau) {
  if (!std::isfinite(tau)) throw ParameterError("pair_correlation: tau must be finite");
  const OscCoeffs osc = osc_coeffs(k, pump, config, tau >= 0.0);
  const double phase = osc.beta * tau;  // signed
  const complexd amp = osc.zeta * std::cos(phase) + osc.eta * std::sin(phase);
  return k.n_scale * std::exp(-osc.gamma * std::abs(tau)) * std::norm(amp);
}

CorrelationTrace build_trace(const DeviceConstants& k, const PumpSteadyState& pump,
                             const std::vector<double>& tau_grid) {
  if (tau_grid.empty()) throw ParameterError("correlation_trace: empty tau grid");
  if (!std::is_sorted(tau_grid.begin(), tau_grid.end()))
    throw ParameterError("correlation_trace: tau grid must be sorted");
  CorrelationTrace trace;
  trace.tau = tau_grid;
  for (auto& v : trace.values) v.resize(tau_grid.size());
  trace.envelope.assign(tau_grid.size(), 0.0);
  for (size_t i = 0; i < tau_grid.size(); ++i) {
    double sum = 0.0;
    for (PathConfig config : kAllConfigs) {
      const double p = eval_correlation(k, pump, config, tau_grid[i]);
      trace.values[static_cast<size_t>(config)][i] = p;
      sum += p;
    }
    trace.envelope[i] = sum;
  }
  return trace;
}

}  // namespace

double pair_correlation(const DeviceParams& device, const PumpSteadyState& pump,
                        PathConfig config, double tau) {
  return eval_correlation(device_constants(device), pump, config, tau);
}

CorrelationTrace CorrelationTrace::normalized_to_envelope_peak() const {
  double peak = 0.0;
  for (double e : envelope) peak = std::max(peak, e);
  if (peak == 0.0) return *this;
  CorrelationTrace out = *this;
  for (auto& v : out.values)
    for (double& x : v) x /= peak;
  for (double& e : out.envelope) e /= peak;
  return out;
}

CorrelationTrace correlation_trace(const DeviceParams& device,
                                   const PumpSteadyState& pump,
                                   const std::vector<double>& tau_grid) {
  return build_trace(device_constants(device), pump, tau_grid);
}

CorrelationTrace equal_pump_traces(const DeviceParams& device,
                                   const PumpSteadyState& pump,
                                   const std::vector<double>& tau_grid) {
  const double scale = std::max(pump.f, pump.b);
  if (scale <= 0.0 || std::abs(pump.f - pump.b) > 1e-12 * scale)
    throw ParameterError("equal_pump_traces: requires exactly balanced pump energies");
  return build_trace(device_constants(device), pump, tau_grid);
}

std::vector<double> symmetric_tau_grid(const DeviceParams& device, double span,
                                       size_t points) {
  if (points < 2) throw ParameterError("symmetric_tau_grid: need at least 2 points");
  const double gamma_t = device.signal.gamma_t() + device.idler.gamma_t();
  const double t_max = span / gamma_t;
  std::vector<double> grid(points);
  for (size_t i = 0; i < points; ++i)
    grid[i] = -t_max + 2.0 * t_max * static_cast<double>(i) / (points - 1);
  return grid;
}

std::optional<std::string> weak_limit_warning(const DeviceParams& device,
                                              const PumpSteadyState& pump) {
  const double rate = device.g * std::max(pump.f, pump.b);
  const double limit = 0.01 * device.pump.gamma_t();
  if (rate <= limit) return std::nullopt;
  std::ostringstream msg;
  msg << "pump energy leaves the weak-interaction regime: g*max(f,b) = " << rate
      << " rad/s exceeds 1% of Gamma_tp = " << limit << " rad/s";
  return msg.str();
}

}  // namespace wgm
