#include "wgm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "json.hpp"
#include "wgm/analysis.hpp"
#include "wgm/correlations.hpp"
#include "wgm/errors.hpp"
#include "wgm/fit.hpp"
#include "wgm/spectral.hpp"
#include "wgm/state.hpp"

namespace wgm {

using nlohmann::json;

const char* to_string(Engine engine) {
  switch (engine) {
    case Engine::ClosedForm: return "closed_form";
    case Engine::Spectral: return "spectral";
    case Engine::Both: return "both";
  }
  return "?";
}

void Scenario::load() {
  device = load_device_json(device_path, rate_unit);
  device_hash = fnv1a64_file(device_path);
  if (auto warn = check_frequency_matching(device))
    std::cerr << "warning: " << *warn << "\n";
}

PumpDrive Scenario::drive() const {
  PumpDrive d;
  d.detuning = detuning;
  d.amp_f = std::sqrt(power_to_flux(input_power_w, device.pump.omega0));
  if (backward_power_w > 0.0)
    d.amp_b = std::polar(std::sqrt(power_to_flux(backward_power_w, device.pump.omega0)),
                         backward_phase);
  return d;
}

PumpSteadyState Scenario::pump_state() const {
  const PumpSteadyState ss = steady_state(device, drive());
  if (auto warn = weak_limit_warning(device, ss))
    std::cerr << "warning: " << *warn << "\n";
  return ss;
}

namespace {

void standard_comments(CsvWriter& csv, const Scenario& scenario) {
  csv.comment("tool", std::string(kToolName) + " " + kToolVersion);
  csv.comment("device", scenario.device_path);
  csv.comment("device_fnv1a64", scenario.device_hash);
  csv.comment("seed", scenario.seed);
}

std::vector<double> linspace(double lo, double hi, size_t points) {
  if (points < 2) throw ParameterError("grid needs at least 2 points");
  std::vector<double> g(points);
  for (size_t i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return g;
}

}  // namespace

void run_sweep_pump(const Scenario& scenario, double min_hz, double max_hz,
                    size_t points) {
  if (!(max_hz > min_hz)) throw ParameterError("sweep-pump: need max > min");
  const std::vector<double> grid =
      linspace(hz_to_rad(min_hz), hz_to_rad(max_hz), points);
  const std::vector<PumpSweepPoint> sweep = sweep_pump(scenario.device, grid);

  CsvWriter csv(scenario.out_path);
  standard_comments(csv, scenario);
  csv.header({"detuning_hz", "transmission", "f", "b", "phi_rad", "phi_unwrapped_rad"});
  for (const PumpSweepPoint& p : sweep)
    csv.row({rad_to_hz(p.detuning), p.transmission, p.f, p.b, p.phi, p.phi_unwrapped});
}

void run_state_evolve(const Scenario& scenario, double periods, size_t points) {
  const PumpSteadyState pump = scenario.pump_state();
  const BiphotonState initial = initial_state(pump);
  const double beta = 0.5 * (scenario.device.signal.beta + scenario.device.idler.beta);
  if (!(beta > 0.0)) throw ParameterError("state-evolve: zero modal coupling");
  const double t_max = periods * constants::pi / beta;

  CsvWriter csv(scenario.out_path);
  standard_comments(csv, scenario);
  csv.comment("beta_rad_per_s", beta);
  csv.header({"t_s", "p_ff", "p_fb", "p_bf", "p_bb"});
  for (double t : linspace(0.0, t_max, points)) {
    const auto probs = path_probabilities(evolve_closed(initial, t, beta));
    csv.row({t, probs[0], probs[1], probs[2], probs[3]});
  }
}

void run_correlations(const Scenario& scenario, double span, size_t points,
                      bool absolute) {
  const PumpSteadyState pump = scenario.pump_state();
  const std::vector<double> tau = symmetric_tau_grid(scenario.device, span, points);

  CorrelationTrace closed = correlation_trace(scenario.device, pump, tau);
  CorrelationTrace primary =
      scenario.engine == Engine::Spectral
          ? correlation_trace_numeric(scenario.device, pump, tau,
                                      SpectralGrid::for_device(scenario.device))
          : closed;

  std::vector<double> disagreement;
  if (scenario.engine != Engine::ClosedForm) {
    const CorrelationTrace spectral =
        scenario.engine == Engine::Spectral
            ? primary
            : correlation_trace_numeric(scenario.device, pump, tau,
                                        SpectralGrid::for_device(scenario.device));
    double peak = 0.0;
    for (double e : closed.envelope) peak = std::max(peak, e);
    disagreement.resize(tau.size(), 0.0);
    for (size_t i = 0; i < tau.size(); ++i) {
      double worst = 0.0;
      for (size_t c = 0; c < 4; ++c)
        worst = std::max(worst,
                         std::abs(spectral.values[c][i] - closed.values[c][i]) / peak);
      disagreement[i] = worst;
    }
  }

  const CorrelationTrace out_trace =
      absolute ? primary : primary.normalized_to_envelope_peak();

  CsvWriter csv(scenario.out_path);
  standard_comments(csv, scenario);
  csv.comment("engine", to_string(scenario.engine));
  csv.comment("detuning_hz", rad_to_hz(scenario.detuning));
  csv.comment("pump_f", pump.f);
  csv.comment("pump_b", pump.b);
  csv.comment("pump_phi_rad", pump.phi);
  std::vector<std::string> cols{"tau_s", "p_ff", "p_fb", "p_bf", "p_bb", "envelope"};
  if (!disagreement.empty()) cols.push_back("disagreement");
  csv.header(cols);
  for (size_t i = 0; i < tau.size(); ++i) {
    std::vector<double> row{out_trace.tau[i], out_trace.values[0][i],
                            out_trace.values[1][i], out_trace.values[2][i],
                            out_trace.values[3][i], out_trace.envelope[i]};
    if (!disagreement.empty()) row.push_back(disagreement[i]);
    csv.row(row);
  }
}

void run_montecarlo(const std::string& trace_csv, const std::string& detector_json,
                    double pair_rate_scale, std::uint64_t seed,
                    const std::string& out_path) {
  const auto rows = read_csv(trace_csv);
  if (rows[0].size() < 5)
    throw ParameterError("montecarlo: trace CSV needs tau plus four configuration columns");
  CorrelationTrace trace;
  for (const auto& row : rows) {
    trace.tau.push_back(row[0]);
    for (size_t c = 0; c < 4; ++c) trace.values[c].push_back(row[1 + c]);
    trace.envelope.push_back(row[1] + row[2] + row[3] + row[4]);
  }

  const DetectorModel det = load_detector_json(detector_json);
  const CorrelationTrace convolved = convolve_response(trace, det);
  const ExpectedCounts expected = expected_counts(convolved, det, pair_rate_scale);
  const CoincidenceHistogram hist = sample_histogram(expected, seed);

  CsvWriter csv(out_path);
  csv.comment("tool", std::string(kToolName) + " " + kToolVersion);
  csv.comment("trace", trace_csv);
  csv.comment("detector", detector_json);
  csv.comment("seed", seed);
  csv.comment("pair_rate_scale", pair_rate_scale);
  csv.header({"bin_center_s", "n_ff", "n_fb", "n_bf", "n_bb"});
  for (size_t i = 0; i < hist.bins(); ++i)
    csv.row({hist.bin_center(i), static_cast<double>(hist.counts[0][i]),
             static_cast<double>(hist.counts[1][i]),
             static_cast<double>(hist.counts[2][i]),
             static_cast<double>(hist.counts[3][i])});
}

void run_bell(const Scenario& scenario, const BellRunOptions& options) {
  const PumpSteadyState pump = scenario.pump_state();
  BellResult result =
      options.optimize
          ? optimize_angles(scenario.device, pump, options.mapping)
          : chsh(scenario.device, pump, options.angles, options.mapping);

  if (options.estimate_sigma) {
    if (options.detector_path.empty())
      throw ParameterError("bell: sigma estimation needs a detector file");
    const DetectorModel det = load_detector_json(options.detector_path);
    const std::vector<double> tau =
        symmetric_tau_grid(scenario.device, options.span, 8192);
    const CorrelationTrace trace = correlation_trace(scenario.device, pump, tau);
    const ExpectedCounts expected =
        expected_counts(convolve_response(trace, det), det, options.pair_rate_scale);
    ErrorEstimateOptions err;
    err.n_sims = options.n_sims;
    err.seed = scenario.seed;
    err.mapping = options.mapping;
    err.per_replicate_max = options.optimize;
    result.sigma_s = estimate_error(expected, scenario.device, result.angles, err);
  }

  json out;
  out["S"] = result.s_value;
  out["E"] = result.e_values;
  out["angles"] = {{"theta1", result.angles.theta1},
                   {"theta1p", result.angles.theta1p},
                   {"theta2", result.angles.theta2},
                   {"theta2p", result.angles.theta2p}};
  out["sigma_S"] = result.sigma_s;
  out["mapping_mode"] = to_string(result.mapping);
  out["metadata"] = {{"tool", std::string(kToolName) + " " + kToolVersion},
                     {"device", scenario.device_path},
                     {"device_fnv1a64", scenario.device_hash},
                     {"seed", scenario.seed},
                     {"detuning_hz", rad_to_hz(scenario.detuning)},
                     {"optimized", options.optimize}};
  std::ofstream file(scenario.out_path);
  if (!file) throw ParameterError("cannot open '" + scenario.out_path + "' for writing");
  file << out.dump(2) << "\n";
}

void run_fit(const std::string& in_csv, const std::string& out_json,
             const std::string& emit_model_csv, const std::string& coupling) {
  if (coupling != "auto" && coupling != "under" && coupling != "over")
    throw ParameterError("fit: coupling must be auto, under or over");
  const auto rows = read_csv(in_csv);
  if (rows[0].size() < 2)
    throw ParameterError("fit: sweep CSV needs detuning_hz and transmission columns");
  SweepTrace trace;
  for (const auto& row : rows) {
    trace.detuning.push_back(hz_to_rad(row[0]));
    trace.transmission.push_back(row[1]);
  }

  FitResult fit = fit_doublet(trace);
  // Branch selection on an ambiguous fit.
  if (fit.ambiguous && coupling != "auto") {
    const bool best_under = fit.gamma_e < fit.gamma0;
    const bool want_under = coupling == "under";
    if (best_under != want_under && fit.alternate) {
      const DoubletParams alt = *fit.alternate;
      const bool alt_under = alt.gamma_e < alt.gamma0;
      if (alt_under == want_under) {
        std::swap(fit.gamma0, fit.alternate->gamma0);
        std::swap(fit.gamma_e, fit.alternate->gamma_e);
        std::swap(fit.beta, fit.alternate->beta);
        std::swap(fit.center_offset, fit.alternate->center_offset);
        std::swap(fit.residual_rms, fit.alternate_residual_rms);
      }
    }
  }

  json out;
  out["gamma0_hz"] = rad_to_hz(fit.gamma0);
  out["gamma_e_hz"] = rad_to_hz(fit.gamma_e);
  out["beta_hz"] = rad_to_hz(fit.beta);
  out["splitting_hz"] = rad_to_hz(2.0 * fit.beta);
  out["center_offset_hz"] = rad_to_hz(fit.center_offset);
  out["residual_rms"] = fit.residual_rms;
  out["converged"] = fit.converged;
  out["ambiguous"] = fit.ambiguous;
  if (fit.alternate) {
    out["alternate"] = {{"gamma0_hz", rad_to_hz(fit.alternate->gamma0)},
                        {"gamma_e_hz", rad_to_hz(fit.alternate->gamma_e)},
                        {"beta_hz", rad_to_hz(fit.alternate->beta)},
                        {"residual_rms", fit.alternate_residual_rms}};
  }
  out["metadata"] = {{"tool", std::string(kToolName) + " " + kToolVersion},
                     {"input", in_csv},
                     {"input_fnv1a64", fnv1a64_file(in_csv)},
                     {"coupling", coupling}};
  std::ofstream file(out_json);
  if (!file) throw ParameterError("cannot open '" + out_json + "' for writing");
  file << out.dump(2) << "\n";

  if (!emit_model_csv.empty()) {
    CsvWriter csv(emit_model_csv);
    csv.comment("tool", std::string(kToolName) + " " + kToolVersion);
    csv.comment("input", in_csv);
    csv.header({"detuning_hz", "transmission_fit"});
    for (double d : trace.detuning)
      csv.row({rad_to_hz(d), doublet_model(fit.params(), d)});
  }
}

RegimePoint regime_point(const DeviceParams& base, double ratio, double power_w) {
  if (!(ratio > 0.0)) throw ParameterError("regime-sweep: ratios must be positive");
  const double beta_mean = 0.5 * (base.signal.beta + base.idler.beta);
  const double gamma_mean_base = 0.5 * (base.signal.gamma_t() + base.idler.gamma_t());

  // Rescale every mode's total decay, preserving the intrinsic/external
  // split, so that mean(beta)/mean(Gamma_t) hits the requested ratio. The
  // drive power follows the loss scaling squared to stay inside the
  // weak-interaction regime; normalized trace shapes are power-invariant.
  const double k = beta_mean / (ratio * gamma_mean_base);
  DeviceParams scaled = base;
  for (ModeParams* mode : {&scaled.pump, &scaled.signal, &scaled.idler}) {
    mode->gamma0 *= k;
    mode->gamma_e *= k;
  }

  // Lock at the lower doublet resonance, as in the measurements.
  PumpDrive drive;
  drive.detuning = -scaled.pump.beta;
  drive.amp_f = std::sqrt(power_to_flux(power_w * k * k, scaled.pump.omega0));
  const PumpSteadyState pump = steady_state(scaled, drive);
  const std::vector<double> tau = symmetric_tau_grid(scaled, 8.0, 4001);
  const CorrelationTrace trace = correlation_trace(scaled, pump, tau);

  RegimePoint point;
  point.ratio = ratio;
  const double gamma_ts = scaled.signal.gamma_t();
  for (PathConfig config : kAllConfigs)
    point.per_config[static_cast<size_t>(config)] =
        oscillation_contrast(trace, config, gamma_ts, kContrastWindowSpan);
  // Classification contrasts from the summed pair of traces.
  const auto classification = [&](size_t a, size_t b) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (size_t i = 0; i < tau.size(); ++i) {
      if (tau[i] < 0.0 || tau[i] > kContrastWindowSpan / gamma_ts) continue;
      const double q =
          (trace.values[a][i] + trace.values[b][i]) * std::exp(gamma_ts * tau[i]);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    return hi > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
  };
  point.co_propagating = classification(0, 3);
  point.counter_propagating = classification(1, 2);
  point.f = pump.f;
  point.b = pump.b;
  point.phi = pump.phi;
  return point;
}

void run_regime_sweep(const Scenario& scenario, const std::vector<double>& ratios) {
  if (ratios.empty()) throw ParameterError("regime-sweep: ratio list is empty");

  CsvWriter csv(scenario.out_path);
  standard_comments(csv, scenario);
  csv.comment("input_power_w", scenario.input_power_w);
  csv.comment("contrast_window_span", kContrastWindowSpan);
  csv.header({"ratio", "contrast_co", "contrast_counter", "contrast_ff", "contrast_fb",
              "contrast_bf", "contrast_bb", "f", "b", "phi_rad"});

  for (double ratio : ratios) {
    const RegimePoint p = regime_point(scenario.device, ratio, scenario.input_power_w);
    csv.row({p.ratio, p.co_propagating, p.counter_propagating, p.per_config[0],
             p.per_config[1], p.per_config[2], p.per_config[3], p.f, p.b, p.phi});
  }
}

void run_detuning_sweep(const Scenario& scenario,
                        const std::vector<double>& detunings_hz, double span,
                        size_t points, const std::string& summary_path) {
  if (detunings_hz.empty()) throw ParameterError("detuning-sweep: no detunings given");

  CsvWriter csv(scenario.out_path);
  standard_comments(csv, scenario);
  csv.header(
      {"detuning_hz", "tau_s", "p_ff", "p_fb", "p_bf", "p_bb", "envelope", "phi_rad"});

  std::vector<std::array<double, 3>> summary;  // detuning_hz, phi, fb zero fraction
  const std::vector<double> tau = symmetric_tau_grid(scenario.device, span, points);
  for (double d_hz : detunings_hz) {
    Scenario local = scenario;
    local.detuning = hz_to_rad(d_hz);
    const PumpSteadyState pump = local.pump_state();
    const CorrelationTrace trace =
        correlation_trace(scenario.device, pump, tau).normalized_to_envelope_peak();
    for (size_t i = 0; i < tau.size(); ++i)
      csv.row({d_hz, trace.tau[i], trace.values[0][i], trace.values[1][i],
               trace.values[2][i], trace.values[3][i], trace.envelope[i], pump.phi});
    summary.push_back({d_hz, pump.phi, zero_delay_fraction(trace, PathConfig::FB)});
  }

  if (!summary_path.empty()) {
    CsvWriter sum(summary_path);
    standard_comments(sum, scenario);
    sum.comment("flip_metric", "p_fb(0) / max_tau p_fb");
    sum.header({"detuning_hz", "phi_rad", "fb_zero_delay_fraction"});
    for (const auto& row : summary) sum.row({row[0], row[1], row[2]});
  }
}

}  // namespace wgm
