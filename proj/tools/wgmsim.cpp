// Command-line front end: every subcommand writes plot-ready CSV/JSON with
// enough embedded metadata (seed, device hash, engine, mapping) to reproduce
// the artifact bit-identically.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wgm/errors.hpp"
#include "wgm/io.hpp"
#include "wgm/scenario.hpp"

namespace {

wgm::Engine parse_engine(const std::string& name) {
  if (name == "closed_form") return wgm::Engine::ClosedForm;
  if (name == "spectral") return wgm::Engine::Spectral;
  if (name == "both") return wgm::Engine::Both;
  throw wgm::ParameterError("engine must be closed_form, spectral or both");
}

wgm::TauMapping parse_mapping(const std::string& name) {
  if (name == "linear") return wgm::TauMapping::Linear;
  if (name == "paper_literal") return wgm::TauMapping::PaperLiteral;
  throw wgm::ParameterError("mapping must be linear or paper_literal");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(wgm::kToolName) + " " + wgm::kToolVersion +
               " - coupled counter-propagating mode biphoton simulator"};
  app.require_subcommand(1);

  wgm::Scenario scenario;
  std::string engine_name = "closed_form";
  std::string rate_unit;
  double detuning_hz = 0.0;

  const auto add_common = [&](CLI::App* cmd, bool needs_device = true) {
    if (needs_device)
      cmd->add_option("--device", scenario.device_path, "device JSON file")->required();
    cmd->add_option("--out", scenario.out_path, "output path")->required();
    cmd->add_option("--seed", scenario.seed, "random seed recorded in artifacts");
    cmd->add_option("--rate-unit", rate_unit, "override device rate unit (hz|rad_per_s)");
  };

  // sweep-pump
  auto* sweep = app.add_subcommand("sweep-pump", "pump transmission and phase sweep");
  double min_hz = -2e9, max_hz = 2e9;
  size_t sweep_points = 2001;
  add_common(sweep);
  sweep->add_option("--min-hz", min_hz, "sweep start, ordinary Hz");
  sweep->add_option("--max-hz", max_hz, "sweep end, ordinary Hz");
  sweep->add_option("--points", sweep_points, "grid points");

  // state-evolve
  auto* evolve = app.add_subcommand("state-evolve", "closed-system path probabilities");
  double periods = 2.0;
  size_t evolve_points = 801;
  add_common(evolve);
  evolve->add_option("--detuning-hz", detuning_hz, "pump detuning, ordinary Hz");
  evolve->add_option("--power-w", scenario.input_power_w, "input pump power, W");
  evolve->add_option("--periods", periods, "span in oscillation periods pi/beta");
  evolve->add_option("--points", evolve_points, "grid points");

  // correlations
  auto* corr = app.add_subcommand("correlations", "pair correlations vs delay");
  double span = 5.0;
  size_t corr_points = 2001;
  bool absolute = false;
  add_common(corr);
  corr->add_option("--detuning-hz", detuning_hz, "pump detuning, ordinary Hz");
  corr->add_option("--power-w", scenario.input_power_w, "input pump power, W");
  corr->add_option("--backward-power-w", scenario.backward_power_w,
                   "backward input power for a dual-pump drive, W");
  corr->add_option("--backward-phase-rad", scenario.backward_phase,
                   "backward input phase");
  corr->add_option("--span", span, "delay span in units of 1/Gamma_t");
  corr->add_option("--points", corr_points, "grid points");
  corr->add_option("--engine", engine_name, "closed_form|spectral|both");
  corr->add_flag("--absolute", absolute, "emit absolute densities, not normalized");

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "coincidence histogram from a trace");
  std::string trace_csv, detector_json;
  double pair_rate_scale = 1.0;
  mc->add_option("--trace", trace_csv, "correlation trace CSV")->required();
  mc->add_option("--detector", detector_json, "detector JSON")->required();
  mc->add_option("--scale", pair_rate_scale, "pair rate scale");
  mc->add_option("--out", scenario.out_path, "output CSV")->required();
  mc->add_option("--seed", scenario.seed, "random seed");

  // bell
  auto* bell = app.add_subcommand("bell", "delay-time CHSH analysis");
  wgm::BellRunOptions bell_opts;
  std::string mapping_name = "linear";
  double theta1 = 4.13, theta2 = 0.0;
  add_common(bell);
  bell->add_option("--detuning-hz", detuning_hz, "pump detuning, ordinary Hz");
  bell->add_option("--power-w", scenario.input_power_w, "input pump power, W");
  bell->add_option("--theta1", theta1, "first analyzer setting, rad");
  bell->add_option("--theta2", theta2, "second analyzer setting, rad");
  bell->add_flag("--optimize", bell_opts.optimize, "maximize S over settings");
  bell->add_option("--mapping", mapping_name, "linear|paper_literal");
  bell->add_flag("--estimate-sigma", bell_opts.estimate_sigma,
                 "Poisson-resampling error bar");
  bell->add_option("--detector", bell_opts.detector_path, "detector JSON for sigma");
  bell->add_option("--scale", bell_opts.pair_rate_scale, "pair rate scale for sigma");
  bell->add_option("--nsims", bell_opts.n_sims, "resampling replicates");

  // fit
  auto* fit = app.add_subcommand("fit", "doublet transmission fit");
  std::string fit_in, fit_model_out, coupling = "auto";
  fit->add_option("--in", fit_in, "sweep CSV (detuning_hz, transmission)")->required();
  fit->add_option("--out", scenario.out_path, "result JSON")->required();
  fit->add_option("--emit-model", fit_model_out, "write fitted curve CSV");
  fit->add_option("--coupling", coupling, "under|over|auto branch on ambiguity");

  // regime-sweep
  auto* regime = app.add_subcommand("regime-sweep", "contrast vs beta/Gamma ratio");
  std::vector<double> ratios{0.1, 0.3, 1.0, 3.0, 10.0};
  add_common(regime);
  regime->add_option("--power-w", scenario.input_power_w, "input pump power, W");
  regime->add_option("--ratios", ratios, "beta/Gamma ratios");

  // detuning-sweep
  auto* det_sweep = app.add_subcommand("detuning-sweep", "stacked traces vs detuning");
  std::vector<double> detunings_hz{-0.21e9, -0.16e9, -0.11e9, -0.06e9,
                                   0.35e9,  0.38e9,  0.41e9,  0.44e9};
  std::string summary_path;
  double ds_span = 5.0;
  size_t ds_points = 1201;
  add_common(det_sweep);
  det_sweep->add_option("--power-w", scenario.input_power_w, "input pump power, W");
  det_sweep->add_option("--detunings-hz", detunings_hz, "detuning list, ordinary Hz");
  det_sweep->add_option("--span", ds_span, "delay span in units of 1/Gamma_t");
  det_sweep->add_option("--points", ds_points, "delay grid points");
  det_sweep->add_option("--summary-out", summary_path, "per-detuning summary CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    scenario.rate_unit = rate_unit;
    scenario.detuning = wgm::hz_to_rad(detuning_hz);
    scenario.engine = parse_engine(engine_name);

    if (sweep->parsed()) {
      scenario.load();
      wgm::run_sweep_pump(scenario, min_hz, max_hz, sweep_points);
    } else if (evolve->parsed()) {
      scenario.load();
      wgm::run_state_evolve(scenario, periods, evolve_points);
    } else if (corr->parsed()) {
      scenario.load();
      wgm::run_correlations(scenario, span, corr_points, absolute);
    } else if (mc->parsed()) {
      wgm::run_montecarlo(trace_csv, detector_json, pair_rate_scale, scenario.seed,
                          scenario.out_path);
    } else if (bell->parsed()) {
      scenario.load();
      bell_opts.mapping = parse_mapping(mapping_name);
      bell_opts.angles = wgm::AngleSettings::paper_convention(theta1, theta2);
      wgm::run_bell(scenario, bell_opts);
    } else if (fit->parsed()) {
      wgm::run_fit(fit_in, scenario.out_path, fit_model_out, coupling);
    } else if (regime->parsed()) {
      scenario.load();
      wgm::run_regime_sweep(scenario, ratios);
    } else if (det_sweep->parsed()) {
      scenario.load();
      wgm::run_detuning_sweep(scenario, detunings_hz, ds_span, ds_points, summary_path);
    }
  } catch (const wgm::ParameterError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const wgm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
