#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wgm/bell.hpp"
#include "wgm/io.hpp"
#include "wgm/model.hpp"

namespace wgm {

enum class Engine { ClosedForm, Spectral, Both };
const char* to_string(Engine engine);

/// Shared scenario inputs for the CLI subcommands. Every artifact embeds the
/// seed, device hash, tool version and engine/mapping selections so a run can
/// be reproduced bit-identically.
struct Scenario {
  std::string device_path;
  std::string rate_unit;  // override; empty = use the file's declaration
  double detuning = 0.0;  // rad/s
  double input_power_w = 8.54e-6;
  double backward_power_w = 0.0;  // nonzero selects the dual-pump drive
  double backward_phase = 0.0;
  Engine engine = Engine::ClosedForm;
  std::string out_path;
  std::uint64_t seed = 0;

  DeviceParams device;       // filled by load()
  std::uint64_t device_hash = 0;

  void load();
  PumpDrive drive() const;
  PumpSteadyState pump_state() const;
};

/// sweep-pump: transmission, intracavity energies and relative phase over a
/// detuning grid. CSV columns: detuning_hz, transmission, f, b, phi_rad,
/// phi_unwrapped_rad.
void run_sweep_pump(const Scenario& scenario, double min_hz, double max_hz,
                    size_t points);

/// state-evolve: closed-system path probabilities over time. CSV columns:
/// t_s, p_ff, p_fb, p_bf, p_bb. Time grid spans `periods` path-oscillation
/// periods pi/beta with the mean signal/idler coupling rate.
void run_state_evolve(const Scenario& scenario, double periods, size_t points);

/// correlations: four-configuration pair correlations. CSV columns: tau_s,
/// p_ff, p_fb, p_bf, p_bb, envelope [, disagreement]. Traces are normalized
/// to the envelope peak unless `absolute` is set.
void run_correlations(const Scenario& scenario, double span, size_t points,
                      bool absolute);

/// montecarlo: trace CSV + detector JSON -> coincidence histogram. CSV
/// columns: bin_center_s, n_ff, n_fb, n_bf, n_bb.
void run_montecarlo(const std::string& trace_csv, const std::string& detector_json,
                    double pair_rate_scale, std::uint64_t seed,
                    const std::string& out_path);

struct BellRunOptions {
  bool optimize = false;
  AngleSettings angles = AngleSettings::paper_convention(4.13, 0.0);
  TauMapping mapping = kDefaultMapping;
  bool estimate_sigma = false;
  std::string detector_path;
  double pair_rate_scale = 1.0;
  int n_sims = 2500;
  double span = 5.0;  // tau window for the histogram, units of 1/Gamma_t
};

/// bell: CHSH analysis -> JSON result {S, E, angles, sigma_S, mapping_mode}.
void run_bell(const Scenario& scenario, const BellRunOptions& options);

/// fit: sweep CSV (detuning_hz, transmission) -> FitResult JSON; optional
/// fitted-curve CSV. coupling picks the reported branch on ambiguity:
/// "under", "over" or "auto".
void run_fit(const std::string& in_csv, const std::string& out_json,
             const std::string& emit_model_csv, const std::string& coupling);

/// Observability window (units of 1/Gamma_ts) for the regime-sweep
/// oscillation contrast.
inline constexpr double kContrastWindowSpan = 1.6;

struct RegimePoint {
  double ratio = 0.0;
  double co_propagating = 0.0;       // contrast of the summed FF+BB trace
  double counter_propagating = 0.0;  // contrast of the summed FB+BF trace
  std::array<double, 4> per_config{};
  double f = 0.0;
  double b = 0.0;
  double phi = 0.0;
};

/// One regime-sweep evaluation: rescale all decay rates (preserving each
/// mode's intrinsic/external split) to hit beta/Gamma, lock at the lower
/// doublet resonance and measure oscillation contrasts.
RegimePoint regime_point(const DeviceParams& base, double ratio, double power_w);

/// regime-sweep: contrasts across a list of beta/Gamma ratios. CSV columns:
/// ratio, contrast_co, contrast_counter, contrast_ff, contrast_fb,
/// contrast_bf, contrast_bb, f, b, phi_rad.
void run_regime_sweep(const Scenario& scenario, const std::vector<double>& ratios);

/// detuning-sweep: stacked traces for a list of detunings plus the pump
/// phase and the zero-delay fraction of the counter-propagating trace.
/// CSV columns: detuning_hz, tau_s, p_ff, p_fb, p_bf, p_bb, envelope,
/// phi_rad. A summary CSV row per detuning goes to `summary_path` when set.
void run_detuning_sweep(const Scenario& scenario,
                        const std::vector<double>& detunings_hz, double span,
                        size_t points, const std::string& summary_path);

}  // namespace wgm
