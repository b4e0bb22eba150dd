#pragma once

#include <vector>

#include "wgm/correlations.hpp"

namespace wgm {

/// Intensity oscillation frequency of one delay branch of a correlation
/// trace, reported as an ordinary frequency (Hz). Equals the doublet
/// splitting of the branch mode. The branch envelope exp(-gamma|tau|) is
/// divided out, leaving a pure sinusoid whose zero-crossing spacing gives
/// half the oscillation period.
double oscillation_splitting_hz(const std::vector<double>& tau,
                                const std::vector<double>& values,
                                double gamma_branch, bool positive_branch);

/// Convenience overload on a trace for one configuration.
double oscillation_splitting_hz(const CorrelationTrace& trace, PathConfig config,
                                double gamma_branch, bool positive_branch);

/// Oscillation contrast of one configuration: the Michelson visibility
/// (max - min)/(max + min) of the envelope-compensated trace
/// p_config(tau) exp(+gamma_ts tau) over tau in [0, span/gamma_ts]. Only the
/// window where photons are actually observable counts, so a slow oscillation
/// under a fast decay reads as monotone (contrast -> 0) while full-depth
/// oscillations within the photon lifetime read near 1.
double oscillation_contrast(const CorrelationTrace& trace, PathConfig config,
                            double gamma_ts, double span = 2.0);

/// p_config(0) relative to the trace's own maximum over the grid.
double zero_delay_fraction(const CorrelationTrace& trace, PathConfig config);

}  // namespace wgm
