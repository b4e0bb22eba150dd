#include "wgm/state.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "wgm/errors.hpp"

namespace wgm {

namespace {

const complexd kImag(0.0, 1.0);

void require_normalized(const BiphotonState& state, const char* who) {
  if (std::abs(state.norm_sq() - 1.0) > 1e-10)
    throw ParameterError(std::string(who) + ": state must be normalized");
}

Eigen::Vector4cd to_vector(const BiphotonState& s) {
  return Eigen::Vector4cd(s.amp_ff, s.amp_fb, s.amp_bf, s.amp_bb);
}

BiphotonState from_vector(const Eigen::Vector4cd& v) {
  return BiphotonState{v(0), v(1), v(2), v(3)};
}

// amp'_{s'i'} = sum_{si} M_{s's} M_{i'i} amp_{si} for a single-mode 2x2 map M
// (row-major {M_ff, M_fb, M_bf, M_bb}) applied to both photon slots.
BiphotonState apply_tensor(const std::array<complexd, 4>& m, const BiphotonState& s) {
  const complexd a = m[0], b = m[1], c = m[2], d = m[3];
  BiphotonState out;
  out.amp_ff = a * a * s.amp_ff + a * b * s.amp_fb + b * a * s.amp_bf + b * b * s.amp_bb;
  out.amp_fb = a * c * s.amp_ff + a * d * s.amp_fb + b * c * s.amp_bf + b * d * s.amp_bb;
  out.amp_bf = c * a * s.amp_ff + c * b * s.amp_fb + d * a * s.amp_bf + d * b * s.amp_bb;
  out.amp_bb = c * c * s.amp_ff + c * d * s.amp_fb + d * c * s.amp_bf + d * d * s.amp_bb;
  return out;
}

}  // namespace

double BiphotonState::norm_sq() const {
  return std::norm(amp_ff) + std::norm(amp_fb) + std::norm(amp_bf) + std::norm(amp_bb);
}

BiphotonState BiphotonState::normalized() const {
  const double n = std::sqrt(norm_sq());
  if (n == 0.0) throw ParameterError("cannot normalize a zero state");
  return BiphotonState{amp_ff / n, amp_fb / n, amp_bf / n, amp_bb / n};
}

BiphotonState initial_state(const PumpSteadyState& pump) {
  if (!(pump.f + pump.b > 0.0))
    throw ParameterError("initial_state: zero pump, no pair creation");
  // Pair creation draws two photons from the same pump direction, so the
  // amplitudes go as the squared intracavity fields.
  BiphotonState s;
  s.amp_ff = pump.a_pf * pump.a_pf;
  s.amp_bb = pump.a_pb * pump.a_pb;
  return s.normalized();
}

BiphotonState evolve_closed(const BiphotonState& state, double t, double beta) {
  require_normalized(state, "evolve_closed");
  const double c = std::cos(beta * t);
  const double s = std::sin(beta * t);
  // exp(i beta t sigma_x) on each photon slot.
  const std::array<complexd, 4> u{c, kImag * s, kImag * s, c};
  return apply_tensor(u, state);
}

BiphotonState evolve_oracle(const BiphotonState& state, double t, double beta,
                            double phi_beta) {
  require_normalized(state, "evolve_oracle");
  const complexd g = -beta * std::polar(1.0, phi_beta);
  const complexd gc = std::conj(g);

  // -(beta e^{i phi}|f><b| + h.c.) on the signal slot plus the same on the
  // idler slot, in the {ff, fb, bf, bb} product basis.
  Eigen::Matrix4cd h;
  h << 0.0, g, g, 0.0,
       gc, 0.0, 0.0, g,
       gc, 0.0, 0.0, g,
       0.0, gc, gc, 0.0;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericalError("evolve_oracle: eigendecomposition failed");
  const Eigen::Vector4d evals = solver.eigenvalues();
  const Eigen::Matrix4cd v = solver.eigenvectors();

  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::exp(-kImag * evals(k) * t);
  const Eigen::Vector4cd out = v * phases.asDiagonal() * v.adjoint() * to_vector(state);
  return from_vector(out);
}

std::array<double, 4> path_probabilities(const BiphotonState& state) {
  require_normalized(state, "path_probabilities");
  return {std::norm(state.amp_ff), std::norm(state.amp_fb), std::norm(state.amp_bf),
          std::norm(state.amp_bb)};
}

std::array<complexd, 4> BasisTransform::single_mode_matrix() const {
  const complexd q = std::polar(1.0, phi_beta);
  const double r = 1.0 / std::sqrt(2.0);
  // Rows give (c_-, c_+) from (c_f, c_b); diagonalizes the coupled mode pair
  // with |-> at omega0 - beta.
  return {r, r * q, -r, r * q};
}

BiphotonState to_standing_basis(const BiphotonState& state, const BasisTransform& xf) {
  return apply_tensor(xf.single_mode_matrix(), state);
}

BiphotonState from_standing_basis(const BiphotonState& state, const BasisTransform& xf) {
  const std::array<complexd, 4> w = xf.single_mode_matrix();
  // Adjoint of the single-mode map.
  const std::array<complexd, 4> w_dag{std::conj(w[0]), std::conj(w[2]),
                                      std::conj(w[1]), std::conj(w[3])};
  return apply_tensor(w_dag, state);
}

}  // namespace wgm
