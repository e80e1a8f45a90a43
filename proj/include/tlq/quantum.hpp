#pragma once

// Canonical-structure checks for the linear dynamics. For linear circuits the Heisenberg
// equations are linear ODEs for operator coefficients, so the time-evolved operators are
// S·(initial operators) with the classical state-transition matrix S. The equal-time
// commutators are preserved exactly when SᵀJS = J.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "tlq/kernels.hpp"
#include "tlq/ladder.hpp"
#include "tlq/netlist.hpp"
#include "tlq/signal.hpp"
#include "tlq/spectral.hpp"

namespace tlq {

/// State-transition matrix on the stacked canonical state (all fluxes; all momenta).
struct Propagator {
  Eigen::MatrixXd matrix;
  std::string system;
  double t = 0.0;
  double dt = 0.0;  // leapfrog step for ladder propagators, 0 for exact ones
};

/// Isolated lumped circuit: state [Φ; Q].
Propagator propagator_of(const CircuitTopology& topology, double t);

/// Reduced open model with Φ0 appended so the state pairs up: [Φ, Φ0; Q, Q0].
Propagator propagator_of(const ReducedModel& model, const CircuitTopology& topology, double t);

/// Closed ladder + circuit: leapfrog step applied round(t/dt) times to each unit vector.
Propagator propagator_of(const LadderSystem& ladder, double t, double dt,
                         Backend backend = default_backend());

/// J = [[0, I], [−I, 0]] of size 2n.
Eigen::MatrixXd symplectic_form(Eigen::Index n);

/// ‖SᵀJS − J‖∞ (max abs entry). Throws InputError for odd or non-square matrices.
double commutator_residual(const Propagator& prop);

nlohmann::json residual_report(const Propagator& prop);

/// Mean and covariance of the canonical observables.
struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// ħ used when reporting uncertainty products; dynamics never depend on it.
inline constexpr double default_hbar = 1.0;

/// True when cov + (iħ/2)J is positive semidefinite.
bool satisfies_uncertainty(const GaussianMoments& m, double hbar = default_hbar);

/// mean' = S mean, cov' = S cov Sᵀ. Only the deterministic part is propagated: the caller
/// must pass noise_free = true, acknowledging that the line's vacuum noise is not injected.
GaussianMoments propagate_gaussian(const GaussianMoments& moments, const Propagator& prop,
                                   bool noise_free);

struct LangevinWeakResult {
  Signal phi1;
  double kappa = 0.0;
  double omega_renormalized = 0.0;
  std::vector<std::string> warnings;
};

/// Φ̈1 + κΦ̇1 + Ω_r²Φ1 = 2g d/dt v⁰_←(t) with κ and Ω_r from weak_coupling(). The drive is
/// the backward wave (zero if absent) and is never differentiated numerically.
LangevinWeakResult langevin_weak(const LcExampleParams& params, const std::optional<Signal>& drive,
                                 double phi1_initial, double phi1_dot_initial,
                                 const TimeGrid& grid);

/// Local maxima of |x| (linear-time peak picking) as (time, value) pairs.
std::vector<std::pair<double, double>> envelope_peaks(const TimeGrid& grid,
                                                      const std::vector<double>& x);

}  // namespace tlq
