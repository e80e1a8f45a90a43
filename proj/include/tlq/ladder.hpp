#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tlq/kernels.hpp"
#include "tlq/netlist.hpp"
#include "tlq/reduced_dynamics.hpp"
#include "tlq/tline.hpp"

namespace tlq {

/// Finite LC ladder standing in for the line, closed by the coupling capacitor and the
/// lumped circuit. Coordinates are the node fluxes
///
///     [Φ0 = φ(0), φ(Δx), ..., φ(nΔx), Φ1, ..., ΦN]
///
/// with section inductance ℓΔx and shunt capacitance cΔx (half a cell at both ends).
/// The far end is left open, so the system is Hamiltonian and integrated with
/// kick-drift-kick leapfrog on the canonical momenta.
class LadderSystem {
 public:
  LadderSystem(const LineParams& line, const CircuitTopology& topology, std::size_t n_sections,
               double length);

  std::size_t n_sections() const { return n_sections_; }
  double dx() const { return dx_; }
  double length() const { return length_; }
  const LineParams& line() const { return line_; }
  const CircuitTopology& topology() const { return topology_; }
  std::size_t dimension() const { return n_sections_ + 1 + circuit_nodes(); }
  std::size_t circuit_nodes() const { return static_cast<std::size_t>(topology_.node_count); }
  bool linear() const { return topology_.linear(); }

  /// Largest stable leapfrog step estimate: 2/ω_max.
  double stable_step() const;

  std::vector<double>& x() { return x_; }
  std::vector<double>& p() { return p_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& p() const { return p_; }

  /// Sets node fluxes and velocities from a reduced-model state and optional line data:
  ///   Φ̇ = Cb⁻¹Q + pQ0,  Φ̇0 = pᵀQ + Q0/C_p,  φ̇_k = q(x_k)/c,  φ_k = φ(x_k).
  void set_initial(const ReducedModel& model, const ReducedState& state,
                   const LineInitialState* line_state);

  void step(double h, Backend backend);

  double energy(Backend backend) const;

  /// Observables of the lumped side: Φ, Q (canonical circuit momenta), Q0 = C_c(Φ̇0 − Φ̇1), V0 = Φ̇0.
  ReducedState circuit_state() const;
  double line_end_voltage() const;

  /// Applies one leapfrog step to an arbitrary phase-space point (x, p), in place. Used to
  /// build the step propagator column by column. Only valid for linear circuits when used as
  /// a matrix.
  void step_point(std::span<double> x, std::span<double> p, double h, Backend backend) const;

 private:
  void forces(std::span<const double> x, std::span<double> f, Backend backend) const;
  void velocities(std::span<const double> p, std::span<double> v) const;

  LineParams line_;
  CircuitTopology topology_;
  std::size_t n_sections_;
  double length_;
  double dx_;
  double inv_l_;                        // 1 / (ℓΔx)
  std::vector<double> inv_mass_;        // diagonal inverse masses of nodes 1..n (index 0 unused)
  Eigen::MatrixXd small_inv_;           // inverse mass block over {Φ0, Φ1..ΦN}
  std::vector<double> x_;
  std::vector<double> p_;
};

struct LadderOptions {
  std::size_t n_sections = 4000;
  double length = 0.0;          // metres; 0 picks 1.05·v_p·t_max/2
  double courant = 0.5;         // dt = courant·Δx/v_p unless dt > 0
  double dt = 0.0;
  double max_energy_drift = 0.01;
  Backend backend = default_backend();
};

struct LadderRun {
  Trajectory trajectory;
  double dt = 0.0;
  double length = 0.0;
  double max_energy_drift = 0.0;  // max |E(t) − E(0)| / E(0) at sample times
};

/// Integrates the ladder + circuit and samples the circuit observables on `grid`
/// (grid.t0 must be 0). Throws NumericalError when an echo from the open far end could
/// reach x = 0 before grid.back(), or when the energy drift exceeds the limit.
LadderRun ladder_oracle(const LineParams& line, const CircuitTopology& topology,
                        const ReducedModel& model, const ReducedState& initial,
                        const LineInitialState* line_state, const TimeGrid& grid,
                        const LadderOptions& options = {});

/// Shortest line that keeps the far-end echo out of [0, t_max].
double minimum_echo_free_length(const LineParams& line, double t_max);

}  // namespace tlq
