#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tlq/netlist.hpp"
#include "tlq/signal.hpp"

namespace tlq {

/// Circuit fluxes and momenta plus the coupling-capacitor momentum Q0.
struct ReducedState {
  Eigen::VectorXd phi;
  Eigen::VectorXd q;
  double q0 = 0.0;

  static ReducedState zeros(int n);

  /// V0 = pᵀQ + Q0/C_p.
  double v0(const ReducedModel& model) const;
};

enum class Integrator { automatic, exponential, rk4 };

const char* to_string(Integrator integrator);

struct Trajectory {
  TimeGrid grid;
  std::vector<ReducedState> states;
  std::vector<double> v0;  // tracked line-end voltage, one per sample
  std::string integrator;
  std::vector<std::string> warnings;

  std::size_t size() const { return states.size(); }
  /// Φ_node(t) for node in 1..N.
  std::vector<double> phi(int node) const;
  std::vector<double> q(int node) const;
  std::vector<double> q0() const;

  /// Columns t, Φ₁..Φ_N, Q₁..Q_N, Q0, V0.
  std::vector<std::string> csv_header() const;
  std::vector<std::vector<double>> csv_columns() const;
};

/// Right-hand side of the reduced equations on the stacked state [Φ, Q, Q0, V0]:
///   Φ̇  = Cb⁻¹Q + p Q0
///   Q̇  = −∂U_b/∂Φ
///   Q̇0 = −Q0/τ − pᵀQ/Z_c + e0/Z_c
///   V̇0 = pᵀQ̇ − V0/τ + e0/τ
/// V0 is carried as an independent state so the identity V0 = pᵀQ + Q0/C_p can be checked.
class ReducedRhs {
 public:
  ReducedRhs(ReducedModel model, CircuitTopology topology, std::optional<Signal> e0 = {});

  const ReducedModel& model() const { return model_; }
  const CircuitTopology& topology() const { return topology_; }
  bool linear() const { return topology_.linear(); }
  int dimension() const { return 2 * model_.size() + 2; }

  double drive(double t) const;
  bool driven() const { return e0_.has_value(); }

  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& x) const;

  /// For linear circuits: ẋ = M x + b e0(t).
  Eigen::MatrixXd system_matrix() const;
  Eigen::VectorXd input_vector() const;

  Eigen::VectorXd pack(const ReducedState& s) const;
  ReducedState unpack(const Eigen::VectorXd& x) const;

  /// Rough fastest rate of the system, used for the dt check.
  double fastest_rate() const;

 private:
  ReducedModel model_;
  CircuitTopology topology_;
  std::optional<Signal> e0_;
};

ReducedRhs assemble_rhs(const ReducedModel& model, const CircuitTopology& topology,
                        std::optional<Signal> e0 = {});

/// Uniform-step integration. `automatic` picks the exact exponential stepper for linear
/// circuits (drive treated as piecewise linear between grid points) and RK4 otherwise.
Trajectory integrate(const ReducedRhs& rhs, const ReducedState& initial, const TimeGrid& grid,
                     Integrator integrator = Integrator::automatic);

/// Convolution (quantum-Langevin) form Φ̇ = A Q + B (g * Q̇) + w(t), Q̇ = −∂U/∂Φ with
/// g(t) = e^{−t/τ}. The memory terms are carried as two scalar states
///   m = pᵀ(g * Q̇),  r = (1/τ) g * e0 + g(t) V0(0),
/// so that V0 = m + r. Returns the same observables as integrate().
Trajectory langevin_form(const ReducedModel& model, const CircuitTopology& topology,
                         std::optional<Signal> e0, const ReducedState& initial,
                         const TimeGrid& grid, Integrator integrator = Integrator::automatic);

/// Exact one-step map for ẋ = M x + b u(t) with u linear over the step:
/// x⁺ = Φ x + Γ0 u_k + Γ1 (u_{k+1} − u_k)/h.
struct ExponentialStep {
  Eigen::MatrixXd phi;
  Eigen::VectorXd gamma0;
  Eigen::VectorXd gamma1;

  ExponentialStep(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, double h);
  Eigen::VectorXd apply(const Eigen::VectorXd& x, double u0, double u1, double h) const;
};

/// Relative L2 discrepancy ‖a − b‖₂ / ‖b‖₂.
double relative_l2(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace tlq
