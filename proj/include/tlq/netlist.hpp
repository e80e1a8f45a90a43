#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace tlq {

/// ħ/2e in weber; default flux scale of a junction (reduced flux quantum).
inline constexpr double reduced_flux_quantum = 3.291059784754533e-16;

/// Two-terminal element between nodes a and b (labels 1..N+1, N+1 is ground).
struct Branch {
  int a = 0;
  int b = 0;
  double value = 0.0;
};

struct Junction {
  int a = 0;
  int b = 0;
  double josephson_energy = 0.0;                    // joule
  double flux_scale = reduced_flux_quantum;         // weber
};

/// Lumped circuit attached to the line end (node 0) through the coupling capacitor,
/// which always joins node 0 to node 1.
struct CircuitTopology {
  int node_count = 0;
  std::vector<Branch> capacitors;
  std::vector<Branch> inductors;
  std::vector<Junction> junctions;
  double coupling_capacitance = 0.0;

  int ground() const { return node_count + 1; }
  bool linear() const { return junctions.empty(); }
};

/// Parses the line-oriented netlist format:
///
///     # comment
///     C i j value      capacitor (farad)
///     L i j value      inductor (henry)
///     J i j E_J [phi0] Josephson junction (joule, optional flux scale in weber)
///     COUPLE value     coupling capacitor between node 0 and node 1 (farad)
///     GROUND auto      ground is the highest node label
///
/// Errors carry the 1-based line number.
CircuitTopology parse_netlist(std::istream& in);
CircuitTopology parse_netlist_file(const std::string& path);
CircuitTopology parse_netlist_string(const std::string& text);

/// Checks value signs and node ranges (InputError) and that every node is active (ModelError).
void validate(const CircuitTopology& topology);

/// (N+1)x(N+1) capacitance matrix over nodes 1..N+1, ground included.
Eigen::MatrixXd build_capacitance_matrix(const CircuitTopology& topology);

/// Drops row and column `ground_index` (0-based). Throws ModelError if the result is not
/// positive definite.
Eigen::MatrixXd reduce_ground(const Eigen::MatrixXd& full, int ground_index);

/// Linear-inductance matrix K with U_lin = ½ Φᵀ K Φ (ground removed).
Eigen::MatrixXd inductance_stiffness(const CircuitTopology& topology);

/// Everything the reduced line + circuit equations need.
struct ReducedModel {
  Eigen::MatrixXd cb;
  Eigen::MatrixXd cb_inv;
  Eigen::VectorXd p;  // first row of cb_inv
  double c_p = 0.0;   // 1/c_p = 1/C_c + p_1
  Eigen::MatrixXd a;  // cb_inv - c_p p pᵀ
  Eigen::MatrixXd b;  // c_p p pᵀ
  double tau = 0.0;   // z_c * c_p
  double z_c = 0.0;
  double condition_number = 1.0;
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(p.size()); }
};

inline constexpr double default_condition_bound = 1e12;

ReducedModel derive_reduced_model(const CircuitTopology& topology, double z_c,
                                  double condition_bound = default_condition_bound);

nlohmann::json to_json(const ReducedModel& model);

/// Residuals of the defining identities; used by `reduce` and the invariant tests.
struct ModelResiduals {
  double cb_p_minus_e1 = 0.0;    // ‖Cb p − e1‖∞ / (‖Cb‖∞ ‖p‖∞), e1 = (1, 0, ..., 0)
  double c_p_identity = 0.0;     // |1/C_p − 1/C_c − p1| / (1/C_p)
  double a_plus_b = 0.0;         // ‖A + B − Cb⁻¹‖∞ / ‖Cb⁻¹‖∞
  double cb_symmetry = 0.0;
};
ModelResiduals check_invariants(const ReducedModel& model, double coupling_capacitance);

/// Potential energy of the inductive elements, nodes 1..N (ground fixed at zero flux).
double potential_energy(const CircuitTopology& topology, const Eigen::VectorXd& phi);

/// ∂U_b/∂Φ assembled per node.
Eigen::VectorXd potential_gradient(const CircuitTopology& topology, const Eigen::VectorXd& phi);

}  // namespace tlq
