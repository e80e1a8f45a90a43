#include "tlq/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tlq/errors.hpp"

namespace tlq {

LadderSystem::LadderSystem(const LineParams& line, const CircuitTopology& topology,
                           std::size_t n_sections, double length)
    : line_(line), topology_(topology), n_sections_(n_sections), length_(length) {
  validate(topology_);
  if (n_sections_ < 1) throw InputError("ladder needs at least one section");
  if (!(length_ > 0.0)) throw InputError("ladder length must be positive");
  dx_ = length_ / static_cast<double>(n_sections_);
  inv_l_ = 1.0 / (line_.ell * dx_);

  const std::size_t n = n_sections_;
  const double cell = line_.c_per_len * dx_;
  inv_mass_.assign(n + 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) inv_mass_[k] = 1.0 / cell;
  inv_mass_[n] = 2.0 / cell;

  const int nc = topology_.node_count;
  const double cc = topology_.coupling_capacitance;
  Eigen::MatrixXd small = Eigen::MatrixXd::Zero(nc + 1, nc + 1);
  small(0, 0) = 0.5 * cell + cc;
  small(0, 1) = small(1, 0) = -cc;
  small.bottomRightCorner(nc, nc) = reduce_ground(build_capacitance_matrix(topology_), nc);
  small(1, 1) += cc;
  Eigen::LLT<Eigen::MatrixXd> llt(small);
  if (llt.info() != Eigen::Success) throw ModelError("ladder mass matrix is not positive definite");
  small_inv_ = llt.solve(Eigen::MatrixXd::Identity(nc + 1, nc + 1));
  small_inv_ = 0.5 * (small_inv_ + small_inv_.transpose()).eval();

  x_.assign(dimension(), 0.0);
  p_.assign(dimension(), 0.0);
}

double LadderSystem::stable_step() const {
  const double line_rate = 2.0 * line_.v_p / dx_;
  // Stiffness seen by the lumped block, including the first line inductor at node 0.
  const int nc = topology_.node_count;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nc + 1, nc + 1);
  k(0, 0) = inv_l_;
  k.bottomRightCorner(nc, nc) = inductance_stiffness(topology_);
  for (const auto& j : topology_.junctions) {
    const double y = j.josephson_energy / (j.flux_scale * j.flux_scale);
    const int a = j.a, b = j.b;  // small-block index = node label (0 is Φ0)
    if (a <= nc) k(a, a) += y;
    if (b <= nc) k(b, b) += y;
    if (a <= nc && b <= nc) {
      k(a, b) -= y;
      k(b, a) -= y;
    }
  }
  const Eigen::MatrixXd dyn = small_inv_ * k;
  const double lumped_rate = std::sqrt(dyn.eigenvalues().cwiseAbs().maxCoeff());
  return 2.0 / std::max(line_rate, lumped_rate);
}

void LadderSystem::set_initial(const ReducedModel& model, const ReducedState& state,
                               const LineInitialState* line_state) {
  const int nc = topology_.node_count;
  if (model.size() != nc || state.phi.size() != nc || state.q.size() != nc)
    throw InputError("initial state does not match the circuit");
  const std::size_t n = n_sections_;
  std::fill(x_.begin(), x_.end(), 0.0);
  std::fill(p_.begin(), p_.end(), 0.0);

  if (line_state) {
    for (std::size_t k = 0; k <= n; ++k) {
      const double xk = dx_ * static_cast<double>(k);
      x_[k] = line_state->phi.value(xk, DomainPolicy::zero_extend);
      if (k >= 1) {
        const double vel = line_state->q.value(xk, DomainPolicy::zero_extend) / line_.c_per_len;
        p_[k] = vel / inv_mass_[k];
      }
    }
  }
  for (int i = 0; i < nc; ++i) x_[n + 1 + static_cast<std::size_t>(i)] = state.phi(i);

  Eigen::VectorXd v(nc + 1);
  v(0) = model.p.dot(state.q) + state.q0 / model.c_p;
  v.tail(nc) = model.cb_inv * state.q + model.p * state.q0;
  const Eigen::VectorXd ps = small_inv_.ldlt().solve(v);
  p_[0] = ps(0);
  for (int i = 0; i < nc; ++i) p_[n + 1 + static_cast<std::size_t>(i)] = ps(i + 1);
}

void LadderSystem::forces(std::span<const double> x, std::span<double> f, Backend backend) const {
  const std::size_t n = n_sections_;
  kernels::chain_force(backend, x.subspan(0, n + 1), inv_l_, f.subspan(0, n + 1));
  const int nc = topology_.node_count;
  Eigen::Map<const Eigen::VectorXd> phi(x.data() + n + 1, nc);
  const Eigen::VectorXd g = potential_gradient(topology_, phi);
  for (int i = 0; i < nc; ++i) f[n + 1 + static_cast<std::size_t>(i)] = -g(i);
}

void LadderSystem::velocities(std::span<const double> p, std::span<double> v) const {
  const std::size_t n = n_sections_;
  const int nc = topology_.node_count;
  Eigen::VectorXd ps(nc + 1);
  ps(0) = p[0];
  for (int i = 0; i < nc; ++i) ps(i + 1) = p[n + 1 + static_cast<std::size_t>(i)];
  const Eigen::VectorXd vs = small_inv_ * ps;
  v[0] = vs(0);
  for (int i = 0; i < nc; ++i) v[n + 1 + static_cast<std::size_t>(i)] = vs(i + 1);
  for (std::size_t k = 1; k <= n; ++k) v[k] = p[k] * inv_mass_[k];
}

void LadderSystem::step_point(std::span<double> x, std::span<double> p, double h,
                              Backend backend) const {
  const std::size_t n = n_sections_;
  const int nc = topology_.node_count;
  thread_local std::vector<double> buffer;  // step_point runs concurrently in propagator builds
  buffer.resize(dimension());
  std::span<double> f(buffer);
  forces(x, f, backend);
  kernels::kick(backend, p, f, 0.5 * h);

  kernels::drift(backend, x.subspan(1, n), p.subspan(1, n),
                 std::span<const double>(inv_mass_).subspan(1, n), h);
  Eigen::VectorXd ps(nc + 1);
  ps(0) = p[0];
  for (int i = 0; i < nc; ++i) ps(i + 1) = p[n + 1 + static_cast<std::size_t>(i)];
  const Eigen::VectorXd vs = small_inv_ * ps;
  x[0] += h * vs(0);
  for (int i = 0; i < nc; ++i) x[n + 1 + static_cast<std::size_t>(i)] += h * vs(i + 1);

  forces(x, f, backend);
  kernels::kick(backend, p, f, 0.5 * h);
}

void LadderSystem::step(double h, Backend backend) { step_point(x_, p_, h, backend); }

double LadderSystem::energy(Backend backend) const {
  const std::size_t n = n_sections_;
  const int nc = topology_.node_count;
  double e = kernels::chain_energy(backend, std::span<const double>(x_).subspan(0, n + 1),
                                   std::span<const double>(p_).subspan(1, n),
                                   std::span<const double>(inv_mass_).subspan(1, n), inv_l_);
  Eigen::VectorXd ps(nc + 1);
  ps(0) = p_[0];
  for (int i = 0; i < nc; ++i) ps(i + 1) = p_[n + 1 + static_cast<std::size_t>(i)];
  e += 0.5 * ps.dot(small_inv_ * ps);
  Eigen::Map<const Eigen::VectorXd> phi(x_.data() + n + 1, nc);
  e += potential_energy(topology_, phi);
  return e;
}

ReducedState LadderSystem::circuit_state() const {
  const std::size_t n = n_sections_;
  const int nc = topology_.node_count;
  std::vector<double> v(dimension());
  velocities(p_, v);
  ReducedState s = ReducedState::zeros(nc);
  for (int i = 0; i < nc; ++i) {
    s.phi(i) = x_[n + 1 + static_cast<std::size_t>(i)];
    s.q(i) = p_[n + 1 + static_cast<std::size_t>(i)];
  }
  s.q0 = topology_.coupling_capacitance * (v[0] - v[n + 1]);
  return s;
}

double LadderSystem::line_end_voltage() const {
  std::vector<double> v(dimension());
  velocities(p_, v);
  return v[0];
}

double minimum_echo_free_length(const LineParams& line, double t_max) {
  return 0.5 * line.v_p * t_max;
}

LadderRun ladder_oracle(const LineParams& line, const CircuitTopology& topology,
                        const ReducedModel& model, const ReducedState& initial,
                        const LineInitialState* line_state, const TimeGrid& grid,
                        const LadderOptions& options) {
  if (grid.count == 0 || grid.t0 != 0.0) throw InputError("ladder grid must start at t = 0");
  if (options.n_sections < 100) throw InputError("ladder oracle needs at least 100 sections");
  const double t_max = grid.back();
  const double min_length = minimum_echo_free_length(line, t_max);
  const double length = options.length > 0.0 ? options.length : 1.05 * min_length;
  if (!(t_max < 2.0 * length / line.v_p)) {
    std::ostringstream os;
    os << "far-end echo reaches x = 0 at t = " << 2.0 * length / line.v_p << " <= t_max = " << t_max
       << "; use a line longer than " << min_length << " m";
    throw NumericalError(os.str());
  }

  LadderSystem ladder(line, topology, options.n_sections, length);
  std::size_t steps_per_sample = 1;
  if (grid.count > 1) {
    const double target = options.dt > 0.0 ? options.dt : options.courant * ladder.dx() / line.v_p;
    steps_per_sample =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(grid.dt / target - 1e-9)));
  }
  const double h = grid.count > 1 ? grid.dt / static_cast<double>(steps_per_sample) : 0.0;
  if (grid.count > 1 && !(h < ladder.stable_step())) {
    std::ostringstream os;
    os << "leapfrog step " << h << " is not below the stability limit " << ladder.stable_step();
    throw NumericalError(os.str());
  }

  ladder.set_initial(model, initial, line_state);
  LadderRun run;
  run.dt = h;
  run.length = length;
  run.trajectory.grid = grid;
  run.trajectory.integrator = "leapfrog";
  const double e0 = ladder.energy(options.backend);
  auto record = [&] {
    run.trajectory.states.push_back(ladder.circuit_state());
    run.trajectory.v0.push_back(ladder.line_end_voltage());
    const double e = ladder.energy(options.backend);
    const double drift = e0 != 0.0 ? std::abs(e - e0) / std::abs(e0) : std::abs(e - e0);
    run.max_energy_drift = std::max(run.max_energy_drift, drift);
  };
  record();
  for (std::size_t k = 1; k < grid.count; ++k) {
    for (std::size_t s = 0; s < steps_per_sample; ++s) ladder.step(h, options.backend);
    record();
    if (run.max_energy_drift > options.max_energy_drift) {
      std::ostringstream os;
      os << "ladder energy drift " << run.max_energy_drift << " exceeds "
         << options.max_energy_drift << "; use a smaller dt";
      throw NumericalError(os.str());
    }
  }
  return run;
}

}  // namespace tlq
