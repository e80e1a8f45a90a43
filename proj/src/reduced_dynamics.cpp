#include "tlq/reduced_dynamics.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "tlq/errors.hpp"

namespace tlq {

ReducedState ReducedState::zeros(int n) {
  return ReducedState{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0.0};
}

double ReducedState::v0(const ReducedModel& model) const { return model.p.dot(q) + q0 / model.c_p; }

const char* to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::automatic: return "automatic";
    case Integrator::exponential: return "exponential";
    case Integrator::rk4: return "rk4";
  }
  return "?";
}

std::vector<double> Trajectory::phi(int node) const {
  std::vector<double> out(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) out[k] = states[k].phi(node - 1);
  return out;
}

std::vector<double> Trajectory::q(int node) const {
  std::vector<double> out(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) out[k] = states[k].q(node - 1);
  return out;
}

std::vector<double> Trajectory::q0() const {
  std::vector<double> out(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) out[k] = states[k].q0;
  return out;
}

std::vector<std::string> Trajectory::csv_header() const {
  std::vector<std::string> h{"t"};
  const int n = states.empty() ? 0 : static_cast<int>(states.front().phi.size());
  for (int i = 1; i <= n; ++i) h.push_back("phi" + std::to_string(i));
  for (int i = 1; i <= n; ++i) h.push_back("q" + std::to_string(i));
  h.push_back("q0");
  h.push_back("v0");
  return h;
}

std::vector<std::vector<double>> Trajectory::csv_columns() const {
  std::vector<std::vector<double>> cols;
  std::vector<double> t(states.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = grid.at(k);
  cols.push_back(std::move(t));
  const int n = states.empty() ? 0 : static_cast<int>(states.front().phi.size());
  for (int i = 1; i <= n; ++i) cols.push_back(phi(i));
  for (int i = 1; i <= n; ++i) cols.push_back(q(i));
  cols.push_back(q0());
  cols.push_back(v0);
  return cols;
}

ReducedRhs::ReducedRhs(ReducedModel model, CircuitTopology topology, std::optional<Signal> e0)
    : model_(std::move(model)), topology_(std::move(topology)), e0_(std::move(e0)) {
  if (model_.size() != topology_.node_count)
    throw InputError("reduced model and topology disagree on node count");
}

double ReducedRhs::drive(double t) const { return e0_ ? e0_->at(t) : 0.0; }

Eigen::VectorXd ReducedRhs::operator()(double t, const Eigen::VectorXd& x) const {
  const int n = model_.size();
  const auto phi = x.segment(0, n);
  const auto q = x.segment(n, n);
  const double q0 = x(2 * n);
  const double v0 = x(2 * n + 1);
  const double e = drive(t);
  Eigen::VectorXd dx(2 * n + 2);
  dx.segment(0, n) = model_.cb_inv * q + model_.p * q0;
  const Eigen::VectorXd qdot = -potential_gradient(topology_, phi);
  dx.segment(n, n) = qdot;
  dx(2 * n) = -q0 / model_.tau - model_.p.dot(q) / model_.z_c + e / model_.z_c;
  dx(2 * n + 1) = model_.p.dot(qdot) - v0 / model_.tau + e / model_.tau;
  return dx;
}

Eigen::MatrixXd ReducedRhs::system_matrix() const {
  if (!linear()) throw InputError("system matrix requires a linear circuit");
  const int n = model_.size();
  const Eigen::MatrixXd k = inductance_stiffness(topology_);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 2);
  m.block(0, n, n, n) = model_.cb_inv;
  m.block(0, 2 * n, n, 1) = model_.p;
  m.block(n, 0, n, n) = -k;
  m.block(2 * n, n, 1, n) = -model_.p.transpose() / model_.z_c;
  m(2 * n, 2 * n) = -1.0 / model_.tau;
  m.block(2 * n + 1, 0, 1, n) = -(model_.p.transpose() * k);
  m(2 * n + 1, 2 * n + 1) = -1.0 / model_.tau;
  return m;
}

Eigen::VectorXd ReducedRhs::input_vector() const {
  const int n = model_.size();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * n + 2);
  b(2 * n) = 1.0 / model_.z_c;
  b(2 * n + 1) = 1.0 / model_.tau;
  return b;
}

Eigen::VectorXd ReducedRhs::pack(const ReducedState& s) const {
  const int n = model_.size();
  if (s.phi.size() != n || s.q.size() != n) throw InputError("initial state has wrong size");
  Eigen::VectorXd x(2 * n + 2);
  x << s.phi, s.q, s.q0, s.v0(model_);
  return x;
}

ReducedState ReducedRhs::unpack(const Eigen::VectorXd& x) const {
  const int n = model_.size();
  return ReducedState{x.segment(0, n), x.segment(n, n), x(2 * n)};
}

namespace {

double stiffness_rate(const ReducedModel& model, const CircuitTopology& topology) {
  Eigen::MatrixXd k = inductance_stiffness(topology);
  for (const auto& j : topology.junctions) {
    // Small-signal inductance φ0²/E_J.
    const double y = j.josephson_energy / (j.flux_scale * j.flux_scale);
    const int n = topology.node_count;
    const int a = j.a - 1, b = j.b - 1;
    if (a < n) k(a, a) += y;
    if (b < n) k(b, b) += y;
    if (a < n && b < n) {
      k(a, b) -= y;
      k(b, a) -= y;
    }
  }
  const double lam_c = model.cb_inv.lpNorm<Eigen::Infinity>();
  const double lam_k = k.lpNorm<Eigen::Infinity>();
  return std::sqrt(lam_c * lam_k);
}

}  // namespace

double ReducedRhs::fastest_rate() const {
  return std::max(1.0 / model_.tau, stiffness_rate(model_, topology_));
}

ExponentialStep::ExponentialStep(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, double h) {
  const auto n = m.rows();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 2, n + 2);
  aug.topLeftCorner(n, n) = m;
  aug.block(0, n, n, 1) = b;
  aug(n, n + 1) = 1.0;
  const Eigen::MatrixXd e = (aug * h).exp();
  phi = e.topLeftCorner(n, n);
  gamma0 = e.block(0, n, n, 1);
  gamma1 = e.block(0, n + 1, n, 1);
}

Eigen::VectorXd ExponentialStep::apply(const Eigen::VectorXd& x, double u0, double u1,
                                       double h) const {
  return phi * x + gamma0 * u0 + gamma1 * ((u1 - u0) / h);
}

namespace {

using Field = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

struct UniformProblem {
  Field f;
  bool linear = false;
  Eigen::MatrixXd m;  // linear only
  Eigen::VectorXd b;
  std::function<double(double)> drive;
  double fastest_rate = 0.0;
};

std::vector<Eigen::VectorXd> run_uniform(const UniformProblem& prob, const Eigen::VectorXd& x0,
                                         const TimeGrid& grid, Integrator& integrator,
                                         std::vector<std::string>& warnings) {
  if (grid.count == 0) throw InputError("empty time grid");
  if (!(grid.dt > 0.0)) throw InputError("time step must be positive");
  if (integrator == Integrator::automatic)
    integrator = prob.linear ? Integrator::exponential : Integrator::rk4;
  if (integrator == Integrator::exponential && !prob.linear)
    throw InputError("the exponential stepper needs a linear circuit");

  const double limit = 1.0 / (20.0 * prob.fastest_rate);
  if (grid.dt > limit) {
    std::ostringstream os;
    os << "dt = " << grid.dt << " exceeds the resolution guideline " << limit;
    warnings.push_back(os.str());
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(grid.count);
  out.push_back(x0);
  const double h = grid.dt;
  Eigen::VectorXd x = x0;
  if (integrator == Integrator::exponential) {
    const ExponentialStep step(prob.m, prob.b, h);
    double u0 = prob.drive(grid.at(0));
    for (std::size_t k = 1; k < grid.count; ++k) {
      const double u1 = prob.drive(grid.at(k));
      x = step.apply(x, u0, u1, h);
      u0 = u1;
      out.push_back(x);
    }
  } else {
    for (std::size_t k = 1; k < grid.count; ++k) {
      const double t = grid.at(k - 1);
      const Eigen::VectorXd k1 = prob.f(t, x);
      const Eigen::VectorXd k2 = prob.f(t + 0.5 * h, x + 0.5 * h * k1);
      const Eigen::VectorXd k3 = prob.f(t + 0.5 * h, x + 0.5 * h * k2);
      const Eigen::VectorXd k4 = prob.f(t + h, x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite()) {
        std::ostringstream os;
        os << "state became non-finite at t = " << grid.at(k) << "; reduce dt";
        throw NumericalError(os.str());
      }
      out.push_back(x);
    }
  }
  if (!out.back().allFinite()) throw NumericalError("state became non-finite");
  return out;
}

}  // namespace

ReducedRhs assemble_rhs(const ReducedModel& model, const CircuitTopology& topology,
                        std::optional<Signal> e0) {
  return ReducedRhs(model, topology, std::move(e0));
}

Trajectory integrate(const ReducedRhs& rhs, const ReducedState& initial, const TimeGrid& grid,
                     Integrator integrator) {
  UniformProblem prob;
  prob.f = [&rhs](double t, const Eigen::VectorXd& x) { return rhs(t, x); };
  prob.linear = rhs.linear();
  if (prob.linear) {
    prob.m = rhs.system_matrix();
    prob.b = rhs.input_vector();
  }
  prob.drive = [&rhs](double t) { return rhs.drive(t); };
  prob.fastest_rate = rhs.fastest_rate();

  Trajectory traj;
  traj.grid = grid;
  const auto xs = run_uniform(prob, rhs.pack(initial), grid, integrator, traj.warnings);
  traj.integrator = to_string(integrator);
  const int n = rhs.model().size();
  traj.states.reserve(xs.size());
  traj.v0.reserve(xs.size());
  for (const auto& x : xs) {
    traj.states.push_back(rhs.unpack(x));
    traj.v0.push_back(x(2 * n + 1));
  }
  return traj;
}

Trajectory langevin_form(const ReducedModel& model, const CircuitTopology& topology,
                         std::optional<Signal> e0, const ReducedState& initial,
                         const TimeGrid& grid, Integrator integrator) {
  const int n = model.size();
  if (topology.node_count != n) throw InputError("reduced model and topology disagree on node count");
  if (initial.phi.size() != n || initial.q.size() != n) throw InputError("initial state has wrong size");
  const Eigen::VectorXd cpp = model.c_p * model.p;
  auto drive = [&e0](double t) { return e0 ? e0->at(t) : 0.0; };

  UniformProblem prob;
  prob.f = [&](double t, const Eigen::VectorXd& y) {
    const auto phi = y.segment(0, n);
    const auto q = y.segment(n, n);
    const double m = y(2 * n), r = y(2 * n + 1);
    Eigen::VectorXd dy(2 * n + 2);
    dy.segment(0, n) = model.a * q + cpp * (m + r);
    const Eigen::VectorXd qdot = -potential_gradient(topology, phi);
    dy.segment(n, n) = qdot;
    dy(2 * n) = -m / model.tau + model.p.dot(qdot);
    dy(2 * n + 1) = -r / model.tau + drive(t) / model.tau;
    return dy;
  };
  prob.linear = topology.linear();
  if (prob.linear) {
    const Eigen::MatrixXd k = inductance_stiffness(topology);
    prob.m = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 2);
    prob.m.block(0, n, n, n) = model.a;
    prob.m.block(0, 2 * n, n, 1) = cpp;
    prob.m.block(0, 2 * n + 1, n, 1) = cpp;
    prob.m.block(n, 0, n, n) = -k;
    prob.m.block(2 * n, 0, 1, n) = -(model.p.transpose() * k);
    prob.m(2 * n, 2 * n) = -1.0 / model.tau;
    prob.m(2 * n + 1, 2 * n + 1) = -1.0 / model.tau;
    prob.b = Eigen::VectorXd::Zero(2 * n + 2);
    prob.b(2 * n + 1) = 1.0 / model.tau;
  }
  prob.drive = drive;
  prob.fastest_rate = ReducedRhs(model, topology).fastest_rate();

  Eigen::VectorXd y0(2 * n + 2);
  y0 << initial.phi, initial.q, 0.0, initial.v0(model);

  Trajectory traj;
  traj.grid = grid;
  const auto ys = run_uniform(prob, y0, grid, integrator, traj.warnings);
  traj.integrator = std::string("langevin/") + to_string(integrator);
  for (const auto& y : ys) {
    ReducedState s{y.segment(0, n), y.segment(n, n), 0.0};
    const double v0 = y(2 * n) + y(2 * n + 1);
    s.q0 = model.c_p * (v0 - model.p.dot(s.q));
    traj.states.push_back(std::move(s));
    traj.v0.push_back(v0);
  }
  return traj;
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InputError("relative_l2: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace tlq
