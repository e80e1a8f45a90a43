#include "tlq/quantum.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "tlq/errors.hpp"
#include "tlq/reduced_dynamics.hpp"

namespace tlq {

namespace {

void require_linear(const CircuitTopology& topology) {
  if (!topology.linear()) throw ModelError("commutator checks require linear dynamics");
}

}  // namespace

Propagator propagator_of(const CircuitTopology& topology, double t) {
  validate(topology);
  require_linear(topology);
  // The line end is held at zero flux, so C_c loads node 1 to ground.
  const int n = topology.node_count;
  Eigen::MatrixXd mass = reduce_ground(build_capacitance_matrix(topology), n);
  mass(0, 0) += topology.coupling_capacitance;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = mass.llt().solve(Eigen::MatrixXd::Identity(n, n));
  g.bottomLeftCorner(n, n) = -inductance_stiffness(topology);
  return Propagator{(g * t).exp(), "isolated circuit", t, 0.0};
}

Propagator propagator_of(const ReducedModel& model, const CircuitTopology& topology, double t) {
  require_linear(topology);
  const int n = model.size();
  const int m = n + 1;  // Φ1..ΦN, Φ0
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  // Φ̇ = Cb⁻¹Q + pQ0, Φ̇0 = pᵀQ + Q0/C_p, Q̇ = −KΦ, Q̇0 = −Q0/τ − pᵀQ/Z_c
  g.block(0, m, n, n) = model.cb_inv;
  g.block(0, m + n, n, 1) = model.p;
  g.block(n, m, 1, n) = model.p.transpose();
  g(n, m + n) = 1.0 / model.c_p;
  g.block(m, 0, n, n) = -inductance_stiffness(topology);
  g.block(m + n, m, 1, n) = -model.p.transpose() / model.z_c;
  g(m + n, m + n) = -1.0 / model.tau;
  return Propagator{(g * t).exp(), "reduced open model", t, 0.0};
}

Propagator propagator_of(const LadderSystem& ladder, double t, double dt, Backend backend) {
  require_linear(ladder.topology());
  if (!(dt > 0.0) || t < 0.0) throw InputError("propagator needs dt > 0 and t >= 0");
  const auto steps = static_cast<std::size_t>(std::llround(t / dt));
  const auto d = static_cast<Eigen::Index>(ladder.dimension());
  Eigen::MatrixXd s(2 * d, 2 * d);
  // Columns are independent trajectories; the step itself stays serial inside the loop.
  const Backend inner = backend == Backend::omp ? Backend::serial : backend;
#pragma omp parallel for schedule(dynamic) if (backend == Backend::omp)
  for (Eigen::Index c = 0; c < 2 * d; ++c) {
    std::vector<double> x(static_cast<std::size_t>(d), 0.0), p(static_cast<std::size_t>(d), 0.0);
    if (c < d)
      x[static_cast<std::size_t>(c)] = 1.0;
    else
      p[static_cast<std::size_t>(c - d)] = 1.0;
    for (std::size_t k = 0; k < steps; ++k) ladder.step_point(x, p, dt, inner);
    for (Eigen::Index r = 0; r < d; ++r) {
      s(r, c) = x[static_cast<std::size_t>(r)];
      s(d + r, c) = p[static_cast<std::size_t>(r)];
    }
  }
  return Propagator{std::move(s), "closed ladder", static_cast<double>(steps) * dt, dt};
}

Eigen::MatrixXd symplectic_form(Eigen::Index n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

double commutator_residual(const Propagator& prop) {
  const auto& s = prop.matrix;
  if (s.rows() != s.cols()) throw InputError("propagator must be square");
  if (s.rows() % 2 != 0) throw InputError("propagator dimension must be even");
  const Eigen::MatrixXd j = symplectic_form(s.rows() / 2);
  return (s.transpose() * j * s - j).cwiseAbs().maxCoeff();
}

nlohmann::json residual_report(const Propagator& prop) {
  return {{"symplectic_residual", commutator_residual(prop)},
          {"t", prop.t},
          {"dt", prop.dt},
          {"system", prop.system}};
}

bool satisfies_uncertainty(const GaussianMoments& m, double hbar) {
  const Eigen::Index n = m.cov.rows();
  if (n % 2 != 0 || m.cov.cols() != n) throw InputError("covariance must be square of even size");
  const Eigen::MatrixXcd h =
      m.cov.cast<Complex>() + Complex(0.0, 0.5 * hbar) * symplectic_form(n / 2).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, m.cov.cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -1e-12 * scale;
}

GaussianMoments propagate_gaussian(const GaussianMoments& moments, const Propagator& prop,
                                   bool noise_free) {
  if (!noise_free)
    throw InputError(
        "only the deterministic part is propagated: the vacuum noise carried by the line input "
        "e0 is not injected; pass noise_free = true to accept this");
  const auto& s = prop.matrix;
  if (moments.mean.size() != s.cols() || moments.cov.rows() != s.cols() ||
      moments.cov.cols() != s.cols())
    throw InputError("moment dimensions do not match the propagator");
  GaussianMoments out;
  out.mean = s * moments.mean;
  out.cov = s * moments.cov * s.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

LangevinWeakResult langevin_weak(const LcExampleParams& params, const std::optional<Signal>& drive,
                                 double phi1_initial, double phi1_dot_initial,
                                 const TimeGrid& grid) {
  if (grid.count == 0) throw InputError("empty time grid");
  const double g = params.g();
  const WeakCoupling wc = weak_coupling(g, params.alpha(), params.omega_r());
  LangevinWeakResult out;
  out.kappa = wc.kappa;
  out.omega_renormalized = wc.omega_renormalized;
  if (params.omega_r() * params.tau() > 0.1)
    out.warnings.push_back("Markov approximation questionable: omega_r * tau > 0.1");

  auto v = [&](double t) { return drive ? drive->at(t, DomainPolicy::zero_extend) : 0.0; };
  // With y = Φ̇1 − 2g v the derivative of the drive drops out:
  //   Φ̇1 = y + 2g v,   ẏ = −Ω²Φ1 − κ y − 2gκ v.
  Eigen::Matrix2d m;
  m << 0.0, 1.0, -wc.omega_renormalized * wc.omega_renormalized, -wc.kappa;
  Eigen::VectorXd b(2);
  b << 2.0 * g, -2.0 * g * wc.kappa;
  Eigen::VectorXd x(2);
  x << phi1_initial, phi1_dot_initial - 2.0 * g * v(grid.t0);

  std::vector<double> phi(grid.count);
  phi[0] = x(0);
  if (grid.count > 1) {
    const ExponentialStep step(m, b, grid.dt);
    for (std::size_t k = 1; k < grid.count; ++k) {
      x = step.apply(x, v(grid.at(k - 1)), v(grid.at(k)), grid.dt);
      phi[k] = x(0);
    }
  }
  out.phi1 = Signal(grid, std::move(phi));
  return out;
}

std::vector<std::pair<double, double>> envelope_peaks(const TimeGrid& grid,
                                                      const std::vector<double>& x) {
  std::vector<std::pair<double, double>> peaks;
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    const double a = std::abs(x[k - 1]), b = std::abs(x[k]), c = std::abs(x[k + 1]);
    if (!(b >= a && b > c)) continue;
    // Parabolic refinement through the three samples.
    const double den = a - 2.0 * b + c;
    const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
    peaks.emplace_back(grid.at(k) + shift * grid.dt, b - 0.25 * (a - c) * shift);
  }
  return peaks;
}

}  // namespace tlq
