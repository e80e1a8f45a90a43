#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "tlq/errors.hpp"
#include "tlq/quantum.hpp"

using namespace tlq;
using tlq::testing::lc_line;
using tlq::testing::lc_topology;

TEST_SUITE("quantum") {

TEST_CASE("symplectic form and the identity propagator") {
  const Eigen::MatrixXd j = symplectic_form(2);
  CHECK(j(0, 2) == 1.0);
  CHECK(j(2, 0) == -1.0);
  CHECK((j.transpose() + j).norm() == 0.0);
  Propagator id{Eigen::MatrixXd::Identity(6, 6), "identity"};
  CHECK(commutator_residual(id) == 0.0);
  CHECK_THROWS_AS(commutator_residual(Propagator{Eigen::MatrixXd::Identity(3, 3), "odd"}), InputError);
  CHECK_THROWS_AS(commutator_residual(Propagator{Eigen::MatrixXd::Zero(2, 4), "rect"}), InputError);
}

TEST_CASE("lumped circuit propagator") {
  LcExampleParams p;
  p.c_c = 1e-12;
  const CircuitTopology topo = lc_topology(p);
  const Propagator zero = propagator_of(topo, 0.0);
  CHECK((zero.matrix - Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-15);

  // A quarter period maps Φ → Q/C and Q → −CωΦ.
  const Propagator quarter = propagator_of(topo, std::numbers::pi / 2.0);
  CHECK(std::abs(quarter.matrix(0, 0)) <= 1e-6);
  CHECK(quarter.matrix(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(quarter.matrix(1, 0) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(quarter.matrix.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(commutator_residual(quarter) <= 1e-12);

  CircuitTopology jj = topo;
  jj.junctions.push_back({1, 2, 1.0, 1.0});
  try {
    propagator_of(jj, 1.0);
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(std::string(e.what()) == "commutator checks require linear dynamics");
  }
}

TEST_CASE("random linear circuits conserve the symplectic form") {
  std::mt19937_64 rng(7);
  int checked = 0;
  while (checked < 20) {
    CircuitTopology t = tlq::testing::random_topology(rng, 6);
    if (!t.linear()) continue;
    // Rescale to O(1) element values so the residual is measured in natural units.
    for (auto& c : t.capacitors) c.value *= 1e13;
    for (auto& l : t.inductors) l.value *= 1e9;
    t.coupling_capacitance *= 1e13;
    CHECK(commutator_residual(propagator_of(t, 3.7)) <= 1e-10);
    ++checked;
  }
}

TEST_CASE("the open reduced model is not symplectic") {
  const LcExampleParams p = LcExampleParams::from_normalized(0.3, 2.0);
  const CircuitTopology topo = lc_topology(p);
  const Propagator s = propagator_of(derive_reduced_model(topo, p.z_c), topo, 5.0);
  CHECK(s.matrix.rows() == 4);
  CHECK(commutator_residual(s) > 1e-3);
}

TEST_CASE("propagated mean follows the classical trajectory") {
  const LcExampleParams p = LcExampleParams::from_normalized(0.3, 2.0);
  const CircuitTopology topo = lc_topology(p);
  const ReducedModel model = derive_reduced_model(topo, p.z_c);
  ReducedState init = ReducedState::zeros(1);
  init.phi(0) = 0.8;
  init.q0 = 0.1;
  const TimeGrid grid = TimeGrid::span(7.0, 0.01);
  const Trajectory traj = integrate(assemble_rhs(model, topo), init, grid);
  const Propagator s = propagator_of(model, topo, grid.back());
  GaussianMoments m;
  m.mean = Eigen::Vector4d(0.8, 0.0, 0.0, 0.1);  // [Φ1, Φ0; Q1, Q0]
  m.cov = Eigen::Matrix4d::Zero();
  const GaussianMoments out = propagate_gaussian(m, s, true);
  const ReducedState& last = traj.states.back();
  CHECK(std::abs(out.mean(0) - last.phi(0)) <= 1e-10);
  CHECK(std::abs(out.mean(2) - last.q(0)) <= 1e-10);
  CHECK(std::abs(out.mean(3) - last.q0) <= 1e-10);

  GaussianMoments vac{Eigen::Vector4d::Zero(), 0.5 * Eigen::Matrix4d::Identity()};
  CHECK(propagate_gaussian(vac, s, true).mean.norm() == 0.0);
}

TEST_CASE("closed ladder propagator is symplectic with either backend") {
  const LcExampleParams p = LcExampleParams::from_normalized(0.3, 2.0);
  const LineParams line = lc_line(p);
  const double dt = 0.01;
  const LadderSystem ladder(line, lc_topology(p), 100, 2.0);
  const Propagator a = propagator_of(ladder, 2.0, dt, Backend::serial);
  const Propagator b = propagator_of(ladder, 2.0, dt, Backend::omp);
  CHECK(a.matrix.rows() == 2 * 102);
  CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(commutator_residual(a) <= 1e-9);
  CHECK(a.matrix.determinant() == doctest::Approx(1.0).epsilon(1e-8));
  const auto report = residual_report(a);
  for (const char* key : {"symplectic_residual", "t", "dt", "system"}) CHECK(report.contains(key));
  CHECK_THROWS_AS(propagator_of(ladder, 1.0, 0.0), InputError);
}

TEST_CASE("Gaussian moments under a symplectic map") {
  LcExampleParams p;
  p.c_c = 0.1;
  const Propagator s = propagator_of(lc_topology(p), 1.3);
  GaussianMoments vac;
  vac.mean = Eigen::Vector2d(0.4, -0.2);
  vac.cov = 0.5 * Eigen::Matrix2d::Identity();
  CHECK(satisfies_uncertainty(vac));
  const GaussianMoments out = propagate_gaussian(vac, s, true);
  CHECK((out.mean - s.matrix * vac.mean).norm() <= 1e-10);
  CHECK(out.cov.determinant() == doctest::Approx(vac.cov.determinant()).epsilon(1e-10));
  CHECK(satisfies_uncertainty(out));
  CHECK_THROWS_AS(propagate_gaussian(vac, s, false), InputError);

  GaussianMoments squeezed_too_far = vac;
  squeezed_too_far.cov = Eigen::Vector2d(0.1, 0.5).asDiagonal();
  CHECK_FALSE(satisfies_uncertainty(squeezed_too_far));
  GaussianMoments odd{Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3)};
  CHECK_THROWS_AS(satisfies_uncertainty(odd), InputError);
}

TEST_CASE("weak Langevin oscillator matches the damped closed form") {
  const LcExampleParams p = LcExampleParams::from_normalized(0.05, 0.5);
  const TimeGrid grid = TimeGrid::span(200.0, 0.01);
  const LangevinWeakResult r = langevin_weak(p, std::nullopt, 1.0, 0.0, grid);
  CHECK(r.warnings.empty());
  const double k = r.kappa, w = r.omega_renormalized;
  CHECK(k == doctest::Approx(weak_coupling(0.05, 0.5).kappa));
  const double wd = std::sqrt(w * w - k * k / 4.0);
  for (std::size_t i = 0; i < grid.count; i += 101) {
    const double t = grid.at(i);
    const double exact = std::exp(-k * t / 2.0) * (std::cos(wd * t) + k / (2.0 * wd) * std::sin(wd * t));
    CHECK(std::abs(r.phi1[i] - exact) <= 1e-8);
  }
  const auto peaks = envelope_peaks(grid, r.phi1.samples());
  REQUIRE(peaks.size() > 10);
  CHECK(peaks[0].first == doctest::Approx(std::numbers::pi / wd).epsilon(1e-3));

  const LangevinWeakResult strong = langevin_weak(LcExampleParams::from_normalized(0.5, 2.0), std::nullopt, 1.0,
                                                  0.0, TimeGrid::span(10.0, 0.01));
  REQUIRE_FALSE(strong.warnings.empty());
  CHECK(strong.warnings.front().find("Markov") != std::string::npos);
}

TEST_CASE("envelope peaks refine a sampled cosine") {
  const TimeGrid grid = TimeGrid::span(20.0, 0.05);
  std::vector<double> x(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) x[i] = std::cos(1.1 * grid.at(i) + 0.3);
  const auto peaks = envelope_peaks(grid, x);
  REQUIRE(peaks.size() >= 5);
  for (const auto& [t, v] : peaks) {
    CHECK(v == doctest::Approx(1.0).epsilon(1e-3));
    const double phase = std::fmod(1.1 * t + 0.3, std::numbers::pi);
    CHECK(std::min(phase, std::numbers::pi - phase) <= 1e-2);
  }
}

}
